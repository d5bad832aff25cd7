"""Euclidean projections onto the supported feasible sets, and the l1 prox."""

from __future__ import annotations

import numpy as np


def project_l1_ball(v, tau: float) -> np.ndarray:
    """Project v onto {w : ||w||_1 <= tau}.

    Sort-and-threshold: the projection is sign(v) * max(|v| - theta, 0)
    where theta >= 0 is the smallest shift making the result feasible.
    Points already inside the ball are returned unchanged (as a copy).

    Raises ValueError for tau <= 0 or non-finite input.
    """
    v = np.asarray(v, dtype=np.float64).ravel()
    if not (tau > 0 and np.isfinite(tau)):
        raise ValueError("tau must be positive and finite")
    if not np.all(np.isfinite(v)):
        raise ValueError("cannot project a non-finite vector")
    mags = np.abs(v)
    if mags.sum() <= tau:
        return v.copy()
    # largest k with s_(k) > (s_(1)+...+s_(k) - tau)/k, magnitudes sorted descending
    s = np.sort(mags)[::-1]
    csum = np.cumsum(s) - tau
    ks = np.arange(1, v.size + 1)
    k = np.nonzero(s > csum / ks)[0][-1]
    theta = csum[k] / (k + 1.0)
    return np.sign(v) * np.maximum(mags - theta, 0.0)


def project_box(v, lower, upper) -> np.ndarray:
    """Clamp v componentwise into [lower, upper]."""
    v = np.asarray(v, dtype=np.float64).ravel()
    lower = np.asarray(lower, dtype=np.float64).ravel()
    upper = np.asarray(upper, dtype=np.float64).ravel()
    if lower.shape != v.shape or upper.shape != v.shape:
        raise ValueError("box bounds must match the vector shape")
    if np.any(lower > upper):
        raise ValueError("box requires lower <= upper componentwise")
    return np.clip(v, lower, upper)


def prox_l1(v, threshold: float) -> np.ndarray:
    """Soft-threshold: argmin_w threshold*||w||_1 + 0.5*||w - v||^2."""
    if threshold < 0:
        raise ValueError("threshold must be nonnegative")
    v = np.asarray(v, dtype=np.float64).ravel()
    return np.sign(v) * np.maximum(np.abs(v) - threshold, 0.0)
