"""Problem instances: sparse design data, losses, sides, Lipschitz constants.

A problem is a finite average of smooth convex components over a sparse
row-major design matrix, plus an optional linear term shared by every
component, and carries exactly one "side": a polyhedral constraint set
(l1 ball or box) or an l1 regularizer.  Two losses are supported,
averaged least squares and binary logistic regression.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Union

import numpy as np
import scipy.sparse as sp
from scipy.special import expit

LEAST_SQUARES = "least_squares"
LOGISTIC = "logistic"

_LOSS_KINDS = (LEAST_SQUARES, LOGISTIC)


class SparseDesignMatrix:
    """Row-major sparse matrix with cached per-row squared norms.

    Parameters
    ----------
    n_rows, n_cols : int
        Matrix shape.
    rows : sequence
        One entry list per row, each a sequence of ``(index, value)``
        pairs with strictly increasing indices below ``n_cols``.

    Notes
    -----
    Storage is CSR; ``row_sq_norms`` is filled at construction so that
    per-component Lipschitz constants are O(1) lookups afterwards.
    """

    def __init__(self, n_rows, n_cols, rows):
        n_rows = int(n_rows)
        n_cols = int(n_cols)
        if n_rows < 0 or n_cols < 0:
            raise ValueError("matrix shape must be nonnegative")
        if len(rows) != n_rows:
            raise ValueError(f"expected {n_rows} rows, got {len(rows)}")
        indptr = np.zeros(n_rows + 1, dtype=np.int64)
        idx_chunks = []
        val_chunks = []
        for i, row in enumerate(rows):
            if len(row):
                idx = np.asarray([int(j) for j, _ in row], dtype=np.int64)
                val = np.asarray([float(v) for _, v in row], dtype=np.float64)
            else:
                idx = np.empty(0, dtype=np.int64)
                val = np.empty(0, dtype=np.float64)
            if idx.size:
                if idx[0] < 0 or idx[-1] >= n_cols or np.any(np.diff(idx) <= 0):
                    raise ValueError(
                        f"row {i}: column indices must be strictly increasing and in [0, {n_cols})"
                    )
            if not np.all(np.isfinite(val)):
                raise ValueError(f"row {i}: non-finite value")
            indptr[i + 1] = indptr[i] + idx.size
            idx_chunks.append(idx)
            val_chunks.append(val)
        self.n_rows = n_rows
        self.n_cols = n_cols
        self.indptr = indptr
        self.indices = np.concatenate(idx_chunks) if idx_chunks else np.empty(0, np.int64)
        self.data = np.concatenate(val_chunks) if val_chunks else np.empty(0, np.float64)
        self._csr = sp.csr_matrix(
            (self.data, self.indices, self.indptr), shape=(n_rows, n_cols), copy=False
        )
        sq = self._csr.multiply(self._csr).sum(axis=1)
        self.row_sq_norms = np.asarray(sq).ravel()

    @classmethod
    def from_dense(cls, arr) -> "SparseDesignMatrix":
        """Build from a dense 2-D array, dropping exact zeros."""
        arr = np.asarray(arr, dtype=np.float64)
        if arr.ndim != 2:
            raise ValueError("expected a 2-D array")
        rows = []
        for i in range(arr.shape[0]):
            nz = np.nonzero(arr[i])[0]
            rows.append(list(zip(nz.tolist(), arr[i, nz].tolist())))
        return cls(arr.shape[0], arr.shape[1], rows)

    @property
    def shape(self):
        return (self.n_rows, self.n_cols)

    def row(self, i):
        """Return (indices, values) views of row i. No copies."""
        lo, hi = self.indptr[i], self.indptr[i + 1]
        return self.indices[lo:hi], self.data[lo:hi]

    def row_dot(self, i, w) -> float:
        idx, val = self.row(i)
        return float(val @ w[idx])

    def matvec(self, w) -> np.ndarray:
        return self._csr @ w

    def rmatvec(self, u) -> np.ndarray:
        return self._csr.T @ u

    def row_l1_norms(self) -> np.ndarray:
        absX = self._csr.copy()
        absX.data = np.abs(absX.data)
        return np.asarray(absX.sum(axis=1)).ravel()

    def toarray(self) -> np.ndarray:
        return self._csr.toarray()


@dataclass
class LossSpec:
    """Loss family plus labels. Logistic labels must be +/-1."""

    kind: str
    labels: np.ndarray

    def __post_init__(self):
        if self.kind not in _LOSS_KINDS:
            raise ValueError(f"unknown loss kind {self.kind!r}; valid: {_LOSS_KINDS}")
        self.labels = np.asarray(self.labels, dtype=np.float64).ravel()
        if not np.all(np.isfinite(self.labels)):
            raise ValueError("labels must be finite")
        if self.kind == LOGISTIC and not np.all(np.abs(self.labels) == 1.0):
            raise ValueError("logistic labels must be +1 or -1")


@dataclass(frozen=True)
class L1Ball:
    """Feasible set {w : ||w||_1 <= tau}, tau > 0."""

    tau: float

    def __post_init__(self):
        if not (self.tau > 0 and np.isfinite(self.tau)):
            raise ValueError("tau must be positive and finite")


@dataclass
class Box:
    """Feasible set {w : lower <= w <= upper}, bounds finite."""

    lower: np.ndarray
    upper: np.ndarray

    def __post_init__(self):
        self.lower = np.asarray(self.lower, dtype=np.float64).ravel()
        self.upper = np.asarray(self.upper, dtype=np.float64).ravel()
        if self.lower.shape != self.upper.shape:
            raise ValueError("box bounds must have matching shapes")
        if not (np.all(np.isfinite(self.lower)) and np.all(np.isfinite(self.upper))):
            raise ValueError("box bounds must be finite")
        if np.any(self.lower > self.upper):
            raise ValueError("box requires lower <= upper componentwise")


@dataclass(frozen=True)
class L1Regularizer:
    """Penalty lam * ||w||_1, lam >= 0 (lam = 0 means plain smooth minimization)."""

    lam: float

    def __post_init__(self):
        if not (self.lam >= 0 and np.isfinite(self.lam)):
            raise ValueError("lam must be nonnegative and finite")


Constraint = Union[L1Ball, Box]


@dataclass
class ProblemSpec:
    """A design matrix, a loss, an optional linear term, and exactly one side.

    The objective is

        f(w) = (1/n) sum_i loss_i(x_i' w) + q' w

    minimized either over the constraint set or with the l1 penalty added.
    """

    matrix: SparseDesignMatrix
    loss: LossSpec
    q: Optional[np.ndarray] = None
    constraint: Optional[Constraint] = None
    regularizer: Optional[L1Regularizer] = None

    def __post_init__(self):
        if (self.constraint is None) == (self.regularizer is None):
            raise ValueError("exactly one of constraint or regularizer must be given")
        if self.loss.labels.size != self.matrix.n_rows:
            raise ValueError(
                f"label count {self.loss.labels.size} != row count {self.matrix.n_rows}"
            )
        if self.q is None:
            self.q = np.zeros(self.matrix.n_cols)
        else:
            self.q = np.asarray(self.q, dtype=np.float64).ravel()
            if self.q.size != self.matrix.n_cols:
                raise ValueError(f"q has length {self.q.size}, expected {self.matrix.n_cols}")
            if not np.all(np.isfinite(self.q)):
                raise ValueError("q must be finite")
        if isinstance(self.constraint, Box) and self.constraint.lower.size != self.matrix.n_cols:
            raise ValueError("box bounds must have one entry per column")

    @property
    def n(self) -> int:
        return self.matrix.n_rows

    @property
    def d(self) -> int:
        return self.matrix.n_cols

    @property
    def is_constrained(self) -> bool:
        return self.constraint is not None


def _check_w(problem, w):
    w = np.asarray(w, dtype=np.float64).ravel()
    if w.size != problem.d:
        raise ValueError(f"iterate has length {w.size}, expected {problem.d}")
    return w


def smooth_value(problem: ProblemSpec, w) -> float:
    """Smooth part f(w) = (1/n) sum_i loss_i(x_i' w) + q' w."""
    w = _check_w(problem, w)
    u = problem.matrix.matvec(w)
    return _smooth_from_margins(problem, u) + float(problem.q @ w)


def _smooth_from_margins(problem, u) -> float:
    y = problem.loss.labels
    n = problem.n
    if problem.loss.kind == LEAST_SQUARES:
        r = u - y
        return float(r @ r) / (2.0 * n)
    # log(1 + exp(-z)) as logaddexp(0, -z): exact for large |z|, no overflow
    return float(np.logaddexp(0.0, -y * u).sum()) / n


def margin_coefficients(problem: ProblemSpec, u) -> np.ndarray:
    """Per-component scalar a_i with grad f_i(w) = a_i * x_i + q, at margins u = X w.

    Least squares: a_i = u_i - y_i.  Logistic: a_i = -y_i * sigmoid(-y_i u_i),
    computed through expit so extreme margins saturate instead of overflowing.
    """
    y = problem.loss.labels
    if problem.loss.kind == LEAST_SQUARES:
        return u - y
    return -y * expit(-y * u)


def eval_objective(problem: ProblemSpec, w) -> float:
    """Objective at w: f(w) for constrained problems, f(w) + lam*||w||_1 for regularized."""
    w = _check_w(problem, w)
    val = smooth_value(problem, w)
    if problem.regularizer is not None and problem.regularizer.lam > 0:
        val += problem.regularizer.lam * float(np.abs(w).sum())
    return val


def component_value(problem: ProblemSpec, i: int, w) -> float:
    """Value of the single component f_i(w) = loss_i(x_i' w) + q' w."""
    w = _check_w(problem, w)
    if not 0 <= i < problem.n:
        raise IndexError(f"component index {i} out of range [0, {problem.n})")
    u = problem.matrix.row_dot(i, w)
    y = problem.loss.labels[i]
    if problem.loss.kind == LEAST_SQUARES:
        v = 0.5 * (u - y) ** 2
    else:
        v = float(np.logaddexp(0.0, -y * u))
    return v + float(problem.q @ w)


def eval_component_grad(problem: ProblemSpec, i: int, w) -> np.ndarray:
    """Gradient of f_i at w, returned dense.

    The support is the union of row i's support and q's; callers that need
    the sparse structure should use ``matrix.row(i)`` with
    ``margin_coefficients`` directly, which is what the solvers do.
    """
    w = _check_w(problem, w)
    if not 0 <= i < problem.n:
        raise IndexError(f"component index {i} out of range [0, {problem.n})")
    idx, val = problem.matrix.row(i)
    u = float(val @ w[idx])
    y = problem.loss.labels[i]
    if problem.loss.kind == LEAST_SQUARES:
        a = u - y
    else:
        a = -y * float(expit(-y * u))
    g = problem.q.copy()
    g[idx] += a * val
    return g


def eval_full_grad(problem: ProblemSpec, w) -> np.ndarray:
    """Gradient of the smooth part f at w (one pass over the matrix)."""
    w = _check_w(problem, w)
    u = problem.matrix.matvec(w)
    a = margin_coefficients(problem, u)
    return problem.matrix.rmatvec(a) / problem.n + problem.q


def component_lipschitz(problem: ProblemSpec, i: int) -> float:
    """Smoothness constant of component i: ||x_i||^2, or ||x_i||^2 / 4 for logistic.

    A zero row gives 0; such components are degenerate and get excluded
    from Lipschitz-proportional sampling.
    """
    if not 0 <= i < problem.n:
        raise IndexError(f"component index {i} out of range [0, {problem.n})")
    sq = problem.matrix.row_sq_norms[i]
    return float(sq) if problem.loss.kind == LEAST_SQUARES else float(sq) / 4.0


@dataclass
class LipschitzInfo:
    """Per-component and aggregate smoothness constants for one problem.

    ``global_bound`` is a power-iteration estimate of the full-gradient
    constant sigma_max(X)^2 / n (over 4n for logistic); it never exceeds
    the component average, which never exceeds the component max.
    """

    per_component: np.ndarray
    avg: float
    max_component: float
    global_bound: float
    degenerate: np.ndarray = field(repr=False)


def compute_lipschitz_info(problem: ProblemSpec, power_iterations: int = 50,
                           tol: float = 1e-8) -> LipschitzInfo:
    """Compute per-component constants and the power-iteration global bound."""
    scale = 1.0 if problem.loss.kind == LEAST_SQUARES else 0.25
    per = problem.matrix.row_sq_norms * scale
    if per.size == 0:
        raise ValueError("problem has no components")
    degenerate = per == 0.0
    n = problem.n
    sigma_sq = _top_singular_sq(problem.matrix, power_iterations, tol)
    return LipschitzInfo(
        per_component=per,
        avg=float(per.mean()),
        max_component=float(per.max()),
        global_bound=sigma_sq * scale / n,
        degenerate=degenerate,
    )


def _top_singular_sq(matrix, iterations, tol):
    # largest eigenvalue of X'X by power iteration; fixed-seed start so the
    # result is deterministic and (up to the convergence tolerance) a lower
    # estimate, keeping global_bound <= avg exact
    d = matrix.n_cols
    if d == 0 or matrix.data.size == 0:
        return 0.0
    rng = np.random.Generator(np.random.Philox(0x5EED))
    v = rng.standard_normal(d)
    v /= np.linalg.norm(v)
    lam = 0.0
    for _ in range(iterations):
        z = matrix.rmatvec(matrix.matvec(v))
        nz = float(np.linalg.norm(z))
        if nz == 0.0:
            return 0.0
        v = z / nz
        if abs(nz - lam) <= tol * max(nz, 1.0):
            return nz
        lam = nz
    return lam


def aggregate_lipschitz(info: LipschitzInfo, p) -> float:
    """Sampling-weighted constant max_i L_i / (n p_i) for a distribution p.

    Accepts a SamplingDistribution or a plain probability vector.  Requires
    p_i > 0 wherever L_i > 0.  Always at least the component average,
    with equality exactly for Lipschitz-proportional sampling; uniform
    sampling gives the component max.
    """
    probs = np.asarray(getattr(p, "p", p), dtype=np.float64).ravel()
    per = info.per_component
    if probs.size != per.size:
        raise ValueError(f"distribution has {probs.size} entries, expected {per.size}")
    pos = probs > 0.0
    if np.any(per[~pos] > 0.0):
        raise ValueError("zero probability on a component with positive Lipschitz constant")
    if not np.any(pos):
        return 0.0
    n = per.size
    return float(np.max(per[pos] / (n * probs[pos]), initial=0.0))
