"""Dataset I/O (libsvm text format) and seeded synthetic generation."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .problems import LEAST_SQUARES, LOGISTIC, SparseDesignMatrix


class ParseError(ValueError):
    """Malformed dataset line; message carries the 1-based line number."""


def read_libsvm(path, n_cols: int = None, task: str = None, remap01: bool = False):
    """Read a libsvm-format text file.

    Each data line is ``label idx:val idx:val ...`` with 1-based, strictly
    increasing feature indices.  Labels are parsed as reals; with
    ``task="logistic"`` they must come out as +/-1, optionally after the
    {0,1} -> {-1,+1} remap.  Returns (SparseDesignMatrix, labels).
    """
    labels = []
    rows = []
    max_idx = 0
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            parts = line.split()
            try:
                label = float(parts[0])
            except ValueError:
                raise ParseError(f"{path}:{lineno}: bad label {parts[0]!r}") from None
            entries = []
            prev = 0
            for tok in parts[1:]:
                idx_s, _, val_s = tok.partition(":")
                try:
                    idx = int(idx_s)
                    val = float(val_s)
                except ValueError:
                    raise ParseError(f"{path}:{lineno}: bad feature entry {tok!r}") from None
                if idx < 1:
                    raise ParseError(f"{path}:{lineno}: feature indices are 1-based, got {idx}")
                if idx <= prev:
                    raise ParseError(
                        f"{path}:{lineno}: feature indices must be strictly increasing"
                    )
                prev = idx
                entries.append((idx - 1, val))
            max_idx = max(max_idx, prev)
            labels.append(label)
            rows.append(entries)
    if not rows:
        raise ValueError(f"{path}: no data lines")
    y = np.asarray(labels, dtype=np.float64)
    if remap01:
        bad = ~np.isin(y, (0.0, 1.0))
        if np.any(bad):
            raise ValueError(f"{path}: remap01 requires labels in {{0, 1}}")
        y = 2.0 * y - 1.0
    if task == LOGISTIC and not np.all(np.abs(y) == 1.0):
        raise ValueError(f"{path}: logistic task requires +/-1 labels")
    if n_cols is None:
        n_cols = max_idx
    elif n_cols < max_idx:
        raise ValueError(f"n_cols={n_cols} but file has feature index {max_idx}")
    return SparseDesignMatrix(len(rows), n_cols, rows), y


def write_libsvm(path, matrix: SparseDesignMatrix, labels) -> None:
    """Write (matrix, labels) in libsvm format, 17 significant digits."""
    labels = np.asarray(labels, dtype=np.float64).ravel()
    if labels.size != matrix.n_rows:
        raise ValueError("label count must match row count")
    with open(path, "w", encoding="utf-8") as fh:
        for i in range(matrix.n_rows):
            idx, val = matrix.row(i)
            toks = [f"{labels[i]:.17g}"]
            toks.extend(f"{j + 1}:{v:.17g}" for j, v in zip(idx, val))
            fh.write(" ".join(toks) + "\n")


@dataclass
class SyntheticSpec:
    """Recipe for a seeded low-rank instance with prescribed row-norm spread.

    Rows of a rank-``rank`` Gaussian product are normalized and rescaled to
    norms running geometrically from 1 up to ``row_scale_spread``, so the
    component Lipschitz constants span a factor of spread^2.  Labels come
    from a planted sparse parameter (a few strong coordinates, so that an
    l1 ball or penalty recovers a small active set), with additive noise
    (least squares) or noisy-margin signs (logistic).
    """

    n: int
    d: int
    rank: int
    task: str = LEAST_SQUARES
    noise_std: float = 0.0
    row_scale_spread: float = 1.0
    seed: int = 0

    def __post_init__(self):
        if self.n < 1 or self.d < 1:
            raise ValueError("n and d must be positive")
        if not 1 <= self.rank <= min(self.n, self.d):
            raise ValueError("rank must lie in [1, min(n, d)]")
        if self.task not in (LEAST_SQUARES, LOGISTIC):
            raise ValueError(f"unknown task {self.task!r}")
        if self.noise_std < 0:
            raise ValueError("noise_std must be nonnegative")
        if self.row_scale_spread < 1.0:
            raise ValueError("row_scale_spread must be >= 1")


def gen_synthetic(spec: SyntheticSpec):
    """Generate (matrix, labels, numerical_rank). Bitwise-reproducible per seed."""
    rng = np.random.Generator(np.random.Philox(spec.seed))
    X = rng.standard_normal((spec.n, spec.rank)) @ rng.standard_normal((spec.rank, spec.d))
    norms = np.linalg.norm(X, axis=1)
    if np.any(norms == 0.0):  # measure-zero, but keep the rescale well-defined
        norms[norms == 0.0] = 1.0
    if spec.n > 1:
        scales = spec.row_scale_spread ** (np.arange(spec.n) / (spec.n - 1.0))
    else:
        scales = np.ones(1)
    X *= (scales / norms)[:, None]
    # sparse planted parameter: ceil(d/10) coordinates, magnitudes in [3, 6)
    k_signal = max(1, -(-spec.d // 10))
    support = rng.choice(spec.d, size=k_signal, replace=False)
    w_true = np.zeros(spec.d)
    w_true[support] = rng.choice([-1.0, 1.0], size=k_signal) * (
        3.0 + 3.0 * rng.random(k_signal)
    )
    margins = X @ w_true
    if spec.task == LEAST_SQUARES:
        y = margins + spec.noise_std * rng.standard_normal(spec.n)
    else:
        noisy = margins + spec.noise_std * rng.standard_normal(spec.n)
        y = np.where(noisy >= 0.0, 1.0, -1.0)
    sv = np.linalg.svd(X, compute_uv=False)
    num_rank = int(np.sum(sv > 1e-8 * sv[0])) if sv.size and sv[0] > 0 else 0
    return SparseDesignMatrix.from_dense(X), y, num_rank
