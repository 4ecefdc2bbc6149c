"""Dense symmetric positive definite kernels used by the recursive estimators.

Everything here operates on small matrices (regression order squared), so the
implementation favors explicit, auditable arithmetic over library calls:
a Cholesky factorization with a relative pivot tolerance, triangular solves,
and Sherman-Morrison rank-one maintenance of an explicit inverse together
with the matching log-determinant increment log(1 + v' M^-1 v).
"""

from __future__ import annotations

import math

import numpy as np
from numpy.typing import ArrayLike, NDArray

from .exceptions import SingularMatrixError

# Relative pivot floor: a factorization pivot must exceed this multiple of the
# largest diagonal entry or the matrix is treated as singular.
PIVOT_RTOL = 1e-12

# Number of rank-one updates between full refactorizations of a tracker.
REFACTOR_INTERVAL = 1000


class SymMatrix:
    """Symmetric real matrix with storage-enforced symmetry.

    The lower triangle of the input is mirrored onto the upper triangle at
    construction time, so ``m[i, j] == m[j, i]`` holds exactly.
    """

    __slots__ = ("a",)

    def __init__(self, values: ArrayLike):
        a = np.array(values, dtype=float)
        if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] < 1:
            raise ValueError(f"expected a square matrix, got shape {a.shape}")
        lower = np.tril(a)
        self.a = lower + np.tril(a, -1).T

    @classmethod
    def identity(cls, dim: int) -> "SymMatrix":
        return cls(np.eye(dim))

    @classmethod
    def zeros(cls, dim: int) -> "SymMatrix":
        return cls(np.zeros((dim, dim)))

    @property
    def dim(self) -> int:
        return self.a.shape[0]

    def copy(self) -> "SymMatrix":
        return SymMatrix(self.a)

    def __repr__(self) -> str:
        return f"SymMatrix({self.a!r})"


def _as_array(m: SymMatrix | ArrayLike) -> NDArray[np.float64]:
    if isinstance(m, SymMatrix):
        return m.a
    return np.asarray(m, dtype=float)


def cholesky_factor(m: SymMatrix | ArrayLike) -> NDArray[np.float64]:
    """Lower-triangular L with L L' = m.

    Raises
    ------
    SingularMatrixError
        If any pivot falls at or below PIVOT_RTOL times the largest diagonal
        entry, i.e. the matrix is not positive definite at working precision.
    """
    a = _as_array(m)
    n = a.shape[0]
    threshold = PIVOT_RTOL * float(np.max(np.diag(a), initial=0.0))
    lower = np.zeros_like(a)
    for j in range(n):
        pivot = a[j, j] - lower[j, :j] @ lower[j, :j]
        if not np.isfinite(pivot) or pivot <= threshold:
            raise SingularMatrixError(
                f"pivot {pivot:.3e} at column {j} below tolerance {threshold:.3e}"
            )
        lower[j, j] = math.sqrt(pivot)
        if j + 1 < n:
            lower[j + 1 :, j] = (a[j + 1 :, j] - lower[j + 1 :, :j] @ lower[j, :j]) / lower[j, j]
    return lower


def _solve_lower(lower: NDArray[np.float64], rhs: NDArray[np.float64]) -> NDArray[np.float64]:
    n = lower.shape[0]
    z = np.zeros(n)
    for i in range(n):
        z[i] = (rhs[i] - lower[i, :i] @ z[:i]) / lower[i, i]
    return z


def _solve_upper_t(lower: NDArray[np.float64], rhs: NDArray[np.float64]) -> NDArray[np.float64]:
    # Solves L' x = rhs with L lower triangular.
    n = lower.shape[0]
    x = np.zeros(n)
    for i in reversed(range(n)):
        x[i] = (rhs[i] - lower[i + 1 :, i] @ x[i + 1 :]) / lower[i, i]
    return x


def solve_spd(m: SymMatrix | ArrayLike, rhs: ArrayLike) -> NDArray[np.float64]:
    """Solve m x = rhs for symmetric positive definite m."""
    a = _as_array(m)
    b = np.asarray(rhs, dtype=float)
    if b.shape != (a.shape[0],):
        raise ValueError(f"rhs shape {b.shape} does not match matrix dim {a.shape[0]}")
    lower = cholesky_factor(a)
    return _solve_upper_t(lower, _solve_lower(lower, b))


def spd_inverse(m: SymMatrix | ArrayLike) -> NDArray[np.float64]:
    """Explicit inverse of a symmetric positive definite matrix."""
    a = _as_array(m)
    n = a.shape[0]
    lower = cholesky_factor(a)
    inv = np.empty_like(a)
    eye = np.eye(n)
    for j in range(n):
        inv[:, j] = _solve_upper_t(lower, _solve_lower(lower, eye[:, j]))
    # Exact symmetry survives downstream rank-one updates.
    inv = np.tril(inv) + np.tril(inv, -1).T
    return inv


def log_det(m: SymMatrix | ArrayLike) -> float:
    """Log-determinant of a symmetric positive definite matrix."""
    lower = cholesky_factor(m)
    return float(2.0 * np.sum(np.log(np.diag(lower))))


def rank_one_update(m: SymMatrix, v: ArrayLike) -> SymMatrix:
    """Return m + v v' as a new SymMatrix."""
    vec = np.asarray(v, dtype=float)
    if vec.shape != (m.dim,):
        raise ValueError(f"vector shape {vec.shape} does not match matrix dim {m.dim}")
    return SymMatrix(m.a + np.outer(vec, vec))


class SpdInverseTracker:
    """Positive definite matrix under rank-one updates, with maintained inverse
    and log-determinant.

    ``update(v)`` replaces M by M + v v', updates the explicit inverse by the
    Sherman-Morrison identity, and advances the log-determinant by
    log(1 + v' M^-1 v).  Every ``refactor_interval`` updates the inverse and
    log-determinant are recomputed from a fresh factorization to keep
    round-off drift bounded.
    """

    def __init__(self, m: SymMatrix | ArrayLike, refactor_interval: int = REFACTOR_INTERVAL):
        self.matrix = _as_array(m).copy()
        self.inverse = spd_inverse(self.matrix)
        self.log_det = log_det(self.matrix)
        self.refactor_interval = int(refactor_interval)
        self._updates_since_refactor = 0

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def update(self, v: ArrayLike) -> float:
        """Add v v' and return the log-determinant increment."""
        vec = np.asarray(v, dtype=float)
        w = self.inverse @ vec
        gain = 1.0 + float(vec @ w)
        increment = math.log(gain)
        self.matrix += np.outer(vec, vec)
        self.inverse -= np.outer(w, w) / gain
        self.log_det += increment
        self._updates_since_refactor += 1
        if self._updates_since_refactor >= self.refactor_interval:
            self.refactor()
        return increment

    def refactor(self) -> None:
        """Recompute inverse and log-determinant from the stored matrix."""
        self.inverse = spd_inverse(self.matrix)
        self.log_det = log_det(self.matrix)
        self._updates_since_refactor = 0
