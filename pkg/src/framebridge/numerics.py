"""Dense linear algebra kernels used by every other module.

All routines work on complex double precision matrices (real input is
embedded with zero imaginary parts) and are thin, contract-checked
wrappers around LAPACK via numpy: SVD-based minimum-norm least squares,
singular-value rank with a relative cutoff, small-matrix eigenvalues,
and guarded inversion.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import SingularMatrixError, UnsupportedSizeError

__all__ = [
    "Tolerance",
    "DEFAULT_TOL",
    "as_matrix",
    "as_vector",
    "numeric_rank",
    "anchored_rank",
    "solve_least_squares",
    "solve_basic_least_squares",
    "eigenvalues",
    "invert",
]

EIG_DIM_CAP = 64


@dataclass(frozen=True)
class Tolerance:
    """Relative cutoffs used throughout the package.

    rank_rel
        Singular values below ``rank_rel * sigma_max`` count as zero.
    residual_rel
        A residual r is "zero" when ``r <= residual_rel * (1 + scale)``
        for the natural scale of the equation being checked.
    """

    rank_rel: float = 1e-10
    residual_rel: float = 1e-9

    def __post_init__(self):
        for name in ("rank_rel", "residual_rel"):
            v = getattr(self, name)
            if not (0.0 < v < 1.0):
                raise ValueError(f"{name} must lie strictly between 0 and 1, got {v}")


DEFAULT_TOL = Tolerance()


def as_matrix(a) -> np.ndarray:
    """Coerce to a 2-D complex128 array, rejecting non-finite entries."""
    m = np.array(a, dtype=np.complex128, order="C")
    if m.ndim != 2:
        raise ValueError(f"expected a 2-D array, got ndim={m.ndim}")
    if m.size and not np.all(np.isfinite(m)):
        raise ValueError("matrix entries must be finite")
    return m


def as_vector(a) -> np.ndarray:
    """Coerce to a 1-D complex128 array, rejecting non-finite entries."""
    v = np.array(a, dtype=np.complex128).reshape(-1)
    if v.size and not np.all(np.isfinite(v)):
        raise ValueError("vector entries must be finite")
    return v


def numeric_rank(a, tol: Tolerance = DEFAULT_TOL) -> int:
    """Number of singular values above ``rank_rel`` relative to the largest.

    Returns 0 for an all-zero or empty matrix.  Invariant under row and
    column permutations.
    """
    m = as_matrix(a)
    if m.size == 0:
        return 0
    s = np.linalg.svd(m, compute_uv=False)
    if s[0] == 0.0:
        return 0
    return int(np.count_nonzero(s > tol.rank_rel * s[0]))


def solve_least_squares(a, b, tol: Tolerance = DEFAULT_TOL):
    """Minimum-norm least squares solution of ``A X = B``.

    Parameters
    ----------
    a, b : array_like
        Coefficient matrix and right-hand side with matching row counts.

    Returns
    -------
    x : ndarray
        Minimizer of the Frobenius residual; the minimum-norm one when
        ``a`` is rank deficient.
    consistent : bool
        True when the residual is below ``residual_rel * (1 + ||B||_F)``.
    residual : float
        Frobenius norm of ``A X - B``.
    """
    A = as_matrix(a)
    B = as_matrix(b)
    if A.shape[0] != B.shape[0]:
        raise ValueError(f"row mismatch: A has {A.shape[0]} rows, B has {B.shape[0]}")
    if A.shape[1] == 0:
        X = np.zeros((0, B.shape[1]), dtype=np.complex128)
    else:
        X, *_ = np.linalg.lstsq(A, B, rcond=tol.rank_rel)
    residual = float(np.linalg.norm(A @ X - B))
    consistent = residual <= tol.residual_rel * (1.0 + float(np.linalg.norm(B)))
    return X, consistent, residual


def anchored_rank(a, tol: Tolerance = DEFAULT_TOL, scale: float = 0.0) -> int:
    """Numeric rank with the cutoff anchored to an external scale.

    Singular values are compared against ``rank_rel * max(scale,
    sigma_max)``.  With the default scale this is ``numeric_rank``; a
    positive scale lets a caller declare that entries far below the size
    of the data they came from are rounding noise, even when the matrix
    itself has nothing bigger.
    """
    m = as_matrix(a)
    if m.size == 0:
        return 0
    s = np.linalg.svd(m, compute_uv=False)
    anchor = max(float(scale), float(s[0]))
    if anchor == 0.0:
        return 0
    return int(np.count_nonzero(s > tol.rank_rel * anchor))


def solve_basic_least_squares(a, b, tol: Tolerance = DEFAULT_TOL,
                              scale: float = 0.0):
    """Least squares solution supported on a greedily chosen column subset.

    Columns of ``a`` are scanned in ascending index order and kept only if
    they raise the numeric rank (anchored to ``scale``, see
    ``anchored_rank``); the system is then solved on the kept columns and
    zero rows are inserted for the rest.  The residual equals the full
    least-squares residual because the kept columns span the numerical
    column space.  Deterministic, and produces sparse solutions for
    consistent-but-singular systems.
    """
    A = as_matrix(a)
    B = as_matrix(b)
    if A.shape[0] != B.shape[0]:
        raise ValueError(f"row mismatch: A has {A.shape[0]} rows, B has {B.shape[0]}")
    cols: list[int] = []
    rank = 0
    bound = min(A.shape)
    for j in range(A.shape[1]):
        if rank == bound:
            break
        r = anchored_rank(A[:, cols + [j]], tol, scale)
        if r > rank:
            cols.append(j)
            rank = r
    if cols:
        Xs, *_ = np.linalg.lstsq(A[:, cols], B, rcond=tol.rank_rel)
    else:
        Xs = np.zeros((0, B.shape[1]), dtype=np.complex128)
    X = np.zeros((A.shape[1], B.shape[1]), dtype=np.complex128)
    X[cols, :] = Xs
    residual = float(np.linalg.norm(A @ X - B))
    consistent = residual <= tol.residual_rel * (1.0 + float(np.linalg.norm(B)))
    return X, consistent, residual


def eigenvalues(a, max_dim: int = EIG_DIM_CAP) -> np.ndarray:
    """All eigenvalues of a small square matrix, with multiplicity, unordered."""
    m = as_matrix(a)
    if m.shape[0] != m.shape[1]:
        raise ValueError(f"matrix must be square, got shape {m.shape}")
    if m.shape[0] > max_dim:
        raise UnsupportedSizeError(
            f"eigenvalue computation capped at dimension {max_dim}, got {m.shape[0]}"
        )
    if m.shape[0] == 0:
        return np.zeros(0, dtype=np.complex128)
    return np.linalg.eigvals(m)


def invert(a, tol: Tolerance = DEFAULT_TOL) -> np.ndarray:
    """Inverse of a square matrix, guarded by a numeric rank check."""
    m = as_matrix(a)
    if m.shape[0] != m.shape[1]:
        raise ValueError(f"matrix must be square, got shape {m.shape}")
    r = numeric_rank(m, tol)
    if r < m.shape[0]:
        raise SingularMatrixError(
            f"matrix is numerically singular (rank {r} of {m.shape[0]})", rank=r
        )
    return np.linalg.inv(m)
