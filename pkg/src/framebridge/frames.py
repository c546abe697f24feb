"""Finite frames, dual pairs, and the structural predicates on them.

A frame is stored densely as an ``n x N`` coordinate table whose columns
are the frame vectors.  Index sets are 1-based, matching the file formats
and the command line.  The inner product is linear in the first argument
and conjugate-linear in the second.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Union

import numpy as np

from .errors import NotAFrameError, UnsupportedSizeError
from .numerics import DEFAULT_TOL, Tolerance, as_vector, numeric_rank

__all__ = [
    "IndexSet",
    "Frame",
    "DualFramePair",
    "as_index_set",
    "inner",
    "analysis",
    "synthesis",
    "frame_operator",
    "pair_operator",
    "frame_bounds",
    "is_parseval",
    "canonical_dual",
    "verify_dual_pair",
    "cross_gram",
    "minimal_redundancy",
    "spark",
]

SPARK_SIZE_CAP = 20


def inner(f, g) -> complex:
    """Inner product, linear in ``f`` and conjugate-linear in ``g``."""
    return complex(np.vdot(np.asarray(g, dtype=np.complex128),
                           np.asarray(f, dtype=np.complex128)))


@dataclass(frozen=True)
class IndexSet:
    """Sorted distinct 1-based indices into a frame."""

    indices: tuple[int, ...]

    def __post_init__(self):
        idx = tuple(int(i) for i in self.indices)
        if any(i < 1 for i in idx):
            raise ValueError(f"indices must be >= 1, got {idx}")
        if len(set(idx)) != len(idx):
            raise ValueError(f"duplicate indices in {idx}")
        object.__setattr__(self, "indices", tuple(sorted(idx)))

    @classmethod
    def of(cls, items: Iterable[int]) -> "IndexSet":
        return cls(tuple(items))

    @classmethod
    def empty(cls) -> "IndexSet":
        return cls(())

    def validate_range(self, size: int) -> None:
        if self.indices and self.indices[-1] > size:
            raise ValueError(
                f"index {self.indices[-1]} out of range for a frame of size {size}"
            )

    def complement(self, size: int) -> "IndexSet":
        self.validate_range(size)
        members = set(self.indices)
        return IndexSet(tuple(j for j in range(1, size + 1) if j not in members))

    def positions(self) -> np.ndarray:
        """0-based column positions."""
        return np.array(self.indices, dtype=np.intp) - 1

    def overlaps(self, other: "IndexSet") -> bool:
        return bool(set(self.indices) & set(other.indices))

    def __len__(self) -> int:
        return len(self.indices)

    def __iter__(self):
        return iter(self.indices)

    def __contains__(self, j) -> bool:
        return j in self.indices


IndexLike = Union[IndexSet, Iterable[int]]


def as_index_set(items: IndexLike) -> IndexSet:
    if isinstance(items, IndexSet):
        return items
    return IndexSet.of(items)


@dataclass(frozen=True)
class Frame:
    """An ordered family of vectors, stored as columns of ``coords``."""

    coords: np.ndarray

    def __post_init__(self):
        m = np.array(self.coords, dtype=np.complex128, order="C")
        if m.ndim != 2:
            raise ValueError(f"coords must be 2-D (dim x size), got ndim={m.ndim}")
        if m.shape[1] < 1:
            raise ValueError("a frame needs at least one vector")
        if not np.all(np.isfinite(m)):
            raise ValueError("frame coordinates must be finite")
        m.flags.writeable = False
        object.__setattr__(self, "coords", m)

    @classmethod
    def from_vectors(cls, vectors) -> "Frame":
        """Build from a sequence of coordinate vectors."""
        cols = [as_vector(v) for v in vectors]
        return cls(np.column_stack(cols))

    @property
    def dim(self) -> int:
        return self.coords.shape[0]

    @property
    def size(self) -> int:
        return self.coords.shape[1]

    def vector(self, j: int) -> np.ndarray:
        """The j-th vector, 1-based."""
        if not 1 <= j <= self.size:
            raise ValueError(f"index {j} out of range 1..{self.size}")
        return self.coords[:, j - 1].copy()

    def subframe(self, idx: IndexLike) -> np.ndarray:
        """Coordinate slice for the given indices (columns, read-only view)."""
        s = as_index_set(idx)
        s.validate_range(self.size)
        return self.coords[:, s.positions()]


@dataclass(frozen=True)
class DualFramePair:
    """A synthesis frame F and analysis frame G with sum f_j (x) g_j = I."""

    synthesis: Frame
    analysis: Frame
    duality_residual: float

    def __post_init__(self):
        if self.synthesis.dim != self.analysis.dim:
            raise ValueError("synthesis and analysis frames live in different spaces")
        if self.synthesis.size != self.analysis.size:
            raise ValueError("synthesis and analysis frames have different sizes")

    @classmethod
    def build(cls, synthesis: Frame, analysis: Frame,
              tol: Tolerance = DEFAULT_TOL) -> "DualFramePair":
        """Verify duality and construct; raises ValueError if the pair fails."""
        ok, residual = verify_dual_pair(synthesis, analysis, tol)
        if not ok:
            raise ValueError(
                f"not a dual pair: identity defect {residual:.3e} exceeds "
                f"{tol.residual_rel:.1e} * sqrt(dim)"
            )
        return cls(synthesis, analysis, residual)

    @property
    def dim(self) -> int:
        return self.synthesis.dim

    @property
    def size(self) -> int:
        return self.synthesis.size


def analysis(g: Frame, f) -> np.ndarray:
    """Coefficients (<f, g_j>)_j of a vector against the analysis frame."""
    v = as_vector(f)
    if v.shape[0] != g.dim:
        raise ValueError(f"vector has dimension {v.shape[0]}, frame has {g.dim}")
    return g.coords.conj().T @ v


def synthesis(f: Frame, coefficients) -> np.ndarray:
    """Weighted sum of the frame vectors: sum_j c_j f_j."""
    c = as_vector(coefficients)
    if c.shape[0] != f.size:
        raise ValueError(f"got {c.shape[0]} coefficients for a frame of size {f.size}")
    return f.coords @ c


def frame_operator(f: Frame) -> np.ndarray:
    """S = sum_j f_j (x) f_j, Hermitian positive semi-definite."""
    return f.coords @ f.coords.conj().T


def pair_operator(f: Frame, g: Frame) -> np.ndarray:
    """sum_j f_j (x) g_j, the identity for a dual pair."""
    if f.dim != g.dim or f.size != g.size:
        raise ValueError("frames must share dimension and size")
    return f.coords @ g.coords.conj().T


def frame_bounds(f: Frame, tol: Tolerance = DEFAULT_TOL) -> tuple[float, float]:
    """Optimal frame bounds (A, B): extreme eigenvalues of the frame operator.

    A == 0 signals that the family is not a frame.
    """
    w = np.linalg.eigvalsh(frame_operator(f))
    lower = float(max(w[0], 0.0))
    upper = float(max(w[-1], 0.0))
    if upper > 0.0 and lower <= tol.rank_rel * upper:
        lower = 0.0
    return lower, upper


def is_parseval(f: Frame, tol: Tolerance = DEFAULT_TOL) -> bool:
    a, b = frame_bounds(f, tol)
    return abs(a - 1.0) <= tol.residual_rel and abs(b - 1.0) <= tol.residual_rel


def canonical_dual(f: Frame, tol: Tolerance = DEFAULT_TOL) -> DualFramePair:
    """The pair (F, S^{-1} F); raises NotAFrameError when the lower bound is 0."""
    s = frame_operator(f)
    a, b = frame_bounds(f, tol)
    if a <= 0.0:
        raise NotAFrameError(
            f"lower frame bound is zero (upper bound {b:.3e}); the family does "
            "not span the space"
        )
    g = Frame(np.linalg.solve(s, f.coords))
    return DualFramePair.build(f, g, tol)


def verify_dual_pair(f: Frame, g: Frame,
                     tol: Tolerance = DEFAULT_TOL) -> tuple[bool, float]:
    """Operator-norm defect of sum f_j (x) g_j from the identity."""
    defect = pair_operator(f, g) - np.eye(f.dim)
    residual = float(np.linalg.norm(defect, 2))
    return residual <= tol.residual_rel * np.sqrt(f.dim), residual


def cross_gram(fs, gs) -> np.ndarray:
    """Cross Gram matrix with entry (j, k) = <f_k, g_j>.

    ``fs`` and ``gs`` are equal-length sequences of vectors (or ``n x L``
    coordinate arrays).
    """
    fm = _as_columns(fs)
    gm = _as_columns(gs)
    if fm.shape != gm.shape:
        raise ValueError(f"length/dim mismatch: {fm.shape} vs {gm.shape}")
    return gm.conj().T @ fm


def _as_columns(vectors) -> np.ndarray:
    arr = np.asarray(vectors)
    if arr.ndim == 2 and isinstance(vectors, np.ndarray):
        return np.array(vectors, dtype=np.complex128)
    return np.column_stack([as_vector(v) for v in vectors])


def minimal_redundancy(g: Frame, erased: IndexLike,
                       tol: Tolerance = DEFAULT_TOL) -> bool:
    """True when the vectors outside ``erased`` still span the whole space."""
    lam = as_index_set(erased)
    lam.validate_range(g.size)
    keep = lam.complement(g.size)
    if len(keep) == 0:
        return False
    return numeric_rank(g.coords[:, keep.positions()], tol) == g.dim


def spark(f: Frame, tol: Tolerance = DEFAULT_TOL,
          size_cap: int = SPARK_SIZE_CAP) -> int:
    """Largest k such that every k of the frame vectors are linearly independent.

    Full spark means the result equals the space dimension.  Checked by
    exhaustive subset enumeration, so the frame size is capped.
    """
    if f.size > size_cap:
        raise UnsupportedSizeError(
            f"spark enumeration capped at {size_cap} vectors, frame has {f.size}"
        )
    best = 0
    for k in range(1, min(f.dim, f.size) + 1):
        for subset in combinations(range(f.size), k):
            if numeric_rank(f.coords[:, list(subset)], tol) < k:
                return best
        best = k
    return best
