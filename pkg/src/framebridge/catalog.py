"""Named frame constructions used by the command line and the test suite.

The fixed fixtures are small 2-D pairs that exercise every failure mode
of erasure recovery: a square-corner pair whose partial reconstruction
operator degenerates for some erasures, a pair whose unreduced error
operator is already nilpotent, the Parseval Mercedes-Benz frame, and a
tripling construction that zeroes out the partial reconstruction operator
entirely while keeping every redundancy condition intact.
"""

from __future__ import annotations

import numpy as np

from .frames import DualFramePair, Frame
from .numerics import DEFAULT_TOL, Tolerance
from .spark_lab import random_dual

__all__ = [
    "reference_pair_2d",
    "nilpotent_pair",
    "mercedes_frame",
    "mercedes_pair",
    "tripled_pair",
    "random_frame",
    "random_parseval_frame",
    "random_dual_pair",
    "full_spark_frame",
]


def reference_pair_2d() -> DualFramePair:
    """Four corner vectors of a square with a hand-picked non-canonical dual."""
    f = Frame(np.array([[1.0, -1.0, -1.0, 1.0],
                        [1.0, 1.0, -1.0, -1.0]]))
    g = Frame(np.array([[1.0, 0.5, 0.5, 1.0],
                        [0.0, 0.5, -0.5, 0.0]]))
    return DualFramePair.build(f, g)


def nilpotent_pair() -> DualFramePair:
    """A pair whose single-erasure error operator is nilpotent of index 2."""
    e1 = [1.0, 0.0]
    e2 = [0.0, 1.0]
    f = Frame.from_vectors([e1, [-1.0, 0.0], e1, e2])
    g = Frame.from_vectors([e2, e2, e1, e2])
    return DualFramePair.build(f, g)


def mercedes_frame() -> Frame:
    """Three equiangular unit-row vectors in the plane scaled to Parseval."""
    r = np.sqrt(2.0 / 3.0)
    s3 = np.sqrt(3.0) / 2.0
    return Frame(r * np.array([[0.0, -s3, s3],
                               [1.0, -0.5, -0.5]]))


def mercedes_pair() -> DualFramePair:
    f = mercedes_frame()
    return DualFramePair.build(f, f)


def tripled_pair(base: DualFramePair, tol: Tolerance = DEFAULT_TOL) -> DualFramePair:
    """Three copies of a pair with alternating analysis signs.

    The synthesis frame repeats its vectors three times; the analysis
    frame carries signs (+, -, +).  Erasing the entire first copy leaves
    a zero partial reconstruction operator even though both frames keep
    full redundancy.
    """
    f = base.synthesis.coords
    g = base.analysis.coords
    f3 = Frame(np.hstack([f, f, f]))
    g3 = Frame(np.hstack([g, -g, g]))
    return DualFramePair.build(f3, g3, tol)


def random_frame(dim: int, size: int, rng: np.random.Generator, *,
                 field: str = "real",
                 min_singular_ratio: float = 1e-3,
                 attempts: int = 100) -> Frame:
    """Gaussian frame, resampled until reasonably conditioned."""
    if field not in ("real", "complex"):
        raise ValueError(f"field must be 'real' or 'complex', got {field!r}")
    if size < dim:
        raise ValueError("a spanning family needs size >= dim")
    for _ in range(attempts):
        coords = rng.standard_normal((dim, size))
        if field == "complex":
            coords = (coords + 1j * rng.standard_normal((dim, size))) / np.sqrt(2.0)
        s = np.linalg.svd(coords, compute_uv=False)
        if s[-1] > min_singular_ratio * s[0]:
            return Frame(coords)
    raise RuntimeError("failed to sample a well conditioned frame")


def random_parseval_frame(dim: int, size: int, seed: int, *,
                          field: str = "real") -> Frame:
    """Seeded Gaussian frame normalized by the inverse square root of its
    frame operator, so the frame operator becomes the identity."""
    rng = np.random.default_rng(seed)
    frame = random_frame(dim, size, rng, field=field)
    s = frame.coords @ frame.coords.conj().T
    w, v = np.linalg.eigh(s)
    root_inv = v @ np.diag(1.0 / np.sqrt(w)) @ v.conj().T
    return Frame(root_inv @ frame.coords)


def random_dual_pair(dim: int, size: int, seed: int, *,
                     field: str = "real", scale: float = 0.5,
                     tol: Tolerance = DEFAULT_TOL) -> DualFramePair:
    """Seeded random frame with a random (generally non-canonical) dual."""
    rng = np.random.default_rng(seed)
    frame = random_frame(dim, size, rng, field=field)
    dual_seed = int(rng.integers(0, 2 ** 31 - 1))
    dual = random_dual(frame, dual_seed, scale=scale, tol=tol)
    return DualFramePair.build(frame, dual, tol)


def full_spark_frame(dim: int, size: int, seed: int, *,
                     field: str = "real") -> Frame:
    """Seeded Gaussian frame resampled until every dim-subset is independent."""
    from .frames import spark

    rng = np.random.default_rng(seed)
    for _ in range(100):
        frame = random_frame(dim, size, rng, field=field)
        if spark(frame) == dim:
            return frame
    raise RuntimeError("failed to sample a full spark frame")
