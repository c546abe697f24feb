"""Recovery of erased samples in concrete finite sampling schemes.

A sampling scheme pairs sample points with a table of synthesis-function
values at those points; point evaluation plays the role of analysis, so
bridge matrices are plain slices of the value table and never require
the evaluation representers explicitly.

Two schemes are built in:

- ``trig_poly``: equispaced oversampling of a trigonometric-polynomial
  space.  Exact: every recovery identity holds to rounding error.
- ``truncated_shannon``: a finite window of the classical cardinal-series
  scheme on a grid of spacing p <= 1.  The window truncates an infinite
  scheme, so recovered samples carry a truncation error that decays as
  the window grows; results are flagged as approximate.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Optional

import numpy as np

from .errors import NoRobustBridgeError, UnderdeterminedSchemeError
from .frames import DualFramePair, Frame, IndexLike, IndexSet, as_index_set
from .numerics import DEFAULT_TOL, Tolerance, anchored_rank, as_vector, \
    solve_basic_least_squares

__all__ = [
    "SamplingScheme",
    "SampleRecovery",
    "build_trig_scheme",
    "build_truncated_shannon",
    "sampling_bridge_matrix",
    "recover_samples",
    "induced_pair",
    "random_trig_member",
    "trig_member_samples",
    "evaluate_trig_member",
]

KIND_TRIG = "trig_poly"
KIND_SHANNON = "truncated_shannon"
KIND_CUSTOM = "custom"


@dataclass(frozen=True)
class SamplingScheme:
    """Sample points plus the table of synthesis-function values.

    ``value_table[j, k]`` holds the j-th synthesis function evaluated at
    the k-th sample point.  ``sample_weight`` converts raw samples into
    synthesis coefficients (1 for schemes whose synthesis functions are
    the exact duals of point evaluation; the grid spacing for the
    truncated cardinal-series scheme).  ``synthesis_coordinates`` is an
    optional dense coordinate table enabling vector reconstruction.
    """

    kind: str
    points: np.ndarray
    value_table: np.ndarray
    space_dim: int
    sample_weight: float = 1.0
    synthesis_coordinates: Optional[np.ndarray] = None

    def __post_init__(self):
        pts = np.array(self.points, dtype=np.float64)
        table = np.array(self.value_table, dtype=np.complex128)
        if table.shape != (pts.size, pts.size):
            raise ValueError(
                f"value table shape {table.shape} does not match {pts.size} points"
            )
        pts.flags.writeable = False
        table.flags.writeable = False
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "value_table", table)
        if self.synthesis_coordinates is not None:
            sc = np.array(self.synthesis_coordinates, dtype=np.complex128)
            sc.flags.writeable = False
            object.__setattr__(self, "synthesis_coordinates", sc)

    @property
    def size(self) -> int:
        return self.points.size

    @property
    def exact(self) -> bool:
        return self.kind != KIND_SHANNON


@dataclass(frozen=True)
class SampleRecovery:
    """Recovered samples on the erased indices (ascending order)."""

    values: np.ndarray
    erased: IndexSet
    bridge: IndexSet
    residual: float
    exact: bool


def build_trig_scheme(space_dim: int, num_samples: int) -> SamplingScheme:
    """Equispaced sampling of a trigonometric-polynomial space.

    Parameters
    ----------
    space_dim : int
        Dimension of the function space; must be odd (frequencies
        -M..M with space_dim = 2M + 1).
    num_samples : int
        Number of equispaced points k / num_samples on [0, 1); must be
        at least ``space_dim``, and any excess is pure redundancy.

    The synthesis functions are the exact duals of point evaluation, so
    the interpolation identity holds to rounding error for every member.
    """
    n = int(space_dim)
    big_n = int(num_samples)
    if n < 1 or n % 2 == 0:
        raise ValueError(f"space_dim must be odd and positive, got {n}")
    if big_n < n:
        raise UnderdeterminedSchemeError(
            f"{big_n} samples cannot determine a space of dimension {n}"
        )
    half = (n - 1) // 2
    k = np.arange(big_n)
    # value_table[j, k] depends only on the index difference, so the
    # table is computed from integer steps and stays drift-free
    diff = k[None, :] - k[:, None]
    x = diff / big_n
    with np.errstate(invalid="ignore", divide="ignore"):
        kernel = np.where(diff % big_n == 0, float(n),
                          np.sin(n * np.pi * x) / np.sin(np.pi * x))
    orders = np.arange(-half, half + 1)
    g_coords = np.exp(-2j * np.pi * orders[:, None] * k[None, :] / big_n)
    return SamplingScheme(
        kind=KIND_TRIG,
        points=k / big_n,
        value_table=kernel / big_n,
        space_dim=n,
        sample_weight=1.0,
        synthesis_coordinates=g_coords / big_n,
    )


def build_truncated_shannon(spacing: float, half_width: int) -> SamplingScheme:
    """Finite window of the cardinal-series scheme on the grid j * spacing.

    Indices run over -half_width..half_width.  ``spacing`` must lie in
    (0, 1]; values below 1 oversample and create the redundancy needed to
    bridge erasures.  The table entry (j, k) is the normalized cardinal
    kernel at (j - k) * spacing.  A finite window only approximates the
    infinite scheme, so recoveries are flagged approximate and their error
    decays as ``half_width`` grows.
    """
    p = float(spacing)
    big_k = int(half_width)
    if not 0.0 < p <= 1.0:
        raise ValueError(f"spacing must lie in (0, 1], got {p}")
    if big_k < 1:
        raise ValueError(f"half_width must be >= 1, got {big_k}")
    j = np.arange(-big_k, big_k + 1)
    table = np.sinc(p * (j[None, :] - j[:, None]))
    return SamplingScheme(
        kind=KIND_SHANNON,
        points=j * p,
        value_table=table,
        space_dim=2 * big_k + 1,
        sample_weight=p,
        synthesis_coordinates=None,
    )


def sampling_bridge_matrix(scheme: SamplingScheme, erased: IndexLike,
                           bridge: IndexLike) -> np.ndarray:
    """Slice of the value table with rows over the erased indices and
    columns over the bridge indices (both 1-based)."""
    lam = as_index_set(erased)
    om = as_index_set(bridge)
    lam.validate_range(scheme.size)
    om.validate_range(scheme.size)
    if lam.overlaps(om):
        raise ValueError(
            f"erasure set {lam.indices} and bridge set {om.indices} overlap"
        )
    return scheme.value_table[np.ix_(lam.positions(), om.positions())]


def recover_samples(scheme: SamplingScheme, erased: IndexLike,
                    bridge: Optional[IndexLike] = None,
                    known_samples: Mapping[int, complex] = None,
                    tol: Tolerance = DEFAULT_TOL) -> SampleRecovery:
    """Recover erased samples from the surviving ones.

    ``known_samples`` maps 1-based point indices to sample values and must
    cover every surviving index.  When ``bridge`` is omitted a greedy scan
    over the survivors picks one of minimal size.  Raises
    NoRobustBridgeError when the sampled bridging equation is inconsistent
    (no redundancy to exploit).
    """
    if known_samples is None:
        raise ValueError("known_samples is required")
    lam = as_index_set(erased)
    lam.validate_range(scheme.size)
    survivors = lam.complement(scheme.size)
    missing = [j for j in survivors if j not in known_samples]
    if missing:
        raise ValueError(f"missing samples for indices {missing}")
    if len(lam) == 0:
        return SampleRecovery(
            values=np.zeros(0, dtype=np.complex128), erased=lam,
            bridge=IndexSet.empty(), residual=0.0, exact=scheme.exact,
        )

    table = scheme.value_table
    lam_pos = lam.positions()
    surv_pos = survivors.positions()
    s_c = as_vector([known_samples[j] for j in survivors])
    # partial reconstruction evaluated at every sample point
    partial_values = scheme.sample_weight * (table[surv_pos, :].T @ s_c)

    scale = float(np.max(np.abs(table)))
    if bridge is None:
        om = _greedy_bridge(table, lam, survivors, tol, scale)
    else:
        om = as_index_set(bridge)
        om.validate_range(scheme.size)
        if lam.overlaps(om):
            raise ValueError("bridge set overlaps the erasure set")

    b_lo = table[np.ix_(lam_pos, om.positions())]
    b_ll = table[np.ix_(lam_pos, lam_pos)]
    coeff, consistent, residual = solve_basic_least_squares(b_lo, b_ll, tol,
                                                            scale=scale)
    if not consistent:
        raise NoRobustBridgeError(
            f"sampled bridging equation inconsistent for erasure set "
            f"{lam.indices} with bridge {om.indices} (residual {residual:.3e})"
        )
    s_om = as_vector([known_samples[j] for j in om])
    values = coeff.T @ (s_om - partial_values[om.positions()]) \
        + partial_values[lam_pos]
    return SampleRecovery(values=values, erased=lam, bridge=om,
                          residual=residual, exact=scheme.exact)


def _greedy_bridge(table: np.ndarray, lam: IndexSet, survivors: IndexSet,
                   tol: Tolerance, scale: float) -> IndexSet:
    lam_pos = lam.positions()
    target = anchored_rank(table[np.ix_(lam_pos, survivors.positions())],
                           tol, scale)
    chosen: list[int] = []
    rank = 0
    for j in survivors:
        if rank >= target:
            break
        cand = IndexSet.of(chosen + [j])
        r = anchored_rank(table[np.ix_(lam_pos, cand.positions())], tol, scale)
        if r > rank:
            chosen.append(j)
            rank = r
    return IndexSet.of(chosen) if chosen else IndexSet.empty()


def induced_pair(scheme: SamplingScheme, tol: Tolerance = DEFAULT_TOL) -> DualFramePair:
    """The dual frame pair realized by an exact scheme on coordinates.

    Analysis vectors are the evaluation representers, synthesis vectors
    their duals; only available for schemes carrying a coordinate table.
    """
    if scheme.synthesis_coordinates is None:
        raise ValueError(f"scheme of kind {scheme.kind!r} has no coordinate table")
    f = Frame(scheme.synthesis_coordinates)
    g = Frame(scheme.synthesis_coordinates * scheme.size)
    return DualFramePair.build(f, g, tol)


def random_trig_member(scheme: SamplingScheme, rng: np.random.Generator) -> np.ndarray:
    """Random frequency coefficients of a member function."""
    if scheme.kind != KIND_TRIG:
        raise ValueError("member generation is defined for trig schemes only")
    n = scheme.space_dim
    return rng.standard_normal(n) + 1j * rng.standard_normal(n)


def _trig_orders(scheme: SamplingScheme) -> np.ndarray:
    half = (scheme.space_dim - 1) // 2
    return np.arange(-half, half + 1)


def trig_member_samples(scheme: SamplingScheme, coefficients) -> np.ndarray:
    """Values of a member at every sample point of the scheme."""
    return evaluate_trig_member(scheme, coefficients, scheme.points)


def evaluate_trig_member(scheme: SamplingScheme, coefficients, t) -> np.ndarray:
    """Evaluate a member with the given frequency coefficients at ``t``."""
    if scheme.kind != KIND_TRIG:
        raise ValueError("member evaluation is defined for trig schemes only")
    c = as_vector(coefficients)
    if c.size != scheme.space_dim:
        raise ValueError(
            f"expected {scheme.space_dim} coefficients, got {c.size}"
        )
    tt = np.atleast_1d(np.asarray(t, dtype=np.float64))
    orders = _trig_orders(scheme)
    values = np.exp(2j * np.pi * tt[:, None] * orders[None, :]) @ c
    return values if np.ndim(t) else values[0]
