"""Dual-frame constructions and combinatorial invertibility audits.

The dual set of a frame is an affine subspace: canonical dual plus the
null family of perturbations.  This module constructs duals with
prescribed vectors on an index set, designer duals whose bridge matrices
are invertible by construction, seeded random duals, and exhaustive
audits of bridge-matrix invertibility (skew spark) together with a
seeded Monte Carlo harness measuring how often random duals fail them.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from math import comb, inf
from typing import Mapping, Optional, Sequence, Union

import numpy as np

from .bridging import bridge_matrix
from .frames import DualFramePair, Frame, IndexLike, IndexSet, as_index_set, \
    canonical_dual, minimal_redundancy, spark
from .numerics import DEFAULT_TOL, Tolerance, as_vector, numeric_rank

__all__ = [
    "SkewSparkReport",
    "BridgeAuditFailure",
    "DualPerturbation",
    "GenericityStats",
    "GenericityTrialRecord",
    "erasure_size_bound",
    "extend_to_dual",
    "designer_dual",
    "skew_spark_audit",
    "random_dual",
    "genericity_trial",
]

AUDIT_BUDGET = 10 ** 6
CONDITION_CAP = 1e12


def erasure_size_bound(dim: int, size: int) -> int:
    """Largest erasure size that can possibly admit an invertible square
    bridge matrix: min(dim, size - dim, floor(size / 2))."""
    if not 1 <= dim <= size:
        raise ValueError(f"need 1 <= dim <= size, got dim={dim}, size={size}")
    return min(dim, size - dim, size // 2)


def extend_to_dual(frame: Frame, prescribed_on: IndexLike,
                   prescribed, tol: Tolerance = DEFAULT_TOL) -> Frame:
    """Dual frame agreeing with prescribed vectors on the given index set.

    Parameters
    ----------
    frame : Frame
        Synthesis frame; the complement of ``prescribed_on`` must still
        span the space.
    prescribed : mapping or array
        Either a dict of 1-based index -> vector, or a coordinate array
        whose columns follow the ascending order of ``prescribed_on``.

    Starts from the canonical dual, swaps in the prescribed vectors, and
    cancels the resulting identity defect on the surviving indices using
    the canonical dual of the reduced frame.
    """
    lam = as_index_set(prescribed_on)
    lam.validate_range(frame.size)
    if not minimal_redundancy(frame, lam, tol):
        raise ValueError(
            f"index set {lam.indices} breaks minimal redundancy for the frame; "
            "no dual can be prescribed there"
        )
    pres = _prescribed_columns(frame.dim, lam, prescribed)
    base = canonical_dual(frame, tol).analysis.coords.copy()
    if len(lam) == 0:
        return Frame(base)
    lam_pos = lam.positions()
    comp = lam.complement(frame.size)
    comp_pos = comp.positions()
    delta = pres - base[:, lam_pos]
    defect = frame.coords[:, lam_pos] @ delta.conj().T
    reduced_dual = canonical_dual(Frame(frame.coords[:, comp_pos]), tol)
    base[:, lam_pos] = pres
    base[:, comp_pos] += -defect.conj().T @ reduced_dual.analysis.coords
    return Frame(base)


def _prescribed_columns(dim: int, lam: IndexSet, prescribed) -> np.ndarray:
    if isinstance(prescribed, Mapping):
        missing = [j for j in lam if j not in prescribed]
        if missing:
            raise ValueError(f"missing prescriptions for indices {missing}")
        cols = [as_vector(prescribed[j]) for j in lam]
        arr = np.column_stack(cols) if cols else np.zeros((dim, 0), dtype=complex)
    else:
        arr = np.array(prescribed, dtype=np.complex128)
        if arr.ndim != 2:
            arr = arr.reshape(dim, -1)
    if arr.shape != (dim, len(lam)):
        raise ValueError(
            f"prescribed vectors must form a {dim} x {len(lam)} table, "
            f"got {arr.shape}"
        )
    return arr


def designer_dual(frame: Frame, erased: IndexLike, bridge: IndexLike,
                  tol: Tolerance = DEFAULT_TOL) -> DualFramePair:
    """Dual whose bridge matrix for (erased, bridge) is invertible.

    Requires a full-spark frame, equal-size disjoint index sets, and an
    erasure size within the combinatorial bound.  The bridge positions
    are prescribed to carry copies of the erased synthesis vectors, so
    the bridge matrix becomes the Gram matrix of a linearly independent
    family.
    """
    lam = as_index_set(erased)
    om = as_index_set(bridge)
    lam.validate_range(frame.size)
    om.validate_range(frame.size)
    if lam.overlaps(om):
        raise ValueError("erasure and bridge sets overlap")
    if len(lam) != len(om):
        raise ValueError(
            f"need equal sizes, got {len(lam)} erased and {len(om)} bridge indices"
        )
    bound = erasure_size_bound(frame.dim, frame.size)
    if len(lam) > bound:
        raise ValueError(
            f"erasure size {len(lam)} exceeds the bound "
            f"min(dim, size - dim, size/2) = {bound}"
        )
    if spark(frame, tol) != frame.dim:
        raise ValueError("designer duals require a full spark frame")
    prescription = {
        om_j: frame.vector(lam_j) for om_j, lam_j in zip(om, lam)
    }
    dual = extend_to_dual(frame, om, prescription, tol)
    return DualFramePair.build(frame, dual, tol)


@dataclass(frozen=True)
class BridgeAuditFailure:
    """One non-invertible (or numerically untrustworthy) bridge matrix."""

    erased: tuple[int, ...]
    bridge: tuple[int, ...]
    rank: int
    condition: float


@dataclass(frozen=True)
class SkewSparkReport:
    """Exhaustive invertibility audit of all square bridge matrices.

    ``skew_spark`` is the largest k such that every bridge matrix with
    erasure and bridge sets of size up to k is invertible; ``full`` marks
    reaching the combinatorial bound.  ``near_singular`` lists entries
    that were full rank but beyond the condition cap (they also count as
    failures).  ``complete`` is False when the enumeration budget ran out.
    """

    label: str
    k_checked: int
    bound: int
    failures: tuple[BridgeAuditFailure, ...]
    near_singular: tuple[BridgeAuditFailure, ...]
    skew_spark: int
    full: bool
    complete: bool
    worst_condition: float


def skew_spark_audit(pair: DualFramePair, k_max: int,
                     tol: Tolerance = DEFAULT_TOL, *,
                     budget: int = AUDIT_BUDGET,
                     condition_cap: float = CONDITION_CAP,
                     label: Optional[str] = None) -> SkewSparkReport:
    """Check invertibility of every square bridge matrix up to size k_max.

    Sizes beyond the combinatorial bound cannot be invertible and are not
    enumerated.  The work is capped by ``budget`` counted in bridge
    matrices; hitting the cap yields a partial report.
    """
    n, big_n = pair.dim, pair.size
    bound = erasure_size_bound(n, big_n)
    k_eff = min(int(k_max), bound)
    name = label or f"pair_{n}x{big_n}"

    failures: list[BridgeAuditFailure] = []
    near: list[BridgeAuditFailure] = []
    worst_cond = 0.0
    spent = 0
    complete = True
    k_checked = 0
    for k in range(1, k_eff + 1):
        level_cost = comb(big_n, k) * comb(big_n - k, k)
        if spent + level_cost > budget:
            complete = False
            break
        spent += level_cost
        for lam in combinations(range(1, big_n + 1), k):
            rest = [j for j in range(1, big_n + 1) if j not in lam]
            for om in combinations(rest, k):
                b = bridge_matrix(pair, IndexSet.of(lam), IndexSet.of(om))
                rank = numeric_rank(b, tol)
                if rank < k:
                    failures.append(BridgeAuditFailure(lam, om, rank, inf))
                    continue
                cond = float(np.linalg.cond(b, 2))
                worst_cond = max(worst_cond, cond)
                if cond > condition_cap:
                    entry = BridgeAuditFailure(lam, om, rank, cond)
                    failures.append(entry)
                    near.append(entry)
        k_checked = k

    failed_levels = {len(f.erased) for f in failures}
    skew = 0
    for k in range(1, k_checked + 1):
        if k in failed_levels:
            break
        skew = k
    return SkewSparkReport(
        label=name, k_checked=k_checked, bound=bound,
        failures=tuple(failures), near_singular=tuple(near),
        skew_spark=skew, full=(skew == bound), complete=complete,
        worst_condition=worst_cond,
    )


@dataclass(frozen=True)
class DualPerturbation:
    """Affine parametrization of a random dual: canonical dual plus a
    weighted sum of null perturbations (families summing against the
    synthesis frame to the zero operator)."""

    base: Frame
    null_vectors: tuple[Frame, ...]
    coefficients: tuple[float, ...]

    def apply(self) -> Frame:
        coords = self.base.coords.copy()
        for w, h in zip(self.coefficients, self.null_vectors):
            coords += w * h.coords
        return Frame(coords)


def random_dual(frame: Frame, seed: int, *, scale: float = 1.0,
                parts: int = 2, tol: Tolerance = DEFAULT_TOL) -> Frame:
    """Seeded random element of the dual set of ``frame``.

    Draws random null perturbations by prescribing random vectors on a
    random minimally-redundant index set and completing them to a family
    that sums to zero against the frame; the result is the canonical dual
    plus a random weighting of those families.  For a basis the dual is
    unique and the canonical dual is returned.
    """
    return dual_perturbation(frame, seed, scale=scale, parts=parts, tol=tol).apply()


def dual_perturbation(frame: Frame, seed: int, *, scale: float = 1.0,
                      parts: int = 2, tol: Tolerance = DEFAULT_TOL) -> DualPerturbation:
    base = canonical_dual(frame, tol).analysis
    n, big_n = frame.dim, frame.size
    rng = np.random.default_rng(seed)
    if big_n == n:
        return DualPerturbation(base=base, null_vectors=(), coefficients=())
    complex_frame = bool(np.any(frame.coords.imag != 0.0))
    nulls = []
    for _ in range(parts):
        nulls.append(Frame(_null_family(frame, rng, complex_frame, tol)))
    weights = tuple(float(w) for w in rng.normal(scale=scale, size=parts))
    return DualPerturbation(base=base, null_vectors=tuple(nulls),
                            coefficients=weights)


def _null_family(frame: Frame, rng: np.random.Generator,
                 complex_frame: bool, tol: Tolerance) -> np.ndarray:
    """Random family H with sum_j f_j (x) h_j = 0, via prescription on a
    random minimally-redundant index set."""
    n, big_n = frame.dim, frame.size
    for _ in range(100):
        m = int(rng.integers(1, big_n - n + 1))
        lam = IndexSet.of(sorted(int(j) + 1 for j in
                                 rng.choice(big_n, size=m, replace=False)))
        if minimal_redundancy(frame, lam, tol):
            break
    else:
        raise RuntimeError("failed to draw a minimally redundant index set")
    pres = rng.standard_normal((n, m))
    if complex_frame:
        pres = (pres + 1j * rng.standard_normal((n, m))) / np.sqrt(2.0)
    h = np.zeros((n, big_n), dtype=np.complex128)
    lam_pos = lam.positions()
    comp = lam.complement(big_n)
    comp_pos = comp.positions()
    defect = frame.coords[:, lam_pos] @ pres.conj().T
    reduced_dual = canonical_dual(Frame(frame.coords[:, comp_pos]), tol)
    h[:, lam_pos] = pres
    h[:, comp_pos] = -defect.conj().T @ reduced_dual.analysis.coords
    return h


@dataclass(frozen=True)
class GenericityTrialRecord:
    trial: int
    failures: int
    worst_condition: float


@dataclass(frozen=True)
class GenericityStats:
    """Failure statistics of skew-spark audits over seeded random pairs."""

    dim: int
    size: int
    k: int
    trials: int
    records: tuple[GenericityTrialRecord, ...]
    failure_frequency: float
    worst_condition: float


def genericity_trial(dim: int, size: int, trials: int, k: int, seed: int, *,
                     field: str = "real",
                     tol: Tolerance = DEFAULT_TOL) -> GenericityStats:
    """Audit random full-spark frames with random duals, counting failures.

    Each trial derives its randomness from (seed, trial index), so results
    are reproducible regardless of execution order.
    """
    if trials < 0:
        raise ValueError("trials must be >= 0")
    if trials and k > erasure_size_bound(dim, size):
        raise ValueError(
            f"k={k} exceeds the erasure size bound for dim={dim}, size={size}"
        )
    records = []
    failed_trials = 0
    worst = 0.0
    root = np.random.SeedSequence(seed)
    for t, child in enumerate(root.spawn(trials)):
        rng = np.random.default_rng(child)
        frame = _full_spark_frame(dim, size, rng, field, tol)
        dual_seed = int(rng.integers(0, 2 ** 31 - 1))
        dual = random_dual(frame, dual_seed, tol=tol)
        pair = DualFramePair.build(frame, dual, tol)
        report = skew_spark_audit(pair, k, tol, label=f"trial_{t}")
        fail_count = len(report.failures)
        records.append(GenericityTrialRecord(
            trial=t, failures=fail_count,
            worst_condition=report.worst_condition,
        ))
        if fail_count:
            failed_trials += 1
        worst = max(worst, report.worst_condition)
    freq = failed_trials / trials if trials else 0.0
    return GenericityStats(
        dim=dim, size=size, k=k, trials=trials, records=tuple(records),
        failure_frequency=freq, worst_condition=worst,
    )


def _full_spark_frame(dim: int, size: int, rng: np.random.Generator,
                      field: str, tol: Tolerance, attempts: int = 100) -> Frame:
    for _ in range(attempts):
        coords = rng.standard_normal((dim, size))
        if field == "complex":
            coords = (coords + 1j * rng.standard_normal((dim, size))) / np.sqrt(2.0)
        frame = Frame(coords)
        if spark(frame, tol) == dim:
            return frame
    raise RuntimeError("failed to sample a full spark frame")
