"""Erasure recovery by coefficient bridging.

Erased analysis coefficients are replaced with fixed linear combinations
of coefficients from a disjoint bridge set.  The bridge weights are chosen
so that every synthesis vector of the erased set is orthogonal to the
substitution defects; this makes the reduced error operator nilpotent of
index 2, and the original vector (or its erased coefficients) is then
recovered in one extra matrix application.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Mapping, Optional

import numpy as np

from .errors import NoRobustBridgeError
from .frames import DualFramePair, IndexLike, IndexSet, as_index_set, minimal_redundancy
from .numerics import DEFAULT_TOL, Tolerance, anchored_rank, as_vector, eigenvalues, \
    numeric_rank, solve_basic_least_squares

__all__ = [
    "BridgePlan",
    "ReconstructionReport",
    "partial_reconstruction_operator",
    "error_operator",
    "bridge_matrix",
    "solve_bridge",
    "plan_from_coefficients",
    "single_erasure_bridge",
    "find_bridge_set",
    "is_robust_by_rank",
    "reduced_error_operator",
    "recover_coefficients",
    "reconstruct_vector",
    "nonzero_eigenvalue_count",
]


@dataclass(frozen=True)
class BridgePlan:
    """A solved (or attempted) bridging of an erasure set.

    ``coefficients`` is the ``|bridge| x |erased|`` matrix solving
    ``B(F,G,erased,bridge) C = B(F,G,erased,erased)``; its entries are the
    complex conjugates of the substitution weights.  Column k of
    ``bridged_vectors`` is the substitute analysis vector for the k-th
    erased index (in ascending order).  ``robust`` records whether the
    bridging equation was consistent at the given tolerance.
    """

    pair: DualFramePair
    erased: IndexSet
    bridge: IndexSet
    coefficients: np.ndarray
    bridged_vectors: np.ndarray
    robust: bool
    residual: float

    def __post_init__(self):
        c = np.array(self.coefficients, dtype=np.complex128)
        c.flags.writeable = False
        object.__setattr__(self, "coefficients", c)
        b = np.array(self.bridged_vectors, dtype=np.complex128)
        b.flags.writeable = False
        object.__setattr__(self, "bridged_vectors", b)
        if c.shape != (len(self.bridge), len(self.erased)):
            raise ValueError(
                f"coefficient matrix shape {c.shape} does not match "
                f"({len(self.bridge)}, {len(self.erased)})"
            )


@dataclass(frozen=True)
class ReconstructionReport:
    """Outcome of an erasure recovery.

    ``partial`` is the synthesis of the surviving coefficients,
    ``supplement`` the bridged replacement term, ``bridged`` their sum,
    and ``correction`` the final nilpotent correction; fields that a
    given recovery path does not produce are None.
    """

    recovered_coefficients: np.ndarray
    recovered_vector: Optional[np.ndarray]
    partial: np.ndarray
    supplement: Optional[np.ndarray] = None
    bridged: Optional[np.ndarray] = None
    correction: Optional[np.ndarray] = None
    max_abs_error: Optional[float] = None


def _validate_disjoint(pair: DualFramePair, erased: IndexSet, bridge: IndexSet):
    erased.validate_range(pair.size)
    bridge.validate_range(pair.size)
    if erased.overlaps(bridge):
        raise ValueError(
            f"erasure set {erased.indices} and bridge set {bridge.indices} overlap"
        )


def _cross_block(pair: DualFramePair, rows: IndexSet, cols: IndexSet) -> np.ndarray:
    """Matrix of <f_r, g_c> over rows x cols (ascending enumerations)."""
    f = pair.synthesis.coords[:, rows.positions()]
    g = pair.analysis.coords[:, cols.positions()]
    return f.T @ np.conj(g)


def _entry_scale(pair: DualFramePair, rows: IndexSet, cols: IndexSet) -> float:
    """Largest inner product attainable from the participating vectors;
    entries far below it are rounding noise, not structure."""
    if len(rows) == 0 or len(cols) == 0:
        return 0.0
    f = pair.synthesis.coords[:, rows.positions()]
    g = pair.analysis.coords[:, cols.positions()]
    return float(np.max(np.linalg.norm(f, axis=0))
                 * np.max(np.linalg.norm(g, axis=0)))


def partial_reconstruction_operator(pair: DualFramePair, erased: IndexLike) -> np.ndarray:
    """sum over surviving indices of f_j (x) g_j."""
    lam = as_index_set(erased)
    lam.validate_range(pair.size)
    keep = lam.complement(pair.size).positions()
    return pair.synthesis.coords[:, keep] @ pair.analysis.coords[:, keep].conj().T


def error_operator(pair: DualFramePair, erased: IndexLike) -> np.ndarray:
    """sum over erased indices of f_j (x) g_j (identity minus the partial)."""
    lam = as_index_set(erased)
    lam.validate_range(pair.size)
    pos = lam.positions()
    return pair.synthesis.coords[:, pos] @ pair.analysis.coords[:, pos].conj().T


def bridge_matrix(pair: DualFramePair, erased: IndexLike, bridge: IndexLike) -> np.ndarray:
    """The |erased| x |bridge| matrix (<f_lambda, g_omega>)."""
    lam = as_index_set(erased)
    om = as_index_set(bridge)
    _validate_disjoint(pair, lam, om)
    return _cross_block(pair, lam, om)


def _bridged_columns(pair: DualFramePair, bridge: IndexSet, c: np.ndarray) -> np.ndarray:
    # substitute vectors: column k = sum_j conj(C[j,k]) g_{omega_j}
    return pair.analysis.coords[:, bridge.positions()] @ np.conj(c)


def solve_bridge(pair: DualFramePair, erased: IndexLike, bridge: IndexLike,
                 tol: Tolerance = DEFAULT_TOL) -> BridgePlan:
    """Solve the bridging equation for the given erasure and bridge sets.

    The system can be singular yet consistent; in that case the returned
    coefficient matrix is the basic solution supported on the first
    independent bridge columns.  An inconsistent system yields a plan
    with ``robust=False`` and the least-squares residual, not an error.
    """
    lam = as_index_set(erased)
    om = as_index_set(bridge)
    _validate_disjoint(pair, lam, om)
    b_lo = _cross_block(pair, lam, om)
    b_ll = _cross_block(pair, lam, lam)
    c, consistent, residual = solve_basic_least_squares(
        b_lo, b_ll, tol, scale=_entry_scale(pair, lam, om))
    return BridgePlan(
        pair=pair, erased=lam, bridge=om, coefficients=c,
        bridged_vectors=_bridged_columns(pair, om, c),
        robust=consistent, residual=residual,
    )


def plan_from_coefficients(pair: DualFramePair, erased: IndexLike, bridge: IndexLike,
                           coefficients, tol: Tolerance = DEFAULT_TOL) -> BridgePlan:
    """Build a plan from an explicit coefficient matrix.

    Useful for zero (unbridged) plans and for truncating an existing
    bridge to fewer indices.  Robustness is re-evaluated from the
    bridging-equation residual of the supplied coefficients.
    """
    lam = as_index_set(erased)
    om = as_index_set(bridge)
    _validate_disjoint(pair, lam, om)
    c = np.array(coefficients, dtype=np.complex128)
    if c.shape != (len(om), len(lam)):
        raise ValueError(
            f"coefficients must have shape ({len(om)}, {len(lam)}), got {c.shape}"
        )
    b_lo = _cross_block(pair, lam, om)
    b_ll = _cross_block(pair, lam, lam)
    residual = float(np.linalg.norm(b_lo @ c - b_ll))
    consistent = residual <= tol.residual_rel * (1.0 + float(np.linalg.norm(b_ll)))
    return BridgePlan(
        pair=pair, erased=lam, bridge=om, coefficients=c,
        bridged_vectors=_bridged_columns(pair, om, c),
        robust=consistent, residual=residual,
    )


def single_erasure_bridge(pair: DualFramePair, erased_index: int, bridge_index: int,
                          tol: Tolerance = DEFAULT_TOL) -> BridgePlan:
    """Closed-form bridge for one erased coefficient from one survivor.

    The weight is <f_k, g_k> / <f_k, g_l>.  When the denominator is
    numerically zero the plan falls back to a zero weight, which is still
    robust exactly when <f_k, g_k> is itself zero.
    """
    if erased_index == bridge_index:
        raise ValueError("bridge index must differ from the erased index")
    lam = IndexSet.of([erased_index])
    om = IndexSet.of([bridge_index])
    _validate_disjoint(pair, lam, om)
    fk = pair.synthesis.coords[:, erased_index - 1]
    gk = pair.analysis.coords[:, erased_index - 1]
    gl = pair.analysis.coords[:, bridge_index - 1]
    num = complex(np.vdot(gk, fk))
    den = complex(np.vdot(gl, fk))
    scale = float(np.linalg.norm(fk) * np.linalg.norm(gl))
    if abs(den) > tol.rank_rel * scale:
        c = np.array([[num / den]], dtype=np.complex128)
        residual = float(abs(den * (num / den) - num))
        robust = True
    else:
        c = np.zeros((1, 1), dtype=np.complex128)
        residual = abs(num)
        robust = residual <= tol.residual_rel * (1.0 + abs(num))
    return BridgePlan(
        pair=pair, erased=lam, bridge=om, coefficients=c,
        bridged_vectors=_bridged_columns(pair, om, c),
        robust=robust, residual=residual,
    )


def find_bridge_set(pair: DualFramePair, erased: IndexLike,
                    tol: Tolerance = DEFAULT_TOL,
                    max_size: Optional[int] = None) -> tuple[IndexSet, BridgePlan]:
    """Find a robust bridge set for an erasure set.

    Requires the surviving analysis vectors to span the space; otherwise
    no bridge set of any size can work and NoRobustBridgeError is raised.
    Strategy: greedy over the survivors in ascending order, keeping an
    index only if it raises the rank of the growing bridge matrix, up to
    the dimension of the span of the erased synthesis vectors; a robust
    plan of that rank is guaranteed.  An exhaustive search over small
    subsets is kept as a fallback for numerically marginal inputs.
    """
    lam = as_index_set(erased)
    lam.validate_range(pair.size)
    if len(lam) == 0:
        return IndexSet.empty(), solve_bridge(pair, lam, IndexSet.empty(), tol)
    if not minimal_redundancy(pair.analysis, lam, tol):
        raise NoRobustBridgeError(
            f"erasure set {lam.indices} breaks minimal redundancy: the surviving "
            "analysis vectors do not span the space, so no robust bridge set exists"
        )
    span_dim = numeric_rank(pair.synthesis.coords[:, lam.positions()], tol)
    limit = span_dim if max_size is None else min(max_size, span_dim)
    survivors = lam.complement(pair.size)
    scale = _entry_scale(pair, lam, survivors)

    chosen: list[int] = []
    rank = 0
    for j in survivors:
        if rank >= limit:
            break
        trial = IndexSet.of(chosen + [j])
        r = anchored_rank(_cross_block(pair, lam, trial), tol, scale)
        if r > rank:
            chosen.append(j)
            rank = r
    om = IndexSet.of(chosen) if chosen else IndexSet.empty()
    plan = solve_bridge(pair, lam, om, tol)
    if plan.robust:
        return om, plan

    cap = min(max_size if max_size is not None else len(lam), len(lam), len(survivors))
    for size in range(1, cap + 1):
        for subset in combinations(survivors.indices, size):
            candidate = IndexSet.of(subset)
            plan = solve_bridge(pair, lam, candidate, tol)
            if plan.robust:
                return candidate, plan
    raise NoRobustBridgeError(
        f"no robust bridge set of size <= {cap} found for erasure set {lam.indices}"
    )


def is_robust_by_rank(pair: DualFramePair, erased: IndexLike, bridge: IndexLike,
                      tol: Tolerance = DEFAULT_TOL) -> bool:
    """Rank test: bridge matrix rank equals the span dimension of the
    erased synthesis vectors.

    Sufficient for robustness always; also necessary when the pair is
    Parseval.  It can be false for robust bridges of pairs whose
    unreduced error operator is already nilpotent.
    """
    lam = as_index_set(erased)
    om = as_index_set(bridge)
    _validate_disjoint(pair, lam, om)
    span_dim = numeric_rank(pair.synthesis.coords[:, lam.positions()], tol)
    return numeric_rank(_cross_block(pair, lam, om), tol) == span_dim


def reduced_error_operator(plan: BridgePlan) -> np.ndarray:
    """sum over erased indices of f_j (x) (g_j - g_j'); nilpotent of
    index 2 for robust plans."""
    pair = plan.pair
    pos = plan.erased.positions()
    defect = pair.analysis.coords[:, pos] - plan.bridged_vectors
    return pair.synthesis.coords[:, pos] @ defect.conj().T


def _known_vector(plan: BridgePlan, known: Mapping[int, complex],
                  indices: IndexSet) -> np.ndarray:
    missing = [j for j in indices if j not in known]
    if missing:
        raise ValueError(f"missing known coefficients for indices {missing}")
    return as_vector([known[j] for j in indices])


def recover_coefficients(plan: BridgePlan,
                         known: Mapping[int, complex]) -> np.ndarray:
    """Recover the erased analysis coefficients from the surviving ones.

    ``known`` maps 1-based indices to coefficients and must cover every
    surviving index.  Output is ordered by ascending erased index.
    """
    if not plan.robust:
        raise NoRobustBridgeError(
            f"plan for erasure set {plan.erased.indices} is not robust "
            f"(bridging residual {plan.residual:.3e}); recovery would not be exact"
        )
    pair = plan.pair
    lam = plan.erased
    if len(lam) == 0:
        return np.zeros(0, dtype=np.complex128)
    survivors = lam.complement(pair.size)
    alpha_c = _known_vector(plan, known, survivors)
    f_r = pair.synthesis.coords[:, survivors.positions()] @ alpha_c
    g = pair.analysis.coords
    beta_om = g[:, plan.bridge.positions()].conj().T @ f_r
    beta_lam = g[:, lam.positions()].conj().T @ f_r
    alpha_om = as_vector([known[j] for j in plan.bridge])
    return plan.coefficients.T @ (alpha_om - beta_om) + beta_lam


def reconstruct_vector(plan: BridgePlan, known: Mapping[int, complex],
                       reference=None) -> ReconstructionReport:
    """Rebuild the analyzed vector from the surviving coefficients.

    Forms the partial reconstruction, adds the bridged supplement, and
    applies the reduced error operator to the partial reconstruction as
    the final correction.  ``reference`` (the original vector, when
    available) only fills in the error field of the report.
    """
    if not plan.robust:
        raise NoRobustBridgeError(
            f"plan for erasure set {plan.erased.indices} is not robust "
            f"(bridging residual {plan.residual:.3e}); reconstruction refused"
        )
    pair = plan.pair
    lam = plan.erased
    survivors = lam.complement(pair.size)
    alpha_c = _known_vector(plan, known, survivors)
    f_syn = pair.synthesis.coords
    f_r = f_syn[:, survivors.positions()] @ alpha_c

    alpha_om = as_vector([known[j] for j in plan.bridge])
    f_b = f_syn[:, lam.positions()] @ (plan.coefficients.T @ alpha_om)
    bridged = f_r + f_b

    defect = pair.analysis.coords[:, lam.positions()] - plan.bridged_vectors
    correction = f_syn[:, lam.positions()] @ (defect.conj().T @ f_r)
    recovered = bridged + correction

    g = pair.analysis.coords
    beta_om = g[:, plan.bridge.positions()].conj().T @ f_r
    beta_lam = g[:, lam.positions()].conj().T @ f_r
    coeffs = plan.coefficients.T @ (alpha_om - beta_om) + beta_lam

    err = None
    if reference is not None:
        err = float(np.max(np.abs(recovered - as_vector(reference)))) \
            if recovered.size else 0.0
    return ReconstructionReport(
        recovered_coefficients=coeffs,
        recovered_vector=recovered,
        partial=f_r,
        supplement=f_b,
        bridged=bridged,
        correction=correction,
        max_abs_error=err,
    )


def nonzero_eigenvalue_count(pair: DualFramePair, plan: BridgePlan,
                             tol: Tolerance = DEFAULT_TOL) -> int:
    """Number of nonzero eigenvalues of the reduced error operator.

    The operator factors through the erased index set, so its nonzero
    spectrum equals that of an ``L x L`` compression; eigenvalues are
    computed there, never on the full space.  The zero threshold is
    ``rank_rel * max(1, ||E||)``.
    """
    lam = plan.erased
    if len(lam) == 0:
        return 0
    f_lam = pair.synthesis.coords[:, lam.positions()]
    defect = pair.analysis.coords[:, lam.positions()] - plan.bridged_vectors
    compression = defect.conj().T @ f_lam
    # operator norm of the full-space operator from the thin QR factors
    rf = np.linalg.qr(f_lam, mode="r")
    rd = np.linalg.qr(defect, mode="r")
    norm = float(np.linalg.norm(rf @ rd.conj().T, 2))
    threshold = tol.rank_rel * max(1.0, norm)
    ev = eigenvalues(compression, max_dim=max(len(lam), 1))
    return int(np.count_nonzero(np.abs(ev) > threshold))
