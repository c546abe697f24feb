"""Closed-form inversion of the partial reconstruction operator.

When the operator R = I - sum_j f_j (x) g_j over an erased index set is
invertible, its inverse has the same shape: I plus a combination of the
same elementary tensors, with coefficient matrix (I - M)^{-1} where M is
the small cross Gram matrix of the erased vectors.  Everything runs at
the scale of the erasure set, never the ambient dimension.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping

import numpy as np

from .bridging import ReconstructionReport
from .errors import NotInvertibleError
from .frames import DualFramePair, IndexLike, as_index_set, cross_gram
from .numerics import DEFAULT_TOL, Tolerance, as_vector, numeric_rank

__all__ = [
    "InverseForm",
    "precondition_terms",
    "invert_partial_reconstruction",
    "reconstruct_via_inverse",
]


@dataclass(frozen=True)
class InverseForm:
    """Factored inverse: identity plus terms_f @ coefficients @ terms_g^H.

    ``terms_f`` columns are linearly independent (preconditioned), ``gram``
    holds their cross Gram matrix against ``terms_g``, and ``coefficients``
    is its resolvent (I - gram)^{-1}.
    """

    terms_f: np.ndarray
    terms_g: np.ndarray
    gram: np.ndarray
    coefficients: np.ndarray

    @property
    def order(self) -> int:
        return self.terms_f.shape[1]

    def expand(self, dim: int | None = None) -> np.ndarray:
        """Dense matrix of the inverse (for verification at desk scale)."""
        n = self.terms_f.shape[0] if dim is None else dim
        out = np.eye(n, dtype=np.complex128)
        if self.order:
            out += self.terms_f @ self.coefficients @ self.terms_g.conj().T
        return out

    def apply(self, x) -> np.ndarray:
        """Apply the inverse without forming it densely."""
        v = as_vector(x)
        if self.order == 0:
            return v
        return v + self.terms_f @ (self.coefficients @ (self.terms_g.conj().T @ v))


def precondition_terms(fs, gs, tol: Tolerance = DEFAULT_TOL):
    """Rewrite sum_j f_j (x) g_j on a linearly independent first-slot list.

    Dependent f_j are dropped; their analysis partners are folded into the
    survivors using linearity in the first tensor slot and conjugate
    linearity in the second, so the summed operator is unchanged.  Returns
    the pair of coordinate arrays (columns are vectors); both are empty
    when every f_j is numerically zero.
    """
    f = _columns(fs)
    g = _columns(gs)
    if f.shape != g.shape:
        raise ValueError(f"term lists must match: {f.shape} vs {g.shape}")
    count = f.shape[1]
    if count == 0:
        return f, g
    keep: list[int] = []
    rank = 0
    for j in range(count):
        r = numeric_rank(f[:, keep + [j]], tol)
        if r > rank:
            keep.append(j)
            rank = r
    if len(keep) == count:
        return f, g
    f_kept = f[:, keep]
    if not keep:
        empty = np.zeros((f.shape[0], 0), dtype=np.complex128)
        return empty, empty.copy()
    # weights expressing each f_j on the kept columns
    weights, *_ = np.linalg.lstsq(f_kept, f, rcond=tol.rank_rel)
    g_folded = g @ weights.conj().T
    return f_kept, g_folded


def _columns(vectors) -> np.ndarray:
    arr = np.asarray(vectors)
    if isinstance(vectors, np.ndarray) and arr.ndim == 2:
        return np.array(vectors, dtype=np.complex128)
    cols = [as_vector(v) for v in vectors]
    if not cols:
        return np.zeros((0, 0), dtype=np.complex128)
    return np.column_stack(cols)


def invert_partial_reconstruction(pair: DualFramePair, erased: IndexLike,
                                  tol: Tolerance = DEFAULT_TOL) -> InverseForm:
    """Factored inverse of the partial reconstruction operator.

    Raises NotInvertibleError when the operator is singular, which is
    detected on the small preconditioned resolvent rather than the full
    operator.  Bridging can still succeed in that case.
    """
    lam = as_index_set(erased)
    lam.validate_range(pair.size)
    pos = lam.positions()
    f_terms, g_terms = precondition_terms(
        pair.synthesis.coords[:, pos], pair.analysis.coords[:, pos], tol
    )
    order = f_terms.shape[1]
    gram = cross_gram(f_terms, g_terms) if order else np.zeros((0, 0), dtype=complex)
    resolvent_arg = np.eye(order, dtype=np.complex128) - gram
    if order:
        # the identity sets the natural scale, so the cutoff gets an
        # absolute floor: a resolvent that cancels to rounding noise is
        # singular even though its own largest singular value is nonzero
        s = np.linalg.svd(resolvent_arg, compute_uv=False)
        if s[-1] <= tol.rank_rel * max(1.0, s[0]):
            raise NotInvertibleError(
                f"partial reconstruction operator for erasure set {lam.indices} "
                "is singular; coefficient bridging may still apply"
            )
        coeffs = np.linalg.inv(resolvent_arg)
    else:
        coeffs = resolvent_arg
    return InverseForm(terms_f=f_terms, terms_g=g_terms, gram=gram,
                       coefficients=coeffs)


def reconstruct_via_inverse(pair: DualFramePair, erased: IndexLike,
                            known: Mapping[int, complex],
                            tol: Tolerance = DEFAULT_TOL) -> ReconstructionReport:
    """Recover a vector by applying the factored inverse to the partial
    reconstruction built from the surviving coefficients."""
    lam = as_index_set(erased)
    lam.validate_range(pair.size)
    survivors = lam.complement(pair.size)
    missing = [j for j in survivors if j not in known]
    if missing:
        raise ValueError(f"missing known coefficients for indices {missing}")
    alpha_c = as_vector([known[j] for j in survivors])
    f_r = pair.synthesis.coords[:, survivors.positions()] @ alpha_c
    form = invert_partial_reconstruction(pair, lam, tol)
    recovered = form.apply(f_r)
    coeffs = pair.analysis.coords[:, lam.positions()].conj().T @ recovered
    return ReconstructionReport(
        recovered_coefficients=coeffs,
        recovered_vector=recovered,
        partial=f_r,
    )
