import numpy as np
import pytest
import scipy.linalg

from framebridge import analysis
from framebridge.bridging import partial_reconstruction_operator
from framebridge.errors import NotInvertibleError
from framebridge.numerics import DEFAULT_TOL, numeric_rank


def known_coefficients(pair, vector, erased=()):
    """All analysis coefficients of ``vector`` except the erased ones."""
    coeffs = analysis(pair.analysis, vector)
    gone = set(erased)
    return {j: coeffs[j - 1] for j in range(1, pair.size + 1) if j not in gone}


def dense_partial_inverse(pair, erased):
    """Oracle: invert the partial reconstruction operator densely."""
    r = partial_reconstruction_operator(pair, erased)
    if numeric_rank(r, DEFAULT_TOL) < r.shape[0]:
        raise NotInvertibleError("singular")
    return scipy.linalg.inv(r)


def random_vector(rng, dim, complex_valued=True):
    v = rng.standard_normal(dim)
    if complex_valued:
        v = v + 1j * rng.standard_normal(dim)
    return v


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)
