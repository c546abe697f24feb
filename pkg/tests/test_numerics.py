import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from framebridge.errors import SingularMatrixError, UnsupportedSizeError
from framebridge.numerics import (
    DEFAULT_TOL,
    Tolerance,
    as_matrix,
    eigenvalues,
    invert,
    numeric_rank,
    solve_basic_least_squares,
    solve_least_squares,
)


def test_tolerance_validation():
    with pytest.raises(ValueError):
        Tolerance(rank_rel=0.0)
    with pytest.raises(ValueError):
        Tolerance(residual_rel=1.0)
    t = Tolerance()
    assert t.rank_rel == 1e-10 and t.residual_rel == 1e-9


def test_as_matrix_rejects_nan():
    with pytest.raises(ValueError):
        as_matrix([[np.nan, 0.0]])
    with pytest.raises(ValueError):
        as_matrix([1.0, 2.0])


def test_least_squares_identity():
    x, consistent, residual = solve_least_squares(np.eye(2), np.eye(2))
    assert consistent and residual == 0.0
    np.testing.assert_allclose(x, np.eye(2))


def test_least_squares_singular_consistent_minimum_norm():
    # rank-1 consistent system; the minimum-norm solution was enumerated
    # by hand: X = [[0, 1/2], [0, 1/2]] and A X - B = 0
    a = np.array([[-1.0, -1.0], [1.0, 1.0]])
    b = np.array([[0.0, -1.0], [0.0, 1.0]])
    x, consistent, residual = solve_least_squares(a, b)
    assert consistent
    np.testing.assert_allclose(x, [[0.0, 0.5], [0.0, 0.5]], atol=1e-14)
    np.testing.assert_allclose(a @ x, b, atol=1e-14)


def test_least_squares_inconsistent_scalar():
    x, consistent, residual = solve_least_squares([[0.0]], [[1.0]])
    assert not consistent
    assert residual == pytest.approx(1.0)


def test_least_squares_shape_mismatch():
    with pytest.raises(ValueError):
        solve_least_squares(np.eye(2), np.eye(3))


def test_basic_least_squares_prefers_early_columns():
    a = np.array([[-1.0, -1.0], [1.0, 1.0]])
    b = np.array([[0.0, -1.0], [0.0, 1.0]])
    x, consistent, residual = solve_basic_least_squares(a, b)
    assert consistent
    # supported on the first column only
    np.testing.assert_allclose(x, [[0.0, 1.0], [0.0, 0.0]], atol=1e-14)


def test_numeric_rank_cases():
    assert numeric_rank(np.eye(3)) == 3
    assert numeric_rank([[1.0, 1.0], [1.0, 1.0]]) == 1
    assert numeric_rank([[-1.0, -1.0], [1.0, 1.0]]) == 1
    assert numeric_rank(np.zeros((2, 2))) == 0


def test_eigenvalues_cases():
    np.testing.assert_allclose(sorted(eigenvalues(np.eye(2)).real), [1.0, 1.0])
    ev = sorted(eigenvalues([[1.0, 0.0], [1.0, 0.0]]).real)
    np.testing.assert_allclose(ev, [0.0, 1.0], atol=1e-14)
    ev = eigenvalues([[0.0, 1.0], [0.0, 0.0]])
    assert np.max(np.abs(ev)) <= 1e-14


def test_eigenvalues_size_cap():
    with pytest.raises(UnsupportedSizeError):
        eigenvalues(np.eye(65))
    with pytest.raises(ValueError):
        eigenvalues(np.ones((2, 3)))


def test_invert_cases():
    np.testing.assert_allclose(invert(np.eye(2)), np.eye(2))
    np.testing.assert_allclose(invert([[1.0]]), [[1.0]])
    with pytest.raises(SingularMatrixError) as err:
        invert([[0.0]])
    assert err.value.rank == 0


def test_invert_well_conditioned_random():
    rng = np.random.default_rng(1)
    for _ in range(20):
        n = int(rng.integers(2, 8))
        a = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
        a += 2 * n * np.eye(n)
        x = invert(a)
        assert np.linalg.norm(x @ a - np.eye(n)) <= 1e-10 * np.linalg.norm(a)


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_least_squares_consistent_by_construction(seed):
    rng = np.random.default_rng(seed)
    m, n, k = (int(rng.integers(1, 7)) for _ in range(3))
    a = rng.standard_normal((m, n)) + 1j * rng.standard_normal((m, n))
    x0 = rng.standard_normal((n, k)) + 1j * rng.standard_normal((n, k))
    b = a @ x0
    _, consistent, residual = solve_least_squares(a, b)
    assert consistent
    assert residual <= 1e-12 * (1.0 + np.linalg.norm(b))


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_numeric_rank_permutation_invariant(seed):
    rng = np.random.default_rng(seed)
    m, n = int(rng.integers(1, 7)), int(rng.integers(1, 7))
    r = int(rng.integers(0, min(m, n) + 1))
    a = (rng.standard_normal((m, r)) @ rng.standard_normal((r, n))
         if r else np.zeros((m, n)))
    rank = numeric_rank(a)
    assert rank == r
    p = rng.permutation(m)
    q = rng.permutation(n)
    assert numeric_rank(a[p][:, q]) == rank


def test_nilpotent_triangular_eigenvalues():
    rng = np.random.default_rng(7)
    for n in (2, 4, 8):
        u = np.triu(rng.standard_normal((n, n)), 1)
        assert np.max(np.abs(eigenvalues(u))) <= 1e-10
