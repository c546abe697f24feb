import numpy as np
import pytest

from framebridge import (
    DualFramePair,
    Frame,
    IndexSet,
    analysis,
    bridge_matrix,
    error_operator,
    find_bridge_set,
    is_robust_by_rank,
    minimal_redundancy,
    nonzero_eigenvalue_count,
    partial_reconstruction_operator,
    plan_from_coefficients,
    reconstruct_vector,
    recover_coefficients,
    reduced_error_operator,
    single_erasure_bridge,
    solve_bridge,
)
from framebridge.catalog import (
    mercedes_pair,
    nilpotent_pair,
    random_dual_pair,
    reference_pair_2d,
    tripled_pair,
)
from framebridge.errors import NoRobustBridgeError

from conftest import known_coefficients


@pytest.fixture(scope="module")
def ref():
    return reference_pair_2d()


def test_partial_reconstruction_operator(ref):
    np.testing.assert_allclose(partial_reconstruction_operator(ref, [1]),
                               [[0.0, 0.0], [-1.0, 1.0]], atol=1e-15)
    np.testing.assert_allclose(partial_reconstruction_operator(ref, []),
                               np.eye(2), atol=1e-15)


def test_partial_reconstruction_vanishes_for_tripled_pair():
    base = random_dual_pair(3, 5, seed=11)
    tri = tripled_pair(base)
    r = partial_reconstruction_operator(tri, range(1, base.size + 1))
    assert np.linalg.norm(r, 2) <= 1e-12


def test_error_operator(ref):
    e = error_operator(ref, [1])
    np.testing.assert_allclose(e, [[1.0, 0.0], [1.0, 0.0]], atol=1e-15)
    np.testing.assert_allclose(e @ e, e, atol=1e-15)  # idempotent
    np.testing.assert_allclose(error_operator(ref, []), np.zeros((2, 2)))

    nil = nilpotent_pair()
    e = error_operator(nil, [1])
    np.testing.assert_allclose(e, [[0.0, 1.0], [0.0, 0.0]], atol=1e-15)
    np.testing.assert_allclose(e @ e, np.zeros((2, 2)), atol=1e-15)


def test_bridge_matrix_values(ref):
    np.testing.assert_allclose(bridge_matrix(ref, [2, 4], [1, 3]),
                               [[-1.0, -1.0], [1.0, 1.0]], atol=1e-15)
    np.testing.assert_allclose(bridge_matrix(ref, [1], [3]), [[0.0]], atol=1e-15)
    np.testing.assert_allclose(bridge_matrix(ref, [1], [2]), [[1.0]], atol=1e-15)
    with pytest.raises(ValueError):
        bridge_matrix(ref, [1, 2], [2, 3])


def test_solve_bridge_worked_example(ref):
    plan = solve_bridge(ref, [2, 4], [1, 3])
    assert plan.robust
    # the basic solution drops the redundant second bridge column
    np.testing.assert_allclose(plan.coefficients, [[0.0, 1.0], [0.0, 0.0]],
                               atol=1e-12)
    np.testing.assert_allclose(plan.bridged_vectors[:, 0], [0.0, 0.0], atol=1e-12)
    np.testing.assert_allclose(plan.bridged_vectors[:, 1], [1.0, 0.0], atol=1e-12)


def test_solve_bridge_single_cases(ref):
    plan = solve_bridge(ref, [1], [2])
    assert plan.robust
    np.testing.assert_allclose(plan.bridged_vectors[:, 0],
                               ref.analysis.vector(2), atol=1e-14)
    plan = solve_bridge(ref, [1], [3])
    assert not plan.robust
    assert plan.residual == pytest.approx(1.0)


def test_single_erasure_bridge(ref):
    plan = single_erasure_bridge(ref, 1, 2)
    assert plan.robust
    np.testing.assert_allclose(plan.coefficients, [[1.0]])
    np.testing.assert_allclose(plan.bridged_vectors[:, 0],
                               ref.analysis.vector(2))
    assert single_erasure_bridge(ref, 1, 4).robust
    assert not single_erasure_bridge(ref, 1, 3).robust
    with pytest.raises(ValueError):
        single_erasure_bridge(ref, 1, 1)


def test_single_erasure_zero_over_zero_is_robust():
    # unreduced error operator already nilpotent: zero weight suffices
    nil = nilpotent_pair()
    plan = single_erasure_bridge(nil, 1, 2)
    assert plan.robust
    np.testing.assert_allclose(plan.coefficients, [[0.0]])


def test_find_bridge_set_greedy(ref):
    om, plan = find_bridge_set(ref, [1])
    assert om.indices == (2,)
    assert plan.robust

    om, plan = find_bridge_set(ref, [2, 4])
    assert plan.robust
    assert len(om) == 1  # erased synthesis vectors span one dimension
    assert set(om.indices) <= {1, 3}


def test_find_bridge_set_requires_minimal_redundancy(ref):
    # complement of {2,3} in the analysis frame spans only one direction
    with pytest.raises(NoRobustBridgeError):
        find_bridge_set(ref, [2, 3])


def test_find_bridge_set_tripled_full_erasure():
    base = random_dual_pair(2, 4, seed=3)
    tri = tripled_pair(base)
    lam = list(range(1, base.size + 1))
    assert minimal_redundancy(tri.analysis, lam)
    om, plan = find_bridge_set(tri, lam)
    assert plan.robust
    assert len(om) <= 2  # bounded by the span of the erased synthesis vectors


def test_is_robust_by_rank(ref):
    assert is_robust_by_rank(ref, [2, 4], [1, 3])
    # rank test can be false although a zero bridge is robust
    nil = nilpotent_pair()
    assert not is_robust_by_rank(nil, [1], [2])
    assert solve_bridge(nil, [1], [2]).robust
    mb = mercedes_pair()
    assert is_robust_by_rank(mb, [1], [2])


def test_rank_sufficiency_random():
    for seed in range(40):
        pair = random_dual_pair(3, 7, seed=100 + seed)
        rng = np.random.default_rng(seed)
        lam = IndexSet.of(sorted(int(j) + 1 for j in
                                 rng.choice(7, size=2, replace=False)))
        om = IndexSet.of(sorted(int(j) + 1 for j in rng.choice(
            [i for i in range(7) if i + 1 not in lam], size=2, replace=False)))
        if is_robust_by_rank(pair, lam, om):
            assert solve_bridge(pair, lam, om).robust


def test_rank_equivalence_on_parseval():
    mb = mercedes_pair()
    for k in (1, 2, 3):
        for ell in (1, 2, 3):
            if k == ell:
                continue
            assert (is_robust_by_rank(mb, [k], [ell])
                    == solve_bridge(mb, [k], [ell]).robust)


def test_reduced_error_operator_worked_example(ref):
    plan = solve_bridge(ref, [2, 4], [1, 3])
    e = reduced_error_operator(plan)
    np.testing.assert_allclose(e @ np.array([3.0, 3.0]), [-3.0, 3.0], atol=1e-12)
    np.testing.assert_allclose(e @ e, np.zeros((2, 2)), atol=1e-12)

    zero = plan_from_coefficients(ref, [1], [2], [[0.0]])
    np.testing.assert_allclose(reduced_error_operator(zero),
                               error_operator(ref, [1]), atol=1e-15)


def test_recover_coefficients_worked_example(ref):
    plan = solve_bridge(ref, [2, 4], [1, 3])
    known = known_coefficients(ref, [4.0, 2.0], erased=[2, 4])
    rec = recover_coefficients(plan, known)
    np.testing.assert_allclose(rec, [3.0, 4.0], atol=1e-12)


def test_recover_coefficients_empty_and_zero(ref):
    om, plan = find_bridge_set(ref, [])
    assert recover_coefficients(plan, {}).size == 0
    plan = solve_bridge(ref, [2, 4], [1, 3])
    known = known_coefficients(ref, [0.0, 0.0], erased=[2, 4])
    np.testing.assert_allclose(recover_coefficients(plan, known), [0.0, 0.0],
                               atol=1e-15)


def test_recover_coefficients_refuses_non_robust(ref):
    plan = solve_bridge(ref, [1], [3])
    with pytest.raises(NoRobustBridgeError):
        recover_coefficients(plan, known_coefficients(ref, [1.0, 2.0], erased=[1]))
    with pytest.raises(ValueError):
        recover_coefficients(solve_bridge(ref, [1], [2]), {2: 1.0})


def test_reconstruct_vector_worked_example(ref):
    plan = solve_bridge(ref, [2, 4], [1, 3])
    f = np.array([4.0, 2.0])
    report = reconstruct_vector(plan, known_coefficients(ref, f, erased=[2, 4]),
                                reference=f)
    np.testing.assert_allclose(report.partial, [3.0, 3.0], atol=1e-12)
    np.testing.assert_allclose(report.supplement, [4.0, -4.0], atol=1e-12)
    np.testing.assert_allclose(report.bridged, [7.0, -1.0], atol=1e-12)
    np.testing.assert_allclose(report.correction, [-3.0, 3.0], atol=1e-12)
    np.testing.assert_allclose(report.recovered_vector, f, atol=1e-12)
    assert report.max_abs_error <= 1e-12


def test_reconstruct_vector_random_single(ref, rng):
    plan = solve_bridge(ref, [1], [2])
    for _ in range(10):
        f = rng.standard_normal(2) + 1j * rng.standard_normal(2)
        report = reconstruct_vector(plan, known_coefficients(ref, f, erased=[1]))
        np.testing.assert_allclose(report.recovered_vector, f, atol=1e-10)
    zero = reconstruct_vector(plan, known_coefficients(ref, [0.0, 0.0], erased=[1]))
    np.testing.assert_allclose(zero.recovered_vector, [0.0, 0.0], atol=1e-15)


def test_bridging_invariants_random():
    # nilpotency, perpendicularity, the supplement annihilation, and
    # perfect recovery over a modest random family (the acceptance suite
    # runs the full-size version)
    for seed in range(30):
        pair = random_dual_pair(int(2 + seed % 4), int(7 + seed % 5), seed=seed)
        rng = np.random.default_rng(900 + seed)
        n, big = pair.dim, pair.size
        lam = None
        for _ in range(60):
            cand = IndexSet.of(sorted(int(j) + 1 for j in rng.choice(
                big, size=int(rng.integers(1, min(3, big - n) + 1)),
                replace=False)))
            if minimal_redundancy(pair.analysis, cand):
                lam = cand
                break
        assert lam is not None
        om, plan = find_bridge_set(pair, lam)
        assert plan.robust

        e = reduced_error_operator(plan)
        norm = np.linalg.norm(e, 2)
        assert np.linalg.norm(e @ e, 2) <= 1e-9 * (1.0 + norm ** 2)

        defects = pair.analysis.coords[:, lam.positions()] - plan.bridged_vectors
        for j in range(len(lam)):
            fj = pair.synthesis.coords[:, lam.positions()[j]]
            for k in range(len(lam)):
                d = defects[:, k]
                bound = 1e-9 * (1.0 + np.linalg.norm(fj) * np.linalg.norm(d))
                assert abs(np.vdot(d, fj)) <= bound

        f = rng.standard_normal(n) + 1j * rng.standard_normal(n)
        known = known_coefficients(pair, f, erased=lam)
        report = reconstruct_vector(plan, known, reference=f)
        assert np.linalg.norm(report.recovered_vector - f) \
            <= 1e-8 * (1.0 + np.linalg.norm(f))
        # the reduced error operator annihilates the supplement
        assert np.linalg.norm(e @ report.supplement) <= 1e-9 * (
            1.0 + np.linalg.norm(report.supplement))
        truth = analysis(pair.analysis, f)[lam.positions()]
        np.testing.assert_allclose(report.recovered_coefficients, truth,
                                   atol=1e-8)


def test_existence_iff_minimal_redundancy_small():
    # desk-scale two-way check on a handful of structured pairs; the
    # acceptance suite runs the full fixture family
    from itertools import combinations

    pairs = [reference_pair_2d(), nilpotent_pair()]
    for pair in pairs:
        big = pair.size
        for size in (1, 2):
            for lam_t in combinations(range(1, big + 1), size):
                lam = IndexSet.of(lam_t)
                mr = minimal_redundancy(pair.analysis, lam)
                found = False
                for om_size in range(1, size + 1):
                    for om_t in combinations(
                            [j for j in range(1, big + 1) if j not in lam_t],
                            om_size):
                        if solve_bridge(pair, lam, IndexSet.of(om_t)).robust:
                            found = True
                            break
                    if found:
                        break
                assert found == mr, (pair, lam_t)


def test_nonzero_eigenvalue_count_cases(ref):
    plan = solve_bridge(ref, [2, 4], [1, 3])
    assert nonzero_eigenvalue_count(ref, plan) == 0

    unbridged = plan_from_coefficients(ref, [1], [2], [[0.0]])
    assert not unbridged.robust
    assert nonzero_eigenvalue_count(ref, unbridged) == 1  # idempotent direction


def test_nonzero_eigenvalue_count_truncated():
    rng = np.random.default_rng(42)
    for trial in range(25):
        pair = random_dual_pair(4, 10, seed=2000 + trial)
        lam = IndexSet.of(sorted(int(j) + 1 for j in
                                 rng.choice(10, size=3, replace=False)))
        if not minimal_redundancy(pair.analysis, lam):
            continue
        om, plan = find_bridge_set(pair, lam)
        if len(om) < 2:
            continue
        m = len(om) - 1
        truncated = plan_from_coefficients(
            pair, lam, IndexSet.of(om.indices[:m]), plan.coefficients[:m, :])
        count = nonzero_eigenvalue_count(pair, truncated)
        assert count <= len(lam) - m
