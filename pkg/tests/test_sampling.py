import numpy as np
import pytest

from framebridge import (
    IndexSet,
    build_trig_scheme,
    build_truncated_shannon,
    minimal_redundancy,
    recover_coefficients,
    recover_samples,
    sampling_bridge_matrix,
    solve_bridge,
)
from framebridge.errors import NoRobustBridgeError, UnderdeterminedSchemeError
from framebridge.sampling import (
    evaluate_trig_member,
    induced_pair,
    random_trig_member,
    trig_member_samples,
)


def test_trig_scheme_constants():
    scheme = build_trig_scheme(1, 2)
    np.testing.assert_allclose(scheme.value_table, 0.5 * np.ones((2, 2)),
                               atol=1e-15)
    np.testing.assert_allclose(scheme.points, [0.0, 0.5])


def test_trig_scheme_validation():
    with pytest.raises(UnderdeterminedSchemeError):
        build_trig_scheme(3, 2)
    with pytest.raises(ValueError):
        build_trig_scheme(4, 8)


def test_trig_reconstruction_identity(rng):
    scheme = build_trig_scheme(3, 4)
    for _ in range(10):
        coeffs = random_trig_member(scheme, rng)
        samples = trig_member_samples(scheme, coeffs)
        # interpolation identity at off-grid points
        t = rng.uniform(0.0, 1.0, size=7)
        direct = evaluate_trig_member(scheme, coeffs, t)
        interp = np.zeros_like(direct)
        for j in range(scheme.size):
            fj = scheme.synthesis_coordinates[:, j]
            orders = np.arange(-1, 2)
            basis = np.exp(2j * np.pi * t[:, None] * orders[None, :])
            interp += samples[j] * (basis @ fj)
        np.testing.assert_allclose(interp, direct, atol=1e-10)


def test_trig_critical_sampling_has_no_redundancy():
    scheme = build_trig_scheme(3, 3)
    assert np.linalg.matrix_rank(scheme.value_table) == 3
    pair = induced_pair(scheme)
    assert not minimal_redundancy(pair.analysis, [1])
    samples = trig_member_samples(scheme, np.array([1.0, 2.0, 3.0]))
    known = {j + 1: samples[j] for j in range(3) if j != 0}
    with pytest.raises(NoRobustBridgeError):
        recover_samples(scheme, [1], None, known)


def test_shannon_table_values():
    scheme = build_truncated_shannon(1.0, 4)
    np.testing.assert_allclose(scheme.value_table, np.eye(9), atol=1e-15)
    scheme = build_truncated_shannon(0.5, 4)
    # one step apart: the cardinal kernel at half-integer spacing
    assert scheme.value_table[4, 5] == pytest.approx(2.0 / np.pi)
    # two steps apart: a kernel zero
    assert scheme.value_table[4, 6] == pytest.approx(0.0, abs=1e-15)
    np.testing.assert_allclose(scheme.points, np.arange(-4, 5) * 0.5)
    assert not scheme.exact


def test_shannon_validation():
    with pytest.raises(ValueError):
        build_truncated_shannon(0.0, 4)
    with pytest.raises(ValueError):
        build_truncated_shannon(1.5, 4)
    with pytest.raises(ValueError):
        build_truncated_shannon(0.5, 0)


def test_sampling_bridge_matrix_slices():
    scheme = build_trig_scheme(3, 6)
    b = sampling_bridge_matrix(scheme, [1, 2], [4, 5])
    np.testing.assert_allclose(b, scheme.value_table[np.ix_([0, 1], [3, 4])])
    single = sampling_bridge_matrix(scheme, [2], [5])
    assert single.shape == (1, 1)
    assert single[0, 0] == scheme.value_table[1, 4]
    with pytest.raises(ValueError):
        sampling_bridge_matrix(scheme, [1], [1])
    shannon = build_truncated_shannon(0.5, 4)
    b = sampling_bridge_matrix(shannon, [5], [6])
    assert b[0, 0] == pytest.approx(2.0 / np.pi)


def test_recover_samples_trig_single(rng):
    scheme = build_trig_scheme(3, 6)
    coeffs = random_trig_member(scheme, rng)
    samples = trig_member_samples(scheme, coeffs)
    known = {j + 1: samples[j] for j in range(6) if j + 1 != 2}
    result = recover_samples(scheme, [2], [5], known)
    assert abs(result.values[0] - samples[1]) <= 1e-9
    direct = evaluate_trig_member(scheme, coeffs, scheme.points[1])
    assert abs(result.values[0] - direct) <= 1e-9
    assert result.exact


def test_recover_samples_auto_bridge(rng):
    scheme = build_trig_scheme(5, 8)
    for _ in range(10):
        coeffs = random_trig_member(scheme, rng)
        samples = trig_member_samples(scheme, coeffs)
        erased = sorted(rng.choice(8, size=3, replace=False) + 1)
        known = {j: samples[j - 1] for j in range(1, 9) if j not in erased}
        result = recover_samples(scheme, erased, None, known)
        truth = samples[[j - 1 for j in erased]]
        np.testing.assert_allclose(result.values, truth, atol=1e-8)
        assert len(result.bridge) == len(erased)


def test_recover_samples_empty_erasure():
    scheme = build_trig_scheme(3, 6)
    result = recover_samples(scheme, [], None,
                             {j: 0.0 for j in range(1, 7)})
    assert result.values.size == 0


def test_recover_samples_missing_input():
    scheme = build_trig_scheme(3, 6)
    with pytest.raises(ValueError):
        recover_samples(scheme, [2], None, {1: 0.0})


def test_sampling_agrees_with_frame_bridging(rng):
    # running the same erasure through the induced dual pair must give
    # identical numbers: samples are exactly the analysis coefficients
    scheme = build_trig_scheme(5, 9)
    pair = induced_pair(scheme)
    coeffs = random_trig_member(scheme, rng)
    samples = trig_member_samples(scheme, coeffs)
    erased = [3, 7]
    known = {j: samples[j - 1] for j in range(1, 10) if j not in erased}
    result = recover_samples(scheme, erased, [1, 5], known)
    plan = solve_bridge(pair, erased, [1, 5])
    frame_rec = recover_coefficients(plan, known)
    np.testing.assert_allclose(result.values, frame_rec, atol=1e-10)


def test_shannon_truncation_error_decays():
    spacing = 0.5

    def member(t):
        return np.sinc(t / 2.0) ** 2

    errors = []
    for half_width in (8, 16, 32, 64):
        scheme = build_truncated_shannon(spacing, half_width)
        samples = member(scheme.points).astype(complex)
        center = half_width  # 0-based position of t = 0
        erased = [center + 1]
        known = {j + 1: samples[j] for j in range(scheme.size) if j != center}
        result = recover_samples(scheme, erased, [center + 2], known)
        assert not result.exact
        errors.append(abs(result.values[0] - samples[center]))
    for previous, current in zip(errors, errors[1:]):
        assert current <= 1.1 * previous
    assert errors[-1] < errors[0]
