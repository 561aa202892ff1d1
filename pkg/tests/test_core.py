import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from imperfect_ifm import (
    InterferometerConfig,
    PhotonState,
    absorber_matrix,
    beam_splitter_matrix,
    evolve_state,
    exact_success_probability_product,
    perfect_absorber_probability,
    propagate_no_object,
)
from imperfect_ifm._validation import ProbabilityRangeError, clamp_probability
from imperfect_ifm.core import SEQUENTIAL_LIMIT

R2 = math.sqrt(2) / 2


def test_config_defaults_theta():
    cfg = InterferometerConfig(5, 0.1)
    assert cfg.theta == pytest.approx(math.pi / 10)


@pytest.mark.parametrize(
    "kwargs",
    [
        dict(n_splitters=0, eta=0.1),
        dict(n_splitters=3, eta=-0.01),
        dict(n_splitters=3, eta=1.01),
        dict(n_splitters=3, eta=0.5, theta=0.0),
        dict(n_splitters=3, eta=0.5, theta=math.pi / 2 + 1e-9),
        dict(n_splitters=3, eta=float("nan")),
    ],
)
def test_config_rejects(kwargs):
    with pytest.raises(ValueError):
        InterferometerConfig(**kwargs)


def test_config_rejects_float_n():
    with pytest.raises(TypeError):
        InterferometerConfig(2.5, 0.1)


def test_beam_splitter_examples():
    np.testing.assert_allclose(beam_splitter_matrix(math.pi / 2), [[0, 1], [-1, 0]], atol=1e-16)
    np.testing.assert_allclose(beam_splitter_matrix(math.pi / 4), [[R2, R2], [-R2, R2]], atol=1e-16)
    with pytest.raises(ValueError):
        beam_splitter_matrix(-0.1)


@settings(max_examples=100)
@given(st.floats(min_value=1e-12, max_value=math.pi / 2))
def test_beam_splitter_orthogonal(theta):
    b = beam_splitter_matrix(theta)
    np.testing.assert_allclose(b.T @ b, np.eye(2), rtol=0, atol=1e-15)


def test_absorber_examples():
    np.testing.assert_array_equal(absorber_matrix(1.0), np.eye(2))
    np.testing.assert_array_equal(absorber_matrix(0.0), [[0, 0], [0, 1]])
    np.testing.assert_array_equal(absorber_matrix(0.25), [[0.5, 0], [0, 1]])
    with pytest.raises(ValueError):
        absorber_matrix(1.5)


def test_propagate_no_object_examples():
    st0 = propagate_no_object(0, 0.3)
    assert (st0.amp_a, st0.amp_b, st0.p_absorbed) == (0, 1, 0)
    n = 7
    st_n = propagate_no_object(n, math.pi / (2 * n))
    assert abs(st_n.amp_a - 1) < 1e-15 and abs(st_n.amp_b) < 1e-15
    st1 = propagate_no_object(1, math.pi / 4)
    assert st1.amp_a == pytest.approx(R2) and st1.amp_b == pytest.approx(R2)


def test_transparent_chain_reproduces_rotation():
    theta = 0.0123
    for k in range(1, 201):
        st_k = evolve_state(PhotonState.input_port(), InterferometerConfig(k, 1.0, theta))
        assert abs(st_k.amp_a - math.sin(k * theta)) < 1e-12
        assert abs(st_k.amp_b - math.cos(k * theta)) < 1e-12


def test_evolve_examples():
    out = evolve_state(PhotonState.input_port(), InterferometerConfig(1, 0.3, math.pi / 2))
    assert abs(out.amp_a - 1) < 1e-15 and abs(out.amp_b) < 1e-15 and out.p_absorbed == 0

    # B A B |1bar> with eta = 0, theta = pi/4 worked out by hand
    out = evolve_state(PhotonState.input_port(), InterferometerConfig(2, 0.0, math.pi / 4))
    assert out.amp_a == pytest.approx(0.5)
    assert out.amp_b == pytest.approx(0.5)
    assert out.p_absorbed == pytest.approx(0.5)

    out = evolve_state(PhotonState.input_port(), InterferometerConfig(2, 1.0, math.pi / 4))
    assert abs(out.amp_a - 1) < 1e-15 and abs(out.amp_b) < 1e-15


def test_conservation_grid():
    for n in range(1, 51):
        for eta in np.round(np.linspace(0, 1, 11), 10):
            out = evolve_state(PhotonState.input_port(), InterferometerConfig(n, eta))
            assert abs(out.norm_defect) < 1e-12
            assert 0.0 <= out.p_absorbed <= 1.0


@pytest.mark.parametrize(
    "n, eta, theta, expected",
    [
        (2, 0.25, math.pi / 4, 0.0625),
        (5, 0.0, math.pi / 10, 0.6054290497131063),
        (3, 1.0, math.pi / 6, 0.0),
    ],
)
def test_product_examples(n, eta, theta, expected):
    p = exact_success_probability_product(InterferometerConfig(n, eta, theta))
    assert p == pytest.approx(expected, abs=1e-14)


def test_product_matches_brute_force(oracle_p):
    for n in (1, 2, 3, 10, 57, 200):
        for eta in (0.0, 0.1, 0.5, 0.95, 1.0):
            assert exact_success_probability_product(InterferometerConfig(n, eta)) == pytest.approx(
                oracle_p(n, eta), abs=1e-13
            )


def test_powering_path_matches_sequential():
    n = SEQUENTIAL_LIMIT + 1
    cfg = InterferometerConfig(n, 0.15)
    sequential = abs(evolve_state(PhotonState.input_port(), cfg).amp_b) ** 2
    assert exact_success_probability_product(cfg) == pytest.approx(sequential, abs=1e-11)


def test_perfect_absorber():
    assert perfect_absorber_probability(2, math.pi / 4) == pytest.approx(0.25)
    assert perfect_absorber_probability(25) == pytest.approx(0.9059591594251266, abs=1e-15)
    for n in range(1, 201):
        theta = math.pi / (2 * n)
        p = exact_success_probability_product(InterferometerConfig(n, 0.0, theta))
        assert abs(p - perfect_absorber_probability(n, theta)) < 1e-12


def test_perfect_absorber_asymptote():
    for n in (100, 1000, 10000):
        gap = 1 - perfect_absorber_probability(n) - math.pi**2 / (4 * n)
        assert abs(gap) * n * n < 10


def test_clamp():
    assert clamp_probability(-1e-13) == 0.0
    assert clamp_probability(1 + 1e-13) == 1.0
    assert clamp_probability(0.3) == 0.3
    with pytest.raises(ProbabilityRangeError):
        clamp_probability(-1e-9)
    with pytest.raises(ProbabilityRangeError):
        clamp_probability(1.001)


@settings(max_examples=200, deadline=None)
@given(
    st.integers(min_value=1, max_value=50),
    st.floats(min_value=0, max_value=1),
    st.floats(min_value=1e-6, max_value=math.pi / 2),
)
def test_conservation_property(n, eta, theta):
    out = evolve_state(PhotonState.input_port(), InterferometerConfig(n, eta, theta))
    assert abs(out.norm_defect) < 1e-12
    p = exact_success_probability_product(InterferometerConfig(n, eta, theta))
    assert 0.0 <= p <= 1.0
