import numpy as np
import numpy.testing as npt
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ckg.errors import ParameterError
from ckg.grid import GridSpec
from ckg.solitons import (
    SolitonSpec,
    build_collision_ic_1c,
    build_collision_ic_3c,
    build_single_soliton_ic,
    sech,
    soliton_psi,
    soliton_psi_t,
    soliton_psi_tt,
    soliton_q,
    soliton_q_t,
    soliton_residual,
    superpose,
    zero_ic,
)

speeds = st.floats(-0.9, 0.9)
points = st.floats(-10, 10)
EPS = 1e-6


def central(f, t):
    return (f(t + EPS) - f(t - EPS)) / (2 * EPS)


def test_peak_values():
    assert soliton_psi(0.0, 1.0, 0.0, 0.0) == 1.0
    assert soliton_psi(0.4, 1.0, 0.0, 0.0) == pytest.approx(np.sqrt(7 / 3), rel=1e-15)
    assert soliton_q(0.4, 0.0, 0.0) == pytest.approx(-4 / 3, rel=1e-15)
    assert soliton_q(-0.25, 0.0, 0.0) == pytest.approx(0.4, rel=1e-15)


def test_stationary_soliton_has_no_velocity_or_q():
    x = np.linspace(-5, 5, 11)
    npt.assert_array_equal(soliton_psi_t(0.0, 1.0, x, 3.0), 0)
    npt.assert_array_equal(soliton_q(0.0, x, 3.0), 0)


@pytest.mark.parametrize("t", [0.0, 1.5, 40.0])
def test_shape_travels_with_speed(t):
    c = 0.4
    assert soliton_psi(c, 1.0, c * t, t) == pytest.approx(np.sqrt(7 / 3), rel=1e-14)
    assert soliton_psi_t(c, 1.0, c * t, t) == 0.0


def test_velocity_matches_finite_difference_at_reference_point():
    fd = central(lambda t: soliton_psi(0.4, 1.0, 1.0, t), 0.0)
    assert abs(soliton_psi_t(0.4, 1.0, 1.0, 0.0) - fd) < 1e-8


@settings(max_examples=100, deadline=None)
@given(c=speeds, x=points, t=st.floats(-5, 5))
def test_time_derivatives_match_finite_differences(c, x, t):
    assert abs(soliton_psi_t(c, 1.0, x, t) - central(lambda s: soliton_psi(c, 1.0, x, s), t)) < 1e-7
    assert abs(soliton_psi_tt(c, 1.0, x, t) - central(lambda s: soliton_psi_t(c, 1.0, x, s), t)) < 1e-6
    assert abs(soliton_q_t(c, x, t) - central(lambda s: soliton_q(c, x, s), t)) < 1e-6


@pytest.mark.parametrize("c", [1.0, -1.0, 1.5])
def test_speed_limit(c):
    for f in (lambda: soliton_psi(c, 1, 0, 0), lambda: soliton_q(c, 0, 0), lambda: SolitonSpec(c)):
        with pytest.raises(ParameterError):
            f()


def test_sech_does_not_overflow():
    with np.errstate(over="raise"):
        assert sech(800.0) == 0.0
        npt.assert_array_equal(sech(np.array([-1e4, 1e4])), 0)
    assert sech(0.0) == 1.0


def test_spec_is_centred_at_x0():
    s = SolitonSpec(0.4, (0.6, 0.8), x0=3.0)
    p = s.psi(np.array([3.0]))
    npt.assert_allclose(p[:, 0], np.array([0.6, 0.8]) * np.sqrt(7 / 3))
    assert s.is_exact()


def test_single_soliton_ic():
    ic = build_single_soliton_ic(SolitonSpec(0.4))
    x = np.linspace(-5, 5, 21)
    psi0, psi1, q0 = ic.sample(x)
    npt.assert_array_equal(psi0[0], soliton_psi(0.4, 1.0, x, 0.0))
    npt.assert_array_equal(psi1[0], soliton_psi_t(0.4, 1.0, x, 0.0))
    npt.assert_array_equal(q0, soliton_q(0.4, x, 0.0))

    psi0, psi1, q0 = build_single_soliton_ic(SolitonSpec(0.0)).sample(x)
    npt.assert_array_equal(psi1, 0)
    npt.assert_array_equal(q0, 0)


def test_single_soliton_amplitude_constraint():
    with pytest.raises(ParameterError):
        build_single_soliton_ic(SolitonSpec(0.4, (0.5, 0.5)))
    with pytest.raises(ParameterError):
        build_single_soliton_ic(SolitonSpec(0.4), N=2)


def test_collision_1c_data():
    psi0, _, q0 = build_collision_ic_1c(8.0).sample(np.array([-8.0, 8.0]))
    # peaks sit 16 apart, so the other soliton's tail contributes ~1e-7
    assert psi0[0, 0] == pytest.approx(2.0, abs=1e-6)  # sqrt(1.6/0.4)
    assert psi0[0, 1] == pytest.approx(np.sqrt(0.75 / 1.25), abs=1e-6)
    assert q0[1] == pytest.approx(0.4, abs=1e-6)


def test_collision_far_separation_limit():
    x0 = 50.0
    far = SolitonSpec(-0.25, (1.0,), x0)
    assert abs(far.psi(np.array([0.0]))[0, 0]) < 1e-20
    total = build_collision_ic_1c(x0).sample(np.array([-x0]))[0][0, 0]
    assert total == soliton_psi(0.6, 1.0, 0.0, 0.0)


def test_collision_3c_components():
    ic = build_collision_ic_3c(8.0)
    assert ic.n_components == 3
    psi0, _, _ = ic.sample(np.array([-8.0, 8.0]))
    r = 1 / np.sqrt(2)
    npt.assert_allclose(psi0[:, 0], np.array([r, -r, 0.0]) * 2.0, atol=1e-6)
    npt.assert_allclose(psi0[:, 1], np.array([-0.5, 0.0, np.sqrt(3) / 2]) * np.sqrt(0.6), atol=1e-6)


@pytest.mark.parametrize("x0", [0.0, -1.0])
def test_collision_rejects_nonpositive_x0(x0):
    with pytest.raises(ParameterError):
        build_collision_ic_1c(x0)
    with pytest.raises(ParameterError):
        build_collision_ic_3c(x0)


def test_superpose_requires_matching_components():
    with pytest.raises(ParameterError):
        superpose([SolitonSpec(0.1), SolitonSpec(0.2, (0.6, 0.8))])
    with pytest.raises(ParameterError):
        superpose([])


def test_nonfinite_initial_data_rejected():
    ic = zero_ic()
    ic.q0 = lambda x: np.full_like(x, np.nan)
    with pytest.raises(ParameterError):
        ic.sample(np.zeros(4))


def test_exact_soliton_residual():
    grid = GridSpec(-64, 64, 1024)
    assert soliton_residual(grid, SolitonSpec(0.4)) < 1e-8
    assert soliton_residual(grid, SolitonSpec(0.4, (0.6, -0.8)), t=2.0) < 1e-8
    assert soliton_residual(grid, SolitonSpec(-0.25)) < 1e-8


def test_residual_negative_control():
    grid = GridSpec(-64, 64, 1024)
    assert soliton_residual(grid, SolitonSpec(0.4), speed=0.41) > 1e-3
