import numpy as np
import numpy.testing as npt
import pytest

from ckg.errors import BlowUpError, ShapeError
from ckg.grid import GridSpec, forward_dft
from ckg.solitons import SolitonSpec, build_single_soliton_ic
from ckg.state import (
    SimState,
    eval_nonlinear,
    init_state,
    nonlinear_terms,
    physical_fields,
    physical_snapshot,
    state_from_ic,
)

GRID = GridSpec(-24, 104, 512)


def constant_state(grid, psi_value, q_value, N=1):
    M = grid.M
    return init_state(grid, np.full((N, M), psi_value), np.zeros((N, M)), np.full(M, q_value), 0.02)


def test_zero_fields_give_zero_terms():
    nl = eval_nonlinear(constant_state(GRID, 0.0, 0.0), GRID)
    npt.assert_array_equal(nl.f, 0)
    npt.assert_array_equal(nl.g, 0)


def test_constant_fields():
    nl = eval_nonlinear(constant_state(GRID, 1.0, 0.0), GRID)
    npt.assert_array_equal(nl.f, 2.0)
    npt.assert_array_equal(nl.g, -2.0)


def test_coupling_sums_over_components():
    nl = nonlinear_terms(np.array([[1.0], [2.0]]), np.array([0.5]))
    npt.assert_array_equal(nl.f[:, 0], [2 * 5.5 * 1, 2 * 5.5 * 2])
    npt.assert_array_equal(nl.g, [-10.0])


def test_soliton_peak_terms():
    spec = SolitonSpec(0.4)
    grid = GridSpec(-32, 32, 256)
    state = state_from_ic(build_single_soliton_ic(spec), grid, 0.02)
    # drop the cache so the values go through the inverse transform
    state.clear_cache()
    nl = eval_nonlinear(state, grid)
    j = int(np.argmin(np.abs(grid.x)))
    A = np.sqrt(7 / 3)
    assert abs(nl.f[0, j] - 2 * (A**2 - 4 / 3) * A) < 1e-10
    assert abs(nl.g[j] + 2 * A**2) < 1e-10


def test_nan_raises_blowup_with_step():
    state = constant_state(GRID, 1.0, 0.0)
    state.psi_phys[0, 7] = np.nan
    state.step = 42
    with pytest.raises(BlowUpError) as info:
        eval_nonlinear(state, GRID)
    assert info.value.step == 42


def test_snapshot_of_constant_state():
    snap = physical_snapshot(constant_state(GRID, 0.5, -0.25, N=2), GRID)
    assert snap.shape == (3, GRID.M + 1)
    npt.assert_allclose(snap[:2], 0.5, atol=1e-15)
    npt.assert_allclose(snap[2], -0.25, atol=1e-15)


def test_snapshot_matches_sampled_soliton():
    spec = SolitonSpec(0.4, (0.6, 0.8))
    state = state_from_ic(build_single_soliton_ic(spec), GRID, 0.02)
    state.clear_cache()
    snap = physical_snapshot(state, GRID)
    x = GRID.x
    npt.assert_allclose(snap[:2, :-1], spec.psi(x), atol=1e-12, rtol=0)
    npt.assert_allclose(snap[2, :-1], spec.q(x), atol=1e-12, rtol=0)
    npt.assert_array_equal(snap[:, -1], snap[:, 0])


def test_physical_fields_tracks_imaginary_residue():
    grid = GridSpec(0, 1, 8)
    c = forward_dft(np.ones((1, 8)), grid)
    state = SimState(c * 1j, np.zeros(8), 0.1)
    physical_fields(state, grid)
    assert state.imag_residual == pytest.approx(1.0)
    state.clear_cache()
    with pytest.raises(AssertionError):
        physical_fields(state, grid, strict=True)


def test_state_shape_checks():
    with pytest.raises(ShapeError):
        SimState(np.zeros((1, 8)), np.zeros(6), 0.1)
    with pytest.raises(ShapeError):
        SimState(np.zeros((1, 8)), np.zeros(8), 0.1, psi_prev=np.zeros((2, 8)))


def test_copy_is_deep():
    state = constant_state(GRID, 1.0, 0.0)
    dup = state.copy()
    dup.psi_curr[0, 0] = 99
    dup.psi_phys[0, 0] = 99
    assert state.psi_curr[0, 0] != 99 and state.psi_phys[0, 0] == 1.0
    assert state.time == 0.0
