"""
Trigonometric time integrator in phase space.

Each psi mode obeys a forced oscillator ``y'' + lam**2 y = f``; the scheme is
exact for the linear part and applies the trapezoidal rule to the forcing:

    first step:  psi1 = psi0 cos(lam tau) + v0 sin(lam tau)/lam + (tau/2) f0 sin(lam tau)/lam
    recurrence:  psi[n+1] = -psi[n-1] + 2 psi[n] cos(lam tau) + tau f[n] sin(lam tau)/lam

Each Q mode obeys ``Q' - i mu Q = g'`` and is advanced by

    Q[n+1] = e Q[n] + (i mu tau/2 + 1) g[n+1] + (i mu tau/2 - 1) e g[n],   e = exp(i mu tau)

which needs g at the new level, so psi is always updated before Q.
"""

import logging

import numpy as np

from .errors import BlowUpError, ParameterError, ResonanceError
from .grid import dealias, forward_dft, inverse_dft
from .state import SimState, eval_nonlinear, physical_fields

__all__ = [
    "BLOWUP_THRESHOLD",
    "StepOperator",
    "advance",
    "first_step",
    "phi_recover",
    "psi_step",
    "q_step",
]

log = logging.getLogger(__name__)

BLOWUP_THRESHOLD = 1e8
RESONANCE_WARN = 1e-6
RESONANCE_FAIL = 1e-8


class StepOperator:
    """
    Per-mode propagation factors for one ``(grid, tau)`` pair.

    Parameters
    ----------
    grid : GridSpec
    tau : float
        Time step.
    zero_nyquist : bool
        Drop the unpaired Nyquist wave number from the Q transport factors.
    dealias : bool
        Apply 2/3-rule truncation to the transformed nonlinear terms.
    strict : bool
        Raise if psi picks up an imaginary part above 1e-10 in physical space.
    linear : bool
        Replace the nonlinear terms f and g by zero (free propagation).
    """

    def __init__(self, grid, tau, zero_nyquist=False, dealias=False, strict=False, linear=False):
        tau = float(tau)
        if not tau > 0:
            raise ParameterError(f"time step must be positive, got {tau!r}")
        self.grid = grid
        self.tau = tau
        self.modes = grid.modes(zero_nyquist=zero_nyquist)
        self.dealias = bool(dealias)
        self.strict = bool(strict)
        self.linear = bool(linear)

        lam, mu = self.modes.lam, self.modes.mu_odd
        self.lam = lam
        self.cos_table = np.cos(lam * tau)
        self.sin_table = np.sin(lam * tau)
        self.sinc_table = self.sin_table / lam
        self.exp_table = np.exp(1j * mu * tau)
        self.q_plus = 1j * mu * tau / 2.0 + 1.0
        self.q_minus_exp = (1j * mu * tau / 2.0 - 1.0) * self.exp_table

        worst = int(np.argmin(np.abs(self.sin_table)))
        if abs(self.sin_table[worst]) < RESONANCE_WARN:
            log.warning(
                "mode l=%d is near resonance for tau=%g: |sin(lam tau)| = %.2e",
                self.modes.l[worst], tau, abs(self.sin_table[worst]),
            )

    def transform_nonlinear(self, values):
        if self.linear:
            return np.zeros(np.shape(values), dtype=complex)
        coeffs = forward_dft(values, self.grid)
        return dealias(coeffs, self.modes) if self.dealias else coeffs

    def check_resonance(self):
        worst = int(np.argmin(np.abs(self.sin_table)))
        value = abs(self.sin_table[worst])
        if value < RESONANCE_FAIL:
            raise ResonanceError(int(self.modes.l[worst]), self.tau, value)


def _psi_update(psi_prev, psi_curr, f_hat, op):
    return -psi_prev + 2.0 * op.cos_table * psi_curr + op.tau * op.sinc_table * f_hat


def _density(psi):
    return np.sum(psi * psi, axis=0)


def _physical_psi(psi_hat, op, step):
    values = inverse_dft(psi_hat, op.grid)
    residue = float(np.abs(values.imag).max())
    if op.strict and residue > 1e-10:
        raise AssertionError(f"psi imaginary residue {residue:.3e} at step {step}")
    return values.real, residue


def _check_blowup(step, *arrays):
    for arr in arrays:
        peak = np.abs(arr).max()
        if not peak <= BLOWUP_THRESHOLD:
            reason = "non-finite value" if not np.isfinite(peak) else f"|field| = {peak:.3e} > {BLOWUP_THRESHOLD:.0e}"
            raise BlowUpError(step, f"numerical blow-up ({reason})")


def psi_step(state, nl, op):
    """psi coefficients at level n+1 (shape (N, M)) from levels n-1, n and the nonlinearity at n."""
    if state.psi_prev is None:
        raise ParameterError("psi_step needs two time levels; use first_step at n = 0")
    out = _psi_update(state.psi_prev, state.psi_curr, op.transform_nonlinear(nl.f), op)
    _check_blowup(state.step + 1, out)
    return out


def q_step(q_curr, g_n, g_np1, op):
    """Q coefficients at level n+1 from Q at n and the transformed g at n and n+1."""
    out = op.exp_table * q_curr + op.q_plus * g_np1 + op.q_minus_exp * g_n
    _check_blowup(None, out)
    return out


def phi_recover(psi_prev, psi_next, op):
    """Coefficients of d/dt psi at level n from the centred difference of levels n+1 and n-1."""
    op.check_resonance()
    return op.lam * (psi_next - psi_prev) / (2.0 * op.sin_table)


def first_step(state, op):
    """Advance a step-0 state (with initial velocity in ``phi_curr``) to step 1."""
    if state.step != 0 or state.phi_curr is None:
        raise ParameterError("first_step needs a step-0 state carrying the initial velocity")
    nl = eval_nonlinear(state, op.grid, strict=op.strict)
    f_hat = op.transform_nonlinear(nl.f)
    psi1 = (
        state.psi_curr * op.cos_table
        + state.phi_curr * op.sinc_table
        + 0.5 * op.tau * op.sinc_table * f_hat
    )
    psi1_phys, residue = _physical_psi(psi1, op, 1)
    g0_hat = op.transform_nonlinear(nl.g)
    g1_hat = op.transform_nonlinear(-2.0 * _density(psi1_phys))
    q1 = op.exp_table * state.q_curr + op.q_plus * g1_hat + op.q_minus_exp * g0_hat
    q1_phys = inverse_dft(q1, op.grid).real
    _check_blowup(1, psi1_phys, q1_phys)
    return SimState(
        psi_curr=psi1,
        q_curr=q1,
        tau=op.tau,
        psi_prev=state.psi_curr.copy(),
        step=1,
        psi_phys=psi1_phys,
        q_phys=q1_phys,
        imag_residual=max(state.imag_residual, residue),
    )


def advance(state, op, steps):
    """
    Take ``steps`` time steps and return the new state; the input is not modified.

    A step-0 state is first moved to step 1 with :func:`first_step`, which
    counts as one of the requested steps.
    """
    steps = int(steps)
    if steps < 0:
        raise ParameterError(f"steps must be non-negative, got {steps}")
    if abs(state.tau - op.tau) > 1e-14 * op.tau:
        raise ParameterError(f"state tau {state.tau!r} does not match operator tau {op.tau!r}")
    if steps == 0:
        return state.copy()
    if state.step == 0:
        state = first_step(state, op)
        steps -= 1
        if steps == 0:
            return state

    grid = op.grid
    psi_phys, q_phys = physical_fields(state, grid)
    psi_prev, psi = state.psi_prev, state.psi_curr
    q = state.q_curr
    g_hat = op.transform_nonlinear(-2.0 * _density(psi_phys))
    residual = state.imag_residual
    step = state.step

    for _ in range(steps):
        step += 1
        rho = _density(psi_phys)
        f_hat = op.transform_nonlinear(2.0 * (rho + q_phys) * psi_phys)
        psi_next = _psi_update(psi_prev, psi, f_hat, op)
        psi_phys, r = _physical_psi(psi_next, op, step)
        residual = max(residual, r)
        g_next = op.transform_nonlinear(-2.0 * _density(psi_phys))
        q = op.exp_table * q + op.q_plus * g_next + op.q_minus_exp * g_hat
        q_phys = inverse_dft(q, grid).real
        _check_blowup(step, psi_phys, q_phys)
        psi_prev, psi, g_hat = psi, psi_next, g_next

    return SimState(
        psi_curr=psi,
        q_curr=q,
        tau=op.tau,
        psi_prev=psi_prev,
        step=step,
        psi_phys=psi_phys,
        q_phys=q_phys,
        imag_residual=residual,
    )
