"""Simulation state and the pointwise nonlinear terms."""

from dataclasses import dataclass, field, replace

import numpy as np

from .errors import BlowUpError, ShapeError
from .grid import forward_dft, inverse_dft

__all__ = [
    "NonlinearTerms",
    "SimState",
    "eval_nonlinear",
    "init_state",
    "nonlinear_terms",
    "physical_fields",
    "physical_snapshot",
    "state_from_ic",
]


@dataclass
class SimState:
    """
    Spectral coefficients of an N-component run at step ``n``.

    ``psi_prev`` and ``psi_curr`` have shape (N, M) and hold levels n-1 and n;
    ``psi_prev`` is ``None`` at step 0.  ``phi_curr`` holds the coefficients of
    d/dt psi at level n when known: the initial velocity at step 0, and
    ``None`` afterwards (recovered on demand by the diagnostics).

    ``psi_phys``/``q_phys`` optionally cache the real physical values of level
    n.  They are filled with the sampled data at step 0 and maintained by the
    integrator; anything that edits coefficients directly must clear them.
    """

    psi_curr: np.ndarray
    q_curr: np.ndarray
    tau: float
    psi_prev: np.ndarray | None = None
    phi_curr: np.ndarray | None = None
    step: int = 0
    psi_phys: np.ndarray | None = field(default=None, repr=False, compare=False)
    q_phys: np.ndarray | None = field(default=None, repr=False, compare=False)
    imag_residual: float = field(default=0.0, compare=False)

    def __post_init__(self):
        self.psi_curr = np.atleast_2d(np.asarray(self.psi_curr, dtype=complex))
        self.q_curr = np.asarray(self.q_curr, dtype=complex)
        M = self.psi_curr.shape[-1]
        if self.q_curr.shape != (M,):
            raise ShapeError(f"Q has shape {self.q_curr.shape}, expected ({M},)")
        for name in ("psi_prev", "phi_curr"):
            arr = getattr(self, name)
            if arr is not None:
                arr = np.atleast_2d(np.asarray(arr, dtype=complex))
                if arr.shape != self.psi_curr.shape:
                    raise ShapeError(f"{name} has shape {arr.shape}, expected {self.psi_curr.shape}")
                setattr(self, name, arr)

    @property
    def n_components(self):
        return self.psi_curr.shape[0]

    @property
    def M(self):
        return self.psi_curr.shape[-1]

    @property
    def time(self):
        return self.step * self.tau

    def copy(self):
        def dup(a):
            return None if a is None else a.copy()

        return replace(
            self,
            psi_curr=self.psi_curr.copy(),
            q_curr=self.q_curr.copy(),
            psi_prev=dup(self.psi_prev),
            phi_curr=dup(self.phi_curr),
            psi_phys=dup(self.psi_phys),
            q_phys=dup(self.q_phys),
        )

    def clear_cache(self):
        self.psi_phys = None
        self.q_phys = None


@dataclass
class NonlinearTerms:
    """Physical-space ``f_k = 2 (sum_p psi_p**2 + Q) psi_k`` (shape (N, M)) and ``g = -2 sum_p psi_p**2``."""

    f: np.ndarray
    g: np.ndarray


def init_state(grid, psi0, psi1, q0, tau):
    """Step-0 state from sampled initial values (arrays of shape (N, M), (N, M), (M,))."""
    psi0 = np.atleast_2d(np.asarray(psi0, dtype=float))
    psi1 = np.atleast_2d(np.asarray(psi1, dtype=float))
    q0 = np.asarray(q0, dtype=float)
    return SimState(
        psi_curr=forward_dft(psi0, grid),
        q_curr=forward_dft(q0, grid),
        tau=float(tau),
        phi_curr=forward_dft(psi1, grid),
        psi_phys=psi0.copy(),
        q_phys=q0.copy(),
    )


def state_from_ic(ic, grid, tau):
    return init_state(grid, *ic.sample(grid.x), tau)


def _real_part(values, step, strict):
    """Real part of transformed data; returns (values, largest imaginary part)."""
    residue = float(np.abs(values.imag).max()) if values.size else 0.0
    if strict and residue > 1e-10:
        raise AssertionError(f"imaginary residue {residue:.3e} at step {step}")
    return values.real, residue


def nonlinear_terms(psi, q):
    """Pointwise f and g from real physical values ``psi`` (N, M) and ``q`` (M,)."""
    rho = np.sum(psi * psi, axis=0)
    return NonlinearTerms(f=2.0 * (rho + q) * psi, g=-2.0 * rho)


def _check_finite(arrays, step):
    for arr in arrays:
        if not np.all(np.isfinite(arr)):
            raise BlowUpError(step, "non-finite value")


def physical_fields(state, grid, strict=False):
    """
    Real physical values ``(psi, q)`` of level n, filling the state's cache.

    The largest discarded imaginary part is tracked on ``state.imag_residual``;
    with ``strict=True`` anything above 1e-10 raises.
    """
    if state.psi_phys is None:
        state.psi_phys, r = _real_part(inverse_dft(state.psi_curr, grid), state.step, strict)
        state.imag_residual = max(state.imag_residual, r)
    if state.q_phys is None:
        state.q_phys, r = _real_part(inverse_dft(state.q_curr, grid), state.step, strict)
        state.imag_residual = max(state.imag_residual, r)
    return state.psi_phys, state.q_phys


def eval_nonlinear(state, grid, strict=False):
    """Nonlinear terms at level n, from the real parts of the physical fields."""
    psi, q = physical_fields(state, grid, strict)
    _check_finite((psi, q), state.step)
    return nonlinear_terms(psi, q)


def physical_snapshot(state, grid):
    """
    Real physical values on ``x_0 ... x_M``.

    Returns an array of shape (N + 1, M + 1): rows psi_1 ... psi_N then Q, with
    the periodic endpoint ``j = M`` copied from ``j = 0``.
    """
    psi, q = physical_fields(state, grid)
    values = np.vstack([psi, q])
    return np.concatenate([values, values[:, :1]], axis=1)
