"""Energy functional, error norm and initial-data noise."""

from dataclasses import dataclass

import numpy as np

from .grid import inverse_dft, spectral_dx
from .integrator import phi_recover, psi_step
from .state import eval_nonlinear, physical_fields

__all__ = [
    "EnergySample",
    "ErrorSample",
    "add_noise",
    "energy",
    "energy_density",
    "max_error",
    "noise_sigma",
    "perturb_initial_data",
    "velocity",
]


@dataclass(frozen=True)
class EnergySample:
    t: float
    E: float


@dataclass(frozen=True)
class ErrorSample:
    t: float
    e: float


def velocity(state, op):
    """
    Coefficients of d/dt psi at the state's level, shape (N, M).

    At step 0 this is the initial velocity.  Later levels need psi at n+1,
    which is computed here by a look-ahead step without touching the state.
    """
    if state.phi_curr is not None:
        return state.phi_curr
    nl = eval_nonlinear(state, op.grid)
    psi_next = psi_step(state, nl, op)
    return phi_recover(state.psi_prev, psi_next, op)


def energy_density(psi, psi_t, psi_x, q):
    """Integrand of the conserved energy; ``psi*`` have shape (N, M)."""
    rho = np.sum(psi**2, axis=0)
    return np.sum(psi_t**2 + psi_x**2 + psi**2, axis=0) - rho**2 + 0.5 * q**2


def energy(state, op):
    """
    Energy at the state's time, by the rectangle rule over the periodic grid.

    The x-derivative is spectral; d/dt psi comes from :func:`velocity`.
    """
    grid = op.grid
    psi, q = physical_fields(state, grid)
    psi_t = inverse_dft(velocity(state, op), grid).real
    psi_x = inverse_dft(spectral_dx(state.psi_curr, op.modes), grid).real
    E = grid.h * float(np.sum(energy_density(psi, psi_t, psi_x, q)))
    return EnergySample(state.time, E)


def max_error(state, grid, exact):
    """
    ``max_j |psi_1 - exact psi_1| + max_j |Q - exact Q|`` over ``j = 0 .. M-1``.

    ``exact`` is a :class:`~ckg.solitons.SolitonSpec`; only the first
    component enters the norm.
    """
    psi, q = physical_fields(state, grid)
    t = state.time
    x = grid.x
    e = np.abs(psi[0] - exact.psi(x, t)[0]).max() + np.abs(q - exact.q(x, t)).max()
    return ErrorSample(t, float(e))


def noise_sigma(values, snr_db):
    """Standard deviation of white noise giving the requested SNR for ``values``."""
    values = np.asarray(values, dtype=float)
    power = float(np.mean(values**2))
    return np.sqrt(power / 10.0 ** (snr_db / 10.0))


def add_noise(values, snr_db, seed):
    """
    Add zero-mean white Gaussian noise at ``snr_db`` decibels.

    The noise variance is the mean square of ``values`` divided by
    ``10**(snr_db/10)``; an all-zero signal is returned unchanged.  Samples
    come from NumPy's ziggurat normal sampler on a PCG64 generator seeded with
    ``seed``, so equal seeds give bit-identical output.
    """
    values = np.asarray(values, dtype=float)
    sigma = noise_sigma(values, snr_db)
    if sigma == 0.0:
        return values.copy()
    rng = np.random.default_rng(seed)
    return values + sigma * rng.standard_normal(values.shape)


_FIELDS = ("psi0", "psi1", "q0")


def perturb_initial_data(psi0, psi1, q0, snr_db, seed, fields=_FIELDS):
    """
    Independently perturb each selected initial field at its own SNR.

    Each component of each field draws from its own child of
    ``SeedSequence(seed)``.  Returns the three (possibly perturbed) arrays.
    """
    unknown = set(fields) - set(_FIELDS)
    if unknown:
        raise ValueError(f"unknown noise target(s): {sorted(unknown)}")
    psi0 = np.atleast_2d(np.array(psi0, dtype=float))
    psi1 = np.atleast_2d(np.array(psi1, dtype=float))
    q0 = np.array(q0, dtype=float)
    N = psi0.shape[0]
    children = np.random.SeedSequence(seed).spawn(2 * N + 1)
    if "psi0" in fields:
        psi0 = np.array([add_noise(psi0[k], snr_db, children[k]) for k in range(N)])
    if "psi1" in fields:
        psi1 = np.array([add_noise(psi1[k], snr_db, children[N + k]) for k in range(N)])
    if "q0" in fields:
        q0 = add_noise(q0, snr_db, children[2 * N])
    return psi0, psi1, q0
