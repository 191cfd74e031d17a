"""
Exact one-soliton solutions and initial-condition builders.

The one-soliton family of the N-coupled system, with ``|c| < 1`` and
``theta = (x - c t) / sqrt(1 - c**2)``::

    psi_k(x, t) = alpha_k sqrt((1 + c) / (1 - c)) sech(theta)
    Q(x, t)     = 2 c / (c - 1) sech(theta)**2

is an exact solution when ``sum_k alpha_k**2 == 1``.  Time derivatives are
derived by hand and checked against finite differences in the test-suite.
"""

from collections.abc import Callable, Sequence
from dataclasses import dataclass, field

import numpy as np

from .errors import ParameterError
from .grid import forward_dft, inverse_dft, spectral_dx, spectral_dxx

__all__ = [
    "InitialCondition",
    "SolitonSpec",
    "build_collision_ic_1c",
    "build_collision_ic_3c",
    "build_single_soliton_ic",
    "pde_residual",
    "sech",
    "soliton_psi",
    "soliton_psi_t",
    "soliton_psi_tt",
    "soliton_q",
    "soliton_q_t",
    "soliton_residual",
    "superpose",
    "zero_ic",
]

# cosh overflows near 710; beyond this sech is far below the smallest normal double.
_SECH_CUTOFF = 350.0


def sech(theta):
    theta = np.asarray(theta, dtype=float)
    out = np.zeros_like(theta)
    inside = np.abs(theta) <= _SECH_CUTOFF
    out[inside] = 1.0 / np.cosh(theta[inside])
    return out if out.ndim else float(out)


def _check_speed(c):
    if not abs(c) < 1.0:
        raise ParameterError(f"soliton speed must satisfy |c| < 1, got c={c!r}")


def _theta(c, x, t):
    return (np.asarray(x, dtype=float) - c * t) / np.sqrt(1.0 - c * c)


def _amplitude(c, alpha):
    return alpha * np.sqrt((1.0 + c) / (1.0 - c))


def soliton_psi(c, alpha, x, t):
    _check_speed(c)
    return _amplitude(c, alpha) * sech(_theta(c, x, t))


def soliton_psi_t(c, alpha, x, t):
    _check_speed(c)
    th = _theta(c, x, t)
    s = sech(th)
    return _amplitude(c, alpha) * c / np.sqrt(1.0 - c * c) * s * np.tanh(th)


def soliton_psi_tt(c, alpha, x, t):
    _check_speed(c)
    th = _theta(c, x, t)
    s = sech(th)
    # d/dtheta [sech tanh] = sech (2 sech^2 - 1), and dtheta/dt = -c / sqrt(1 - c^2)
    return -_amplitude(c, alpha) * c * c / (1.0 - c * c) * s * (2.0 * s * s - 1.0)


def soliton_q(c, x, t):
    _check_speed(c)
    return 2.0 * c / (c - 1.0) * sech(_theta(c, x, t)) ** 2


def soliton_q_t(c, x, t):
    _check_speed(c)
    th = _theta(c, x, t)
    s = sech(th)
    return 2.0 * c / (c - 1.0) * 2.0 * c / np.sqrt(1.0 - c * c) * s * s * np.tanh(th)


@dataclass(frozen=True)
class SolitonSpec:
    """
    One travelling soliton.

    ``alpha`` holds one amplitude coefficient per component.  The profile is
    centred at ``x0`` at ``t = 0``, i.e. evaluated at ``x - x0``.
    """

    c: float
    alpha: tuple = (1.0,)
    x0: float = 0.0

    def __post_init__(self):
        _check_speed(self.c)
        object.__setattr__(self, "alpha", tuple(float(a) for a in np.atleast_1d(self.alpha)))

    @property
    def n_components(self):
        return len(self.alpha)

    def is_exact(self, tol=1e-12):
        return abs(sum(a * a for a in self.alpha) - 1.0) <= tol

    def psi(self, x, t=0.0):
        """Array of shape (N, len(x)) with every component at time t."""
        xs = np.asarray(x, dtype=float) - self.x0
        return np.array([soliton_psi(self.c, a, xs, t) for a in self.alpha])

    def psi_t(self, x, t=0.0):
        xs = np.asarray(x, dtype=float) - self.x0
        return np.array([soliton_psi_t(self.c, a, xs, t) for a in self.alpha])

    def psi_tt(self, x, t=0.0):
        xs = np.asarray(x, dtype=float) - self.x0
        return np.array([soliton_psi_tt(self.c, a, xs, t) for a in self.alpha])

    def q(self, x, t=0.0):
        return soliton_q(self.c, np.asarray(x, dtype=float) - self.x0, t)

    def q_t(self, x, t=0.0):
        return soliton_q_t(self.c, np.asarray(x, dtype=float) - self.x0, t)


@dataclass
class InitialCondition:
    """
    Initial data ``psi_k(x, 0)``, ``d/dt psi_k(x, 0)`` and ``Q(x, 0)`` as callables of x.
    """

    psi0: Sequence[Callable]
    psi1: Sequence[Callable]
    q0: Callable
    label: str = field(default="custom")

    def __post_init__(self):
        if len(self.psi0) != len(self.psi1):
            raise ParameterError("psi0 and psi1 must have one function per component")

    @property
    def n_components(self):
        return len(self.psi0)

    def sample(self, x):
        """Evaluate on the points x; returns (psi0, psi1, q0) with shapes (N, M), (N, M), (M,)."""
        x = np.asarray(x, dtype=float)
        psi0 = np.array([np.broadcast_to(f(x), x.shape) for f in self.psi0], dtype=float)
        psi1 = np.array([np.broadcast_to(f(x), x.shape) for f in self.psi1], dtype=float)
        q0 = np.array(np.broadcast_to(self.q0(x), x.shape), dtype=float)
        bad = [name for name, v in (("psi0", psi0), ("psi1", psi1), ("q0", q0)) if not np.all(np.isfinite(v))]
        if bad:
            raise ParameterError(f"initial data not finite: {', '.join(bad)}")
        return psi0, psi1, q0


def superpose(solitons, label="superposition"):
    """
    Initial data given by summing one-soliton profiles at ``t = 0``.

    Every soliton must carry the same number of components.  The sum is only
    initial data; it is not an exact solution of the coupled system.
    """
    solitons = list(solitons)
    if not solitons:
        raise ParameterError("need at least one soliton")
    N = solitons[0].n_components
    if any(s.n_components != N for s in solitons):
        raise ParameterError("all solitons must have the same number of components")

    def component(k, attr):
        return lambda x: sum(getattr(s, attr)(x)[k] for s in solitons)

    return InitialCondition(
        psi0=[component(k, "psi") for k in range(N)],
        psi1=[component(k, "psi_t") for k in range(N)],
        q0=lambda x: sum(s.q(x) for s in solitons),
        label=label,
    )


def build_single_soliton_ic(spec, N=None):
    if N is not None and N != spec.n_components:
        raise ParameterError(f"spec has {spec.n_components} amplitude(s), expected N={N}")
    if not spec.is_exact():
        total = sum(a * a for a in spec.alpha)
        raise ParameterError(f"amplitudes must satisfy sum(alpha**2) = 1, got {total!r}")
    return superpose([spec], label=f"single_soliton(c={spec.c})")


def _check_x0(x0):
    if not x0 > 0:
        raise ParameterError(f"dislocation x0 must be positive, got {x0!r}")


def build_collision_ic_1c(x0):
    """A c=0.6 soliton centred at -x0 heading right and a c=-0.25 soliton at +x0 heading left."""
    _check_x0(x0)
    return superpose(
        [SolitonSpec(0.6, (1.0,), -x0), SolitonSpec(-0.25, (1.0,), x0)],
        label=f"collision_1c(x0={x0})",
    )


def build_collision_ic_3c(x0):
    """
    Three-component collision data.

    The right-moving c=0.6 soliton lives in components 1 and 2 with
    amplitudes (1/sqrt 2, -1/sqrt 2); the left-moving c=-0.25 soliton lives in
    components 1 and 3 with amplitudes (-1/2, sqrt 3/2).
    """
    _check_x0(x0)
    r = 1.0 / np.sqrt(2.0)
    return superpose(
        [
            SolitonSpec(0.6, (r, -r, 0.0), -x0),
            SolitonSpec(-0.25, (-0.5, 0.0, np.sqrt(3.0) / 2.0), x0),
        ],
        label=f"collision_3c(x0={x0})",
    )


def zero_ic(N=1):
    zero = lambda x: np.zeros_like(np.asarray(x, dtype=float))
    return InitialCondition([zero] * N, [zero] * N, zero, label="zero")


def pde_residual(grid, psi, psi_t, psi_tt, q, q_t):
    """
    Largest pointwise residual of both evolution equations.

    ``psi*`` have shape (N, M) and hold sampled values of psi_k and its first
    and second time derivatives; ``q`` and ``q_t`` are Q and dQ/dt.  The
    x-derivatives are taken spectrally.
    """
    modes = grid.modes()
    psi = np.atleast_2d(psi)
    psi_xx = inverse_dft(spectral_dxx(forward_dft(psi, grid), modes), grid).real
    q_x = inverse_dft(spectral_dx(forward_dft(q, grid), modes), grid).real
    rho = np.sum(psi**2, axis=0)
    wave = np.atleast_2d(psi_tt) - psi_xx + psi - 2.0 * (rho + q) * psi
    transport = q_t - q_x + 4.0 * np.sum(psi * np.atleast_2d(psi_t), axis=0)
    return float(max(np.abs(wave).max(), np.abs(transport).max()))


def soliton_residual(grid, spec, t=0.0, speed=None):
    """
    PDE residual of a soliton profile sampled on ``grid``.

    The profile has the shape of ``spec`` and is taken to translate rigidly
    at ``speed`` (default ``spec.c``), so ``psi_t = -speed psi_x`` and
    ``psi_tt = speed**2 psi_xx``.  With the default this is the exact solution;
    any other speed serves as a negative control.
    """
    c = spec.c
    v = c if speed is None else float(speed)
    x = grid.x
    s = np.sqrt(1.0 - c * c)
    th = _theta(c, x - spec.x0, t)
    S, T = sech(th), np.tanh(th)
    amp = np.array([_amplitude(c, a) for a in spec.alpha])[:, None]
    psi_x = -amp / s * S * T
    psi_xx = -amp / (s * s) * S * (2.0 * S * S - 1.0)
    q_x = -2.0 * (2.0 * c / (c - 1.0)) / s * S * S * T
    return pde_residual(grid, spec.psi(x, t), -v * psi_x, v * v * psi_xx, spec.q(x, t), -v * q_x)
