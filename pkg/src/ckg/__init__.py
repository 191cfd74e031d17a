"""
Fourier pseudospectral / trigonometric-integrator solver for the N-coupled
nonlinear Klein-Gordon equations

    (d_tt - d_xx) psi_k + psi_k - 2 (sum_p psi_p**2 + Q) psi_k = 0
    (d_t - d_x) Q + 2 d_t sum_p psi_p**2 = 0

on a periodic interval.
"""

__version__ = "0.1.0"

from .config import RunConfig, load_config, parse_config
from .diagnostics import EnergySample, ErrorSample, add_noise, energy, max_error
from .errors import (
    BlowUpError,
    CKGError,
    ConfigError,
    ParameterError,
    ResonanceError,
    ShapeError,
)
from .grid import (
    GridSpec,
    ModeTable,
    forward_dft,
    inverse_dft,
    spectral_dx,
    spectral_dxx,
)
from .integrator import StepOperator, advance, first_step, phi_recover, psi_step, q_step
from .runner import RunManifest, run, simulate
from .solitons import (
    InitialCondition,
    SolitonSpec,
    build_collision_ic_1c,
    build_collision_ic_3c,
    build_single_soliton_ic,
    pde_residual,
    soliton_psi,
    soliton_psi_t,
    soliton_q,
    soliton_residual,
)
from .state import (
    NonlinearTerms,
    SimState,
    eval_nonlinear,
    init_state,
    physical_snapshot,
    state_from_ic,
)

__all__ = [
    "BlowUpError",
    "CKGError",
    "ConfigError",
    "EnergySample",
    "ErrorSample",
    "GridSpec",
    "InitialCondition",
    "ModeTable",
    "NonlinearTerms",
    "ParameterError",
    "ResonanceError",
    "RunConfig",
    "RunManifest",
    "ShapeError",
    "SimState",
    "SolitonSpec",
    "StepOperator",
    "add_noise",
    "advance",
    "build_collision_ic_1c",
    "build_collision_ic_3c",
    "build_single_soliton_ic",
    "energy",
    "eval_nonlinear",
    "first_step",
    "forward_dft",
    "init_state",
    "inverse_dft",
    "load_config",
    "max_error",
    "parse_config",
    "pde_residual",
    "phi_recover",
    "physical_snapshot",
    "psi_step",
    "q_step",
    "run",
    "simulate",
    "soliton_psi",
    "soliton_psi_t",
    "soliton_q",
    "soliton_residual",
    "spectral_dx",
    "spectral_dxx",
    "state_from_ic",
]
