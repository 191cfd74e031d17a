"""Run orchestration: initial data, time stepping, sampling and file output."""

import csv
import json
import logging
import time
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path

import numpy as np

from . import __version__
from .config import dump_config, steps_for
from .diagnostics import EnergySample, energy, max_error, perturb_initial_data
from .errors import BlowUpError, ResonanceError
from .integrator import StepOperator, advance
from .state import init_state, physical_snapshot

__all__ = ["EXIT_CODES", "RunManifest", "RunResult", "run", "simulate", "write_snapshot"]

log = logging.getLogger(__name__)

EXIT_CODES = {"completed": 0, "config-error": 1, "blow-up": 2, "resonance": 2, "failed": 2}


@dataclass
class RunResult:
    """In-memory outcome of :func:`simulate`."""

    config: object
    status: str = "completed"
    message: str = ""
    final_state: object = None
    snapshots: dict = field(default_factory=dict)
    energy: list = field(default_factory=list)
    error: list = field(default_factory=list)
    failed_step: int | None = None
    imag_residual: float = 0.0
    noise_sigma: dict = field(default_factory=dict)

    @property
    def completed(self):
        return self.status == "completed"


@dataclass
class RunManifest:
    config: dict
    version: str
    seeds: list
    started: str
    finished: str
    wall_seconds: float
    status: str
    message: str = ""
    failed_step: int | None = None
    steps: int = 0
    imag_residual: float = 0.0
    files: list = field(default_factory=list)

    @property
    def exit_code(self):
        return EXIT_CODES.get(self.status, 2)

    def write(self, directory):
        path = Path(directory) / "manifest.json"
        path.write_text(json.dumps(self.__dict__, indent=2, default=_jsonable) + "\n")
        return path


def _jsonable(obj):
    if isinstance(obj, (np.floating, np.integer)):
        return obj.item()
    if isinstance(obj, tuple):
        return list(obj)
    return str(obj)


def initial_data(config):
    """Sampled (psi0, psi1, q0) for a config, with noise applied if requested."""
    grid = config.grid
    psi0, psi1, q0 = config.build_ic().sample(grid.x)
    sigma = {}
    if config.noise is not None:
        clean = {"psi0": psi0, "psi1": psi1, "q0": q0}
        psi0, psi1, q0 = perturb_initial_data(
            psi0, psi1, q0, config.noise.snr_db, config.noise.seed, config.noise.fields
        )
        noisy = {"psi0": psi0, "psi1": psi1, "q0": q0}
        sigma = {k: float(np.std(noisy[k] - clean[k])) for k in config.noise.fields}
    return psi0, psi1, q0, sigma


def _event_steps(config):
    n_final = config.n_steps
    snaps = {steps_for(t, config.tau) for t in config.snapshot_times}
    energy_steps = set(range(0, n_final + 1, config.energy_every)) if config.energy_every else set()
    error_steps = set(range(0, n_final + 1, config.error_every)) if config.error_every else set()
    return snaps, energy_steps, error_steps


def simulate(config, on_event=None):
    """
    Integrate ``config`` from t = 0 to ``t_final`` without writing files.

    Snapshots, energy and error samples are collected at the configured
    steps.  Blow-up and resonance end the run early and are reported in the
    result's ``status`` rather than raised.  ``on_event(state, op)`` is called
    at every sampling step.
    """
    grid = config.grid
    op = StepOperator(grid, config.tau, zero_nyquist=config.zero_nyquist, dealias=config.dealias)
    psi0, psi1, q0, sigma = initial_data(config)
    state = init_state(grid, psi0, psi1, q0, config.tau)
    result = RunResult(config=config, noise_sigma=sigma)

    snaps, energy_steps, error_steps = _event_steps(config)
    stops = sorted(snaps | energy_steps | error_steps | {config.n_steps})
    try:
        for stop in stops:
            state = advance(state, op, stop - state.step)
            if stop in snaps:
                result.snapshots[state.time] = physical_snapshot(state, grid)
            if stop in energy_steps:
                result.energy.append(energy(state, op))
            if stop in error_steps:
                result.error.append(max_error(state, grid, config.error_vs_exact))
            if on_event is not None:
                on_event(state, op)
    except BlowUpError as exc:
        result.status, result.message, result.failed_step = "blow-up", str(exc), exc.step
    except ResonanceError as exc:
        result.status, result.message, result.failed_step = "resonance", str(exc), state.step
    result.final_state = state
    result.imag_residual = state.imag_residual
    return result


def _fmt(v):
    return repr(float(v))


def write_snapshot(path, t, x, values, n_components):
    """CSV with columns t, x, psi_1..psi_N, Q over ``x_0 .. x_M``."""
    header = ["t", "x"] + [f"psi_{k}" for k in range(1, n_components + 1)] + ["Q"]
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(header)
        for j in range(len(x)):
            w.writerow([_fmt(t), _fmt(x[j])] + [_fmt(v) for v in values[:, j]])


def _write_series(path, name, samples):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["t", name])
        for s in samples:
            w.writerow([_fmt(s.t), _fmt(s.E if isinstance(s, EnergySample) else s.e)])


def write_outputs(result, directory):
    """Write snapshot, energy and error files for a finished simulation; returns file names."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    cfg = result.config
    x = cfg.grid.x_closed
    files = []
    for t, values in sorted(result.snapshots.items()):
        name = f"snapshot_t{t:010.4f}.csv"
        write_snapshot(directory / name, t, x, values, cfg.n_components)
        files.append(name)
    if cfg.energy_every:
        _write_series(directory / "energy.csv", "E", result.energy)
        files.append("energy.csv")
    if cfg.error_every:
        _write_series(directory / "error.csv", "e", result.error)
        files.append("error.csv")
    (directory / "config.yaml").write_text(dump_config(cfg))
    files.append("config.yaml")
    return files


def run(config, output_dir=None):
    """
    Execute a configured run and write its files; returns the :class:`RunManifest`.

    Output goes to ``output_dir`` (or ``config.output_dir``).  The manifest is
    written last, exactly once, whatever the termination status.
    """
    directory = Path(output_dir or config.output_dir or f"ckg-{config.name}")
    directory.mkdir(parents=True, exist_ok=True)
    started = datetime.now(timezone.utc)
    t0 = time.perf_counter()
    try:
        result = simulate(config)
        files = write_outputs(result, directory)
    except Exception as exc:  # report, never leave a run directory without a manifest
        log.exception("run %s failed", config.name)
        result = RunResult(config=config, status="failed", message=f"{type(exc).__name__}: {exc}")
        files = []
    manifest = RunManifest(
        config=config.to_dict(),
        version=__version__,
        seeds=[config.noise.seed] if config.noise else [],
        started=started.isoformat(),
        finished=datetime.now(timezone.utc).isoformat(),
        wall_seconds=time.perf_counter() - t0,
        status=result.status,
        message=result.message,
        failed_step=result.failed_step,
        steps=result.final_state.step if result.final_state is not None else 0,
        imag_residual=result.imag_residual,
        files=files,
    )
    manifest.write(directory)
    return manifest
