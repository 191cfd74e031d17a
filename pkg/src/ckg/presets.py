"""Named experiment presets reproducing the accuracy table and the figure runs."""

import csv
import time
from collections.abc import Callable
from dataclasses import dataclass
from datetime import datetime, timezone
from pathlib import Path

import numpy as np

from . import __version__
from .collisions import free_tracks, front_fraction, radiation_level
from .config import ICRecipe, NoiseSpec, RunConfig
from .runner import EXIT_CODES, RunManifest, simulate, write_outputs
from .studies import (
    STUDY_FILES,
    accuracy_base,
    emit_table1,
    energy_series,
    space_ladder,
    time_ladder,
    write_study,
)

__all__ = ["NOISE_SEED", "PRESETS", "Preset", "figure_config", "run_preset"]

FIGURE_TIMES = (0.0, 50.0, 100.0, 150.0, 200.0)
NOISE_SEED = 20110
NOISE_SNR_DB = 50.0


def figure_config(name):
    """RunConfig for one of the figure presets (fig1-clean, fig1-noisy, fig2, fig3, fig4)."""
    if name in ("fig1-clean", "fig1-noisy"):
        cfg = accuracy_base(h=0.25, tau=0.02, t_final=200.0)
        noise = NoiseSpec(NOISE_SNR_DB, NOISE_SEED) if name == "fig1-noisy" else None
        return RunConfig(
            a=cfg.a, b=cfg.b, M=cfg.M, tau=cfg.tau, t_final=cfg.t_final, ic=cfg.ic,
            noise=noise, snapshot_times=FIGURE_TIMES, energy_every=2500, error_every=2500,
            error_vs_exact=cfg.error_vs_exact, name=name,
        )
    if name == "fig2":
        return _collision(name, "collision_1c", -24.0, 40.0, 8.0, 40.0, (0.0, 10.0, 20.0, 30.0, 40.0), 1)
    if name == "fig3":
        return _collision(name, "collision_1c", -32.0, 32.0, 1.0, 40.0, (0.0, 10.0, 20.0, 30.0, 40.0), 1)
    if name == "fig4":
        return _collision(name, "collision_3c", -96.0, 160.0, 8.0, 200.0, FIGURE_TIMES, 3)
    raise KeyError(name)


def _collision(name, kind, a, b, x0, t_final, snaps, N):
    return RunConfig(
        a=a, b=b, M=int(round((b - a) / 0.25)), tau=0.02, t_final=t_final,
        ic=ICRecipe(kind, x0=x0), n_components=N, snapshot_times=snaps,
        energy_every=500, name=name,
    )


def _manifest(cfg_dict, status, message, started, t0, files, seeds=(), steps=0, imag=0.0, failed_step=None):
    return RunManifest(
        config=cfg_dict, version=__version__, seeds=list(seeds), started=started,
        finished=datetime.now(timezone.utc).isoformat(), wall_seconds=time.perf_counter() - t0,
        status=status, message=message, failed_step=failed_step, steps=steps,
        imag_residual=imag, files=files,
    )


def _now():
    return datetime.now(timezone.utc).isoformat()


def _run_into(cfg, directory):
    """simulate + write files + manifest, returning (result, manifest)."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    started, t0 = _now(), time.perf_counter()
    result = simulate(cfg)
    files = write_outputs(result, directory)
    m = _manifest(
        cfg.to_dict(), result.status, result.message, started, t0, files,
        seeds=[cfg.noise.seed] if cfg.noise else [], steps=result.final_state.step,
        imag=result.imag_residual, failed_step=result.failed_step,
    )
    m.write(directory)
    return result, m


def _study_preset(kind):
    def go(output_dir, workers=1):
        out = Path(output_dir)
        out.mkdir(parents=True, exist_ok=True)
        started, t0 = _now(), time.perf_counter()
        if kind == "space":
            rows = space_ladder(workers)
        elif kind == "time":
            rows = time_ladder(workers)
        else:
            rows = energy_series()
        write_study(out / STUDY_FILES[kind], rows, kind)
        table = emit_table1(out)
        failures = [r.error for r in rows if getattr(r, "error", "")]
        status = "failed" if failures else "completed"
        _manifest(
            {"preset": f"table1-{kind}"}, status, "; ".join(failures), started, t0,
            [STUDY_FILES[kind], table.name],
        ).write(out)
        return EXIT_CODES[status]

    return go


def _table1_all(output_dir, workers=1):
    codes = [_study_preset(k)(Path(output_dir) / k, workers) for k in ("time", "energy", "space")]
    out = Path(output_dir)
    for k in ("time", "energy", "space"):
        src = out / k / STUDY_FILES[k]
        (out / STUDY_FILES[k]).write_bytes(src.read_bytes())
    emit_table1(out)
    return max(codes)


def _fig1(output_dir, workers=1):
    out = Path(output_dir)
    clean, _ = _run_into(figure_config("fig1-clean"), out / "clean")
    noisy, m = _run_into(figure_config("fig1-noisy"), out / "noisy")
    sigma = noisy.noise_sigma.get("psi0", 0.0)
    with open(out / "noise_deviation.csv", "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["t", "max_abs_dpsi_1", "noise_sigma_psi0", "ratio"])
        for t in sorted(noisy.snapshots):
            if t in clean.snapshots:
                dev = float(np.abs(noisy.snapshots[t][0] - clean.snapshots[t][0]).max())
                w.writerow([repr(t), repr(dev), repr(sigma), repr(dev / sigma if sigma else float("nan"))])
    return max(EXIT_CODES.get(clean.status, 2), m.exit_code)


def collision_summary(result):
    """Per-snapshot radiation level (component 1) and, for N = 3, new-front energy fractions."""
    cfg = result.config
    x = cfg.grid.x
    x0 = cfg.ic.x0
    rows = []
    for t, values in sorted(result.snapshots.items()):
        row = {"t": t, "radiation_psi_1": radiation_level(x, values[0, :-1])}
        if cfg.n_components == 3:
            xr, xl = free_tracks(x0, t)
            split = 0.5 * (xr + xl)
            left_mover_side = "right" if xl > split else "left"
            right_mover_side = "left" if left_mover_side == "right" else "right"
            row["left_front_psi_2"] = front_fraction(x, values[1, :-1], split, left_mover_side)
            row["right_front_psi_3"] = front_fraction(x, values[2, :-1], split, right_mover_side)
        rows.append(row)
    return rows


def _figure(name):
    def go(output_dir, workers=1):
        out = Path(output_dir)
        result, m = _run_into(figure_config(name), out)
        rows = collision_summary(result)
        with open(out / "collision_summary.csv", "w", newline="") as fh:
            w = csv.DictWriter(fh, fieldnames=list(rows[0]))
            w.writeheader()
            for row in rows:
                w.writerow({k: repr(float(v)) for k, v in row.items()})
        return m.exit_code

    return go


@dataclass(frozen=True)
class Preset:
    description: str
    action: Callable


PRESETS = {
    "table1-space": Preset("spatial error e(60), h = 1/2 .. 1/16 at tau = 1e-4 (slow)", _study_preset("space")),
    "table1-time": Preset("temporal error e(60), tau = 0.04 .. 0.005 at h = 1/8", _study_preset("time")),
    "table1-energy": Preset("energy at t = 50, 100, 150, 200 with h = 1/4, tau = 0.02", _study_preset("energy")),
    "table1": Preset("all three accuracy studies and the combined table (slow)", _table1_all),
    "fig1-noise": Preset("50 dB noisy vs clean soliton run to t = 200", _fig1),
    "fig2": Preset("one-component collision, well separated (x0 = 8) on [-24, 40]", _figure("fig2")),
    "fig3": Preset("one-component collision, overlapping (x0 = 1) on [-32, 32]", _figure("fig3")),
    "fig4": Preset("three-component collision (x0 = 8) on [-96, 160] to t = 200", _figure("fig4")),
}


def run_preset(name, output_dir, workers=1):
    """Run a preset into ``output_dir`` and return the process exit code."""
    try:
        preset = PRESETS[name]
    except KeyError:
        raise KeyError(f"unknown preset {name!r}; choose from {', '.join(PRESETS)}") from None
    return preset.action(output_dir, workers=workers)
