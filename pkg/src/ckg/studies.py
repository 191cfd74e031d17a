"""Convergence and conservation studies, and the accuracy table built from them."""

import csv
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace
from pathlib import Path

from .config import ICRecipe, RunConfig
from .diagnostics import energy, max_error
from .integrator import StepOperator, advance
from .runner import initial_data
from .solitons import SolitonSpec
from .state import init_state

__all__ = [
    "REFERENCE",
    "ConvergenceRow",
    "accuracy_base",
    "convergence_study",
    "emit_table1",
    "energy_study",
    "read_study",
    "write_study",
]

# Published accuracy results for the c = 0.4 soliton on [-24, 104].
REFERENCE = {
    "space": {0.5: 1.1677e-1, 0.25: 2.8638e-6, 0.125: 1.7098e-6, 0.0625: 1.0244e-8},
    "time": {0.04: 1.1654e-1, 0.02: 2.9405e-2, 0.01: 7.3659e-3, 0.005: 1.8423e-3},
    "energy": {50.0: 0.67890052, 100.0: 0.67890052, 150.0: 0.67890050, 200.0: 0.67890051},
}
SPACE_LEVELS = (0.5, 0.25, 0.125, 0.0625)
TIME_LEVELS = (0.04, 0.02, 0.01, 0.005)
ENERGY_TIMES = (50.0, 100.0, 150.0, 200.0)


def accuracy_base(h=0.125, tau=0.02, t_final=60.0):
    """The single-soliton accuracy test: c = 0.4 on [-24, 104], error against the exact solution."""
    soliton = SolitonSpec(0.4, (1.0,))
    cfg = RunConfig(
        a=-24.0, b=104.0, M=4, tau=tau, t_final=t_final,
        ic=ICRecipe("single_soliton", c=0.4, alpha=(1.0,)),
        error_vs_exact=soliton, name="accuracy",
    )
    return cfg.with_spacing(h)


@dataclass
class ConvergenceRow:
    level: float
    e: float
    order: float | None = None
    error: str = ""


def _final_error(cfg):
    grid = cfg.grid
    op = StepOperator(grid, cfg.tau, zero_nyquist=cfg.zero_nyquist, dealias=cfg.dealias)
    psi0, psi1, q0, _ = initial_data(cfg)
    state = advance(init_state(grid, psi0, psi1, q0, cfg.tau), op, cfg.n_steps)
    return max_error(state, grid, cfg.error_vs_exact).e


def _level_config(base, axis, level):
    return base.with_spacing(level) if axis == "space" else base.with_tau(level)


def _safe_final_error(job):
    base, axis, level = job
    try:
        return _final_error(_level_config(base, axis, level)), ""
    except Exception as exc:  # one failed level must not sink the study
        return math.nan, f"{type(exc).__name__}: {exc}"


def convergence_study(base, axis, levels, workers=1):
    """
    Final-time error for each mesh size (``axis="space"``) or time step (``"time"``).

    ``base`` supplies everything else, including ``error_vs_exact``.  The
    order column is ``log(e_prev / e) / log(level_prev / level)`` between
    consecutive rows, i.e. ``log2`` of the error ratio for halving ladders.
    Runs are independent and spread over ``workers`` processes.
    """
    if axis not in ("space", "time"):
        raise ValueError(f"axis must be 'space' or 'time', got {axis!r}")
    if base.error_vs_exact is None:
        raise ValueError("convergence study needs base.error_vs_exact")
    jobs = [(base, axis, v) for v in levels]
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            outcomes = list(pool.map(_safe_final_error, jobs))
    else:
        outcomes = [_safe_final_error(j) for j in jobs]

    rows = []
    for i, (level, (e, err)) in enumerate(zip(levels, outcomes)):
        order = None
        if i > 0:
            prev = rows[-1]
            if prev.e > 0 and e > 0 and math.isfinite(prev.e) and math.isfinite(e):
                order = math.log(prev.e / e) / math.log(prev.level / level)
        rows.append(ConvergenceRow(float(level), float(e), order, err))
    return rows


def energy_study(base, times=ENERGY_TIMES):
    """Energy at t = 0 and at each of ``times`` for one run of ``base``; returns EnergySamples."""
    grid = base.grid
    op = StepOperator(grid, base.tau, zero_nyquist=base.zero_nyquist, dealias=base.dealias)
    psi0, psi1, q0, _ = initial_data(base)
    state = init_state(grid, psi0, psi1, q0, base.tau)
    samples = [energy(state, op)]
    for t in sorted(times):
        state = advance(state, op, round(t / base.tau) - state.step)
        samples.append(energy(state, op))
    return samples


def write_study(path, rows, kind):
    """Save study rows as CSV: ``level,e,order,error`` or ``t,E`` for energy."""
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        if kind == "energy":
            w.writerow(["t", "E"])
            for s in rows:
                w.writerow([repr(s.t), repr(s.E)])
        else:
            w.writerow(["level", "e", "order", "error"])
            for r in rows:
                w.writerow([repr(r.level), repr(r.e), "" if r.order is None else repr(r.order), r.error])


def read_study(path):
    """Rows of a study CSV as dicts of floats (``None`` for empty cells)."""
    with open(path, newline="") as fh:
        rows = list(csv.DictReader(fh))

    def num(v):
        return float(v) if v not in ("", None) else None

    return [{k: (num(v) if k != "error" else v) for k, v in row.items()} for row in rows]


STUDY_FILES = {"space": "table1_space.csv", "time": "table1_time.csv", "energy": "table1_energy.csv"}


def _lookup(rows, key, value):
    for row in rows or []:
        if row[key] is not None and math.isclose(row[key], value, rel_tol=1e-9):
            return row
    return None


def emit_table1(output_dir):
    """
    Write ``table1.txt`` comparing computed study results with the published values.

    Reads whichever study CSVs exist in ``output_dir``; missing entries are
    shown as ``--`` and listed under a ``MISSING`` note.
    """
    output_dir = Path(output_dir)
    studies = {
        k: read_study(output_dir / f) if (output_dir / f).exists() else None
        for k, f in STUDY_FILES.items()
    }
    lines = ["Accuracy test: c = 0.4 soliton on [-24, 104]", ""]
    missing = []

    def block(title, kind, key, value_key, label, fmt):
        lines.append(title)
        lines.append(f"  {label:>10} {'computed':>14} {'reference':>14} {'rel.dev':>10} {'order':>7}")
        for level, ref in REFERENCE[kind].items():
            row = _lookup(studies[kind], key, level)
            if row is None or row[value_key] is None or math.isnan(row[value_key]):
                missing.append(f"{kind}:{level:g}")
                lines.append(f"  {level:>10g} {'--':>14} {fmt(ref):>14} {'--':>10} {'':>7}")
                continue
            val = row[value_key]
            order = row.get("order")
            order_s = f"{order:7.3f}" if order is not None else ""
            lines.append(f"  {level:>10g} {fmt(val):>14} {fmt(ref):>14} {(val - ref) / ref:>10.2e} {order_s:>7}")
        lines.append("")

    block("Space (tau = 0.0001), e(60)", "space", "level", "e", "h", lambda v: f"{v:.4e}")
    block("Time (h = 1/8), e(60)", "time", "level", "e", "tau", lambda v: f"{v:.4e}")
    block("Energy (h = 1/4, tau = 0.02)", "energy", "t", "E", "t", lambda v: f"{v:.8f}")
    if missing:
        lines.append("MISSING: " + ", ".join(missing))
    path = output_dir / "table1.txt"
    path.write_text("\n".join(lines) + "\n")
    return path


def time_ladder(workers=1):
    return convergence_study(accuracy_base(h=0.125), "time", TIME_LEVELS, workers=workers)


def space_ladder(workers=1, tau=1e-4):
    return convergence_study(replace(accuracy_base(), tau=tau), "space", SPACE_LEVELS, workers=workers)


def energy_series():
    return energy_study(accuracy_base(h=0.25, tau=0.02, t_final=200.0))
