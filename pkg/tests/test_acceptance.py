"""
End-to-end acceptance checks, one test per criterion.

The heavy runs go through the named presets, so these tests also exercise the
files the command-line interface produces.  A PASS/FAIL line per criterion is
printed in the terminal summary (see conftest.py).
"""

import csv
import json
import math

import numpy as np
import pytest

from ckg.grid import GridSpec, forward_dft
from ckg.integrator import StepOperator, advance, psi_step
from ckg.presets import run_preset
from ckg.solitons import SolitonSpec, soliton_residual
from ckg.state import NonlinearTerms, SimState, init_state
from ckg.studies import REFERENCE, read_study

THRESHOLD = 0.01  # 1% of peak amplitude / of component energy


def acceptance(number, title):
    return pytest.mark.acceptance(number, title)


def read_csv(path):
    with open(path, newline="") as fh:
        return [{k: float(v) for k, v in row.items()} for row in csv.DictReader(fh)]


def note(record_property, text):
    record_property("measured", text)
    print(text)


@pytest.fixture(scope="module")
def preset_dir(tmp_path_factory):
    """Run a preset once per module and hand back its output directory."""
    cache = {}

    def get(name):
        if name not in cache:
            out = tmp_path_factory.mktemp(name)
            cache[name] = (run_preset(name, out), out)
        return cache[name]

    return get


def rel(a, b):
    return abs(a - b) / abs(b)


@acceptance(1, "temporal block of the accuracy table (h = 1/8)")
def test_criterion_1_temporal_convergence(preset_dir, record_property):
    code, out = preset_dir("table1-time")
    assert code == 0
    rows = read_study(out / "table1_time.csv")
    errors = {r["level"]: r["e"] for r in rows}
    orders = [r["order"] for r in rows[1:]]
    note(record_property, "e(60) = " + ", ".join(f"{errors[t]:.4e}" for t in REFERENCE["time"])
         + "; orders = " + ", ".join(f"{p:.3f}" for p in orders))
    for tau, ref in REFERENCE["time"].items():
        assert rel(errors[tau], ref) < 0.10, f"tau={tau}: {errors[tau]:.4e} vs {ref:.4e}"
    for p in orders:
        assert 1.8 <= p <= 2.2


@pytest.mark.slow
@acceptance(2, "spatial block of the accuracy table (tau = 1e-4)")
def test_criterion_2_spatial_convergence(preset_dir, record_property):
    code, out = preset_dir("table1-space")
    assert code == 0
    rows = read_study(out / "table1_space.csv")
    errors = [r["e"] for r in rows]
    note(record_property, "e(60) = " + ", ".join(f"h={r['level']:g}: {r['e']:.3e}" for r in rows))
    assert rel(errors[0], REFERENCE["space"][0.5]) < 0.10
    assert 1e-2 < errors[0] < 1.0
    assert errors[-1] <= 1e-7
    assert all(b <= a for a, b in zip(errors, errors[1:]))


@acceptance(3, "energy block of the accuracy table (h = 1/4, tau = 0.02)")
def test_criterion_3_energy(preset_dir, record_property):
    code, out = preset_dir("table1-energy")
    assert code == 0
    samples = read_study(out / "table1_energy.csv")
    E0 = samples[0]["E"]
    assert samples[0]["t"] == 0.0
    later = {s["t"]: s["E"] for s in samples[1:]}
    drift = max(abs(E - E0) for E in later.values()) / E0
    note(record_property, "E = " + ", ".join(f"{later[t]:.8f}" for t in REFERENCE["energy"])
         + f"; drift = {drift:.2e}")
    for t in REFERENCE["energy"]:
        assert abs(later[t] - 0.6789005) <= 1e-6
    assert drift < 1e-6


@acceptance(4, "50 dB noisy run completes to t = 200 without blow-up")
def test_criterion_4_noise_stability(preset_dir, record_property):
    code, out = preset_dir("fig1-noise")
    manifest = json.loads((out / "noisy" / "manifest.json").read_text())
    assert manifest["status"] == "completed"
    assert manifest["steps"] == 10000
    assert code == 0
    rows = read_csv(out / "noise_deviation.csv")
    assert [r["t"] for r in rows] == [0.0, 50.0, 100.0, 150.0, 200.0]
    ratios = [r["ratio"] for r in rows]
    # the deviation-to-noise ratio is recorded, not asserted
    note(record_property, "max|dpsi_1|/sigma = " + ", ".join(f"{q:.1f}" for q in ratios)
         + f"; 10x bound met at {sum(q < 10 for q in ratios)}/{len(ratios)} snapshots")
    assert all(math.isfinite(q) for q in ratios)


@acceptance(5, "transform and recurrence agree with brute-force oracles")
def test_criterion_5_oracles(record_property):
    rng = np.random.default_rng(5)
    worst_dft = 0.0
    for M in (4, 8, 16, 64):
        grid = GridSpec(-24.0, 104.0, M)
        v = rng.standard_normal(M)
        c = forward_dft(v, grid)
        x = grid.x
        for j in range(M):
            l = j if j < M // 2 else j - M
            mu = 2 * math.pi * l / grid.length
            ref = sum(v[k] * complex(math.cos(mu * (x[k] - grid.a)), -math.sin(mu * (x[k] - grid.a))) for k in range(M)) / M
            worst_dft = max(worst_dft, abs(c[j] - ref))

    grid = GridSpec(-24.0, 104.0, 256)
    tau = 0.02
    op = StepOperator(grid, tau)
    prev = forward_dft(rng.standard_normal((2, grid.M)), grid)
    curr = forward_dft(rng.standard_normal((2, grid.M)), grid)
    f = rng.standard_normal((2, grid.M))
    state = SimState(curr, np.zeros(grid.M), tau, psi_prev=prev, step=1)
    got = psi_step(state, NonlinearTerms(f, np.zeros(grid.M)), op)
    f_hat = forward_dft(f, grid)
    worst_step = 0.0
    for k in range(2):
        for j in range(grid.M):
            l = j if j < grid.M // 2 else j - grid.M
            lam = math.sqrt((2 * math.pi * l / grid.length) ** 2 + 1)
            ref = -prev[k, j] + 2 * math.cos(lam * tau) * curr[k, j] + tau * math.sin(lam * tau) / lam * f_hat[k, j]
            worst_step = max(worst_step, abs(got[k, j] - ref))
    note(record_property, f"dft {worst_dft:.1e}, psi_step {worst_step:.1e}")
    assert worst_dft < 1e-12
    assert worst_step < 1e-13


@acceptance(6, "exact one-soliton satisfies the discretised equations")
def test_criterion_6_soliton_residual(record_property):
    grid = GridSpec(-64.0, 64.0, 1024)
    r = soliton_residual(grid, SolitonSpec(0.4))
    control = soliton_residual(grid, SolitonSpec(0.4), speed=0.41)
    note(record_property, f"residual {r:.1e}, wrong-speed control {control:.1e}")
    assert r < 1e-8
    assert control > 1e-3


@acceptance(7, "free single-mode evolution is exact over 1000 steps")
def test_criterion_7_linear_exactness(record_property):
    grid = GridSpec(-24.0, 104.0, 512)
    tau = 0.02
    op = StepOperator(grid, tau, linear=True)
    worst = 0.0
    for l in (0, 1, 5, 40, 255):
        mu = 2 * math.pi * l / grid.length
        lam = math.sqrt(mu * mu + 1)
        profile = np.cos(mu * (grid.x - grid.a))
        state = init_state(grid, profile[None], np.zeros((1, grid.M)), np.zeros(grid.M), tau)
        out = advance(state, op, 1000)
        worst = max(worst, float(np.abs(out.psi_phys[0] - math.cos(lam * 1000 * tau) * profile).max()))
    note(record_property, f"max deviation {worst:.1e}")
    assert worst < 1e-10


@acceptance(8, "collision presets: clean passage, visible emission, new fronts")
def test_criterion_8_collisions(preset_dir, record_property):
    results = {}
    for name in ("fig2", "fig3", "fig4"):
        code, out = preset_dir(name)
        assert code == 0, name
        results[name] = {r["t"]: r for r in read_csv(out / "collision_summary.csv")}

    # the solitons meet around t = 8 / 0.425 ~ 19 (x0 = 8) and at once for x0 = 1
    fig2_after = [r["radiation_psi_1"] for t, r in results["fig2"].items() if t >= 30]
    fig3_after = [r["radiation_psi_1"] for t, r in results["fig3"].items() if t >= 10]
    fig4 = results["fig4"]
    note(record_property,
         f"fig2 radiation {max(fig2_after):.4f}; fig3 radiation {min(fig3_after):.4f}-{max(fig3_after):.4f}; "
         f"fig4 psi_2 left front {fig4[0.0]['left_front_psi_2']:.1e} -> {fig4[200.0]['left_front_psi_2']:.3f}, "
         f"psi_3 right front {fig4[0.0]['right_front_psi_3']:.1e} -> {fig4[200.0]['right_front_psi_3']:.3f}")

    assert max(fig2_after) < THRESHOLD
    assert max(fig3_after) > THRESHOLD
    assert fig4[0.0]["left_front_psi_2"] < THRESHOLD
    assert fig4[0.0]["right_front_psi_3"] < THRESHOLD
    assert fig4[200.0]["left_front_psi_2"] > THRESHOLD
    assert fig4[200.0]["right_front_psi_3"] > THRESHOLD
