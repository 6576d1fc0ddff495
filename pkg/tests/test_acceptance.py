"""Figure-level acceptance suite.

Each test checks one numbered acceptance criterion at its stated tolerance
and prints one PASS/FAIL line (run with ``pytest tests/test_acceptance.py
-v -s`` to see every line). Criteria 1-5, 9 and 10 pass.

Criteria 6, 7 and 8 encode published qualitative claims about the stress,
ramp and resolution experiments that the implemented equations do not
reproduce; those tests assert the claims as stated and fail, printing the
measured behavior. The analysis lives outside the package, in the project
notes; the short version is in the README and in comments below. Do not
weaken these assertions to force them green.
"""

import math
import time
from pathlib import Path

import numpy as np
import pytest

from daisysim import engine
from daisysim.cli import main as cli_main
from daisysim.coupling import CoupledSimulation, run_nonspatial
from daisysim.daisyworld import (DaisyParams, EXTINCTION_FRACTION,
                                 build_nonspatial_model, build_spatial_model,
                                 growth_rate, planetary_albedo,
                                 planetary_temperature, AreaState)
from daisysim.landscape import LandCode, count_cells, generate_landscape, refine
from daisysim.scenario import parse_scenario
from oracles import brute_force_stats, grid_from_codes
from daisysim.landscape import adjacency_stats, growth_reduction

SCENARIOS = Path(__file__).resolve().parent.parent / "scenarios"
P = DaisyParams()

# Frozen from a 50-digit high-precision evaluation of the temperature law.
T_L1_A05 = 26.869946959343709
T_L09_A05 = 19.074451778755800

SEEDS = (1, 2, 3, 4, 5)


def report(number: int, name: str, ok: bool, detail: str = "") -> bool:
    status = "PASS" if ok else "FAIL"
    print(f"ACCEPTANCE {number} ({name}): {status}  {detail}".rstrip())
    return ok


def load(name: str, **overrides):
    scn = parse_scenario((SCENARIOS / name).read_text(), name=Path(name).stem)
    return scn.with_overrides(**overrides) if overrides else scn


def spatial_runs(scenario, seeds=SEEDS):
    return {s: CoupledSimulation(scenario.with_overrides(seed=s)).run() for s in seeds}


def test_criterion_1_equation_spot_checks():
    t0 = time.perf_counter()
    temp_1 = planetary_temperature(1.0, 0.5, P)
    temp_09 = planetary_temperature(0.9, 0.5, P)
    ok = abs(temp_1 - T_L1_A05) < 0.1 and abs(temp_1 - 26.9) < 0.1
    ok &= abs(temp_09 - T_L09_A05) < 0.1 and abs(temp_09 - 19.1) < 0.1

    root = math.sqrt(1.0 / P.growth_coeff)
    lo, hi = 22.5, 200.0
    for _ in range(200):  # bisection oracle for the upper zero of the parabola
        mid = 0.5 * (lo + hi)
        lo, hi = (mid, hi) if growth_rate(mid, P) > 0 else (lo, mid)
    ok &= abs(lo - (22.5 + root)) < 1e-9
    ok &= abs(growth_rate(22.5 - root, P)) < 1e-9
    ok &= abs(growth_rate(22.5 + root, P)) < 1e-9

    albedo = planetary_albedo(AreaState(0.1, 0.1, 0.5, 0.3), P)
    ok &= albedo == 0.5
    elapsed = time.perf_counter() - t0
    ok &= elapsed < 1.0
    assert report(1, "equation spot checks", ok,
                  f"T(1,.5)={temp_1:.6f} T(.9,.5)={temp_09:.6f} roots=22.5+-{root:.9f} "
                  f"albedo0={albedo} elapsed={elapsed:.3f}s")


def test_criterion_2_conservation_and_consistency():
    t0 = time.perf_counter()
    scn = load("fig7.scn")
    ok = True
    for seed in SEEDS:
        sim = CoupledSimulation(scn.with_overrides(seed=seed))
        ca = sim.grid.cell_area_ha
        barren0 = count_cells(sim.grid, LandCode.BARREN)
        for _ in range(scn.steps):
            rec = sim.step_once()
            total = (rec.area_black_ha + rec.area_white_ha
                     + rec.area_fertile_ha + rec.area_barren_ha)
            ok &= total == 1000.0
            ok &= rec.area_black_ha == count_cells(sim.grid, LandCode.BLACK) * ca
            ok &= rec.area_white_ha == count_cells(sim.grid, LandCode.WHITE) * ca
            ok &= rec.area_fertile_ha == count_cells(sim.grid, LandCode.FERTILE) * ca
            ok &= count_cells(sim.grid, LandCode.BARREN) == barren0
    elapsed = time.perf_counter() - t0
    ok &= elapsed < 10.0
    assert report(2, "conservation & consistency", ok,
                  f"5 seeds x 100 steps, exact equality, elapsed={elapsed:.2f}s")


def test_criterion_3_adjacency_oracle():
    t0 = time.perf_counter()
    rng = np.random.default_rng(2024)
    ok = True
    for _ in range(200):
        nr, nc = rng.integers(3, 21, size=2)
        codes = rng.integers(0, 4, size=(int(nr), int(nc))).astype(np.int8)
        grid = grid_from_codes(codes)
        fast = adjacency_stats(grid)
        slow = brute_force_stats(grid)
        ok &= fast == slow
        for species in (LandCode.BLACK, LandCode.WHITE):
            d_fast = growth_reduction(fast, species)
            c = slow.c(species)
            d_slow = 0.0 if c == 0 else slow.g(species) / (8.0 * c)
            ok &= d_fast == d_slow
    elapsed = time.perf_counter() - t0
    ok &= elapsed < 5.0
    assert report(3, "adjacency oracle", ok,
                  f"200 random grids, exact G/C equality, elapsed={elapsed:.2f}s")


def test_criterion_4_structural_equivalence():
    ns_scn = load("fig7.scn", mode="non-spatial")
    sp_scn = load("fig7.scn")
    ns_model = build_nonspatial_model(ns_scn, P)
    ns = engine.init_state(ns_model)
    sp_model = build_spatial_model(sp_scn, P)
    sp = engine.init_state(sp_model, injections={
        "D_black": engine.get_value(ns, "D_black"),
        "D_white": engine.get_value(ns, "D_white"),
    })
    worst = 0.0
    for _ in range(100):
        engine.inject(sp, "D_black", engine.get_value(ns, "D_black"))
        engine.inject(sp, "D_white", engine.get_value(ns, "D_white"))
        ns = engine.step(ns_model, ns)
        sp = engine.step(sp_model, sp)
        worst = max(worst,
                    abs(engine.get_value(sp, "area_black") - engine.get_value(ns, "area_black")),
                    abs(engine.get_value(sp, "area_white") - engine.get_value(ns, "area_white")))
    ok = worst <= 1e-12
    assert report(4, "structural equivalence with pinned multipliers", ok,
                  f"max stock deviation over 100 steps = {worst!r}")


def test_criterion_5_disturbance_contrast():
    t0 = time.perf_counter()
    ns = run_nonspatial(load("fig7.scn", mode="non-spatial"))
    pre_drop = [r.temperature_c for r in ns if 45.0 <= r.time < 50.0]
    pre_mean = sum(pre_drop) / len(pre_drop)
    ns_final = ns[100].temperature_c
    gap = abs(ns_final - pre_mean)
    ok_a = gap <= 2.0

    runs = spatial_runs(load("fig7.scn"))
    finals = {s: recs[100].temperature_c for s, recs in runs.items()}
    ok_b = all(t < ns_final for t in finals.values())
    elapsed = time.perf_counter() - t0
    ok = ok_a and ok_b and elapsed < 30.0
    finals_str = " ".join(f"s{s}={t:.2f}" for s, t in finals.items())
    assert report(5, "disturbance contrast", ok,
                  f"ns: pre-drop mean={pre_mean:.3f} T(100)={ns_final:.3f} gap={gap:.3f}; "
                  f"spatial T(100): {finals_str}; elapsed={elapsed:.1f}s")


def test_criterion_6_stress_extinction_contrast():
    # Expected contrast: the well-mixed run loses its white daisies entirely
    # while most spatial runs keep a remnant. Measured behavior of these
    # equations is the opposite coupling: under the 0.8 drop the well-mixed
    # white stock bottoms out near 2.6 ha (26x above the extinction cutoff)
    # and recovers, while cell quantization extinguishes the spatial
    # remnants; under the 0.9 drop white daisies are never endangered.
    t0 = time.perf_counter()
    details = []
    any_variant_ok = False
    threshold = EXTINCTION_FRACTION * 1000.0
    for fname in ("fig8_drop08.scn", "fig8_drop09.scn"):
        ns = run_nonspatial(load(fname, mode="non-spatial"))
        min_white = min(r.area_white_ha for r in ns)
        ns_extinct = any(r.area_white_ha <= threshold for r in ns)
        alive = sum(
            1 for recs in spatial_runs(load(fname)).values()
            if recs[100].area_white_ha > 0.0
        )
        any_variant_ok |= ns_extinct and alive >= 3
        details.append(f"{fname}: ns_min_white={min_white:.3f}ha "
                       f"ns_extinct={ns_extinct} spatial_alive={alive}/5")
    elapsed = time.perf_counter() - t0
    ok = any_variant_ok and elapsed < 30.0
    assert report(6, "stress extinction contrast", ok,
                  "; ".join(details) + f"; elapsed={elapsed:.1f}s")


def test_criterion_7_ramp_contrast():
    # Expected: the well-mixed run cools below its t=50 temperature at some
    # point during the ramp. Measured: its temperature tracks the forcing
    # upward for the whole window (minimum 0.15 degC above the t=50 value);
    # the cheaper-adaptation cooling only appears after the window, once
    # the land cover catches up. The spatial half behaves as expected.
    t0 = time.perf_counter()
    ns = run_nonspatial(load("fig9.scn", mode="non-spatial"))
    t50 = ns[50].temperature_c
    window = [r.temperature_c for r in ns if r.time > 50.0]
    ns_dip = min(window) < t50

    runs = spatial_runs(load("fig9.scn"))
    sp_ok = all(recs[100].temperature_c > recs[50].temperature_c
                for recs in runs.values())
    elapsed = time.perf_counter() - t0
    ok = ns_dip and sp_ok and elapsed < 30.0
    assert report(7, "ramp contrast", ok,
                  f"ns: T(50)={t50:.3f} window_min={min(window):.3f} dip={ns_dip}; "
                  f"spatial warming in 5/5={sp_ok}; elapsed={elapsed:.1f}s")


def test_criterion_8_resolution_trend():
    # Expected: refining the raster weakens post-drop warming, so the mean
    # t=90..100 temperature should be non-increasing at 100 -> 50 -> 25 m.
    # Measured: the initial refinement penalty on the growth multiplier
    # (which this suite verifies at t=0) does not persist: the 30%-per-step
    # decay churn re-mixes the landscape within a few steps, and coarser
    # cells suffer harsher allocation quantization, so fine grids end the
    # run slightly warmer with larger daisy populations.
    t0 = time.perf_counter()
    scn = load("fig7.scn")
    counts = {LandCode.BLACK: 100, LandCode.WHITE: 100,
              LandCode.FERTILE: 500, LandCode.BARREN: 300}
    votes = 0
    lines = []
    for seed in SEEDS:
        base = generate_landscape(counts, 25, 40, 100.0, seed)
        means = {}
        for res, k in ((100.0, 1), (50.0, 2), (25.0, 4), (12.5, 8)):
            grid = refine(base, k)
            sim = CoupledSimulation(scn.with_overrides(seed=seed, cell_size_m=res),
                                    grid=grid)
            recs = sim.run()
            means[res] = sum(r.temperature_c for r in recs
                             if 90.0 <= r.time <= 100.0) / 11.0
        monotone = means[100.0] >= means[50.0] >= means[25.0]
        votes += monotone
        lines.append(f"s{seed}:" + "/".join(f"{means[r]:.2f}" for r in (100.0, 50.0, 25.0, 12.5)))
    elapsed = time.perf_counter() - t0
    ok = votes >= 4 and elapsed < 300.0
    assert report(8, "resolution trend", ok,
                  f"votes={votes}/5 means(100/50/25/12.5m) " + " ".join(lines)
                  + f"; elapsed={elapsed:.1f}s")


def test_criterion_9_determinism(tmp_path):
    outs = []
    for name in ("first", "second"):
        out = tmp_path / name
        code = cli_main(["run", "--scenario", str(SCENARIOS / "fig7.scn"),
                         "--seed", "1", "--out", str(out)])
        assert code == 0
        outs.append(out)
    a, b = outs
    ok = (a / "records.csv").read_bytes() == (b / "records.csv").read_bytes()
    snaps_a = sorted(p.name for p in a.glob("*.ppm"))
    snaps_b = sorted(p.name for p in b.glob("*.ppm"))
    ok &= snaps_a == snaps_b and len(snaps_a) == 11
    for name in snaps_a:
        ok &= (a / name).read_bytes() == (b / name).read_bytes()
    assert report(9, "determinism", ok,
                  f"records.csv byte-identical, {len(snaps_a)} snapshots byte-identical")


def test_criterion_10_performance():
    scn = load("fig7.scn", snapshots=0)
    t0 = time.perf_counter()
    CoupledSimulation(scn).run()
    coarse = time.perf_counter() - t0

    counts = {LandCode.BLACK: 100, LandCode.WHITE: 100,
              LandCode.FERTILE: 500, LandCode.BARREN: 300}
    base = generate_landscape(counts, 25, 40, 100.0, 1)
    fine_grid = refine(base, 8)  # 200x320 cells at 12.5 m
    t0 = time.perf_counter()
    CoupledSimulation(scn.with_overrides(cell_size_m=12.5), grid=fine_grid).run()
    fine = time.perf_counter() - t0
    ok = coarse < 1.0 and fine < 60.0
    assert report(10, "performance budget", ok,
                  f"100m run {coarse:.3f}s (<1s), 12.5m run {fine:.2f}s (<60s)")
