"""Batch experiment drivers: single runs, seed ensembles, resolution sweeps.

Every run directory gets a ``records.csv`` and a ``meta.txt`` holding the
fully-resolved scenario, so any output is reproducible from its metadata
alone. Ensemble members and sweep resolutions are independent simulations
and may execute in parallel; ``SSD_THREADS`` caps the worker count
(0 or unset = auto).
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import replace
from pathlib import Path

from . import __version__
from .coupling import CoupledSimulation, run_nonspatial
from .daisyworld import DaisyParams, EXTINCTION_FRACTION
from .gridio import read_grid
from .landscape import LandGrid, refine
from .records import SimulationRecord, write_records
from .scenario import MODE_SPATIAL, Scenario, render_scenario

__all__ = ["run_single", "run_ensemble", "run_sweep", "refined_grid", "worker_count"]


def worker_count() -> int:
    raw = os.environ.get("SSD_THREADS", "0")
    try:
        n = int(raw)
    except ValueError:
        n = 0
    return n if n > 0 else (os.cpu_count() or 1)


def write_meta(scenario: Scenario, out_dir: Path, overrides=()) -> None:
    lines = [
        f"daisysim_version = {__version__}",
        f"scenario_name = {scenario.name}",
        f"mode = {scenario.mode}",
        f"seed = {scenario.seed}",
        f"steps = {scenario.steps}",
        "overrides = " + (" ".join(overrides) if overrides else "none"),
        f"extinction_fraction = {EXTINCTION_FRACTION!r}  # non-spatial daisy cutoff",
        "",
        "[resolved scenario]",
        render_scenario(scenario).rstrip("\n"),
    ]
    (out_dir / "meta.txt").write_text("\n".join(lines) + "\n")


def run_single(scenario: Scenario, out_dir, params: DaisyParams | None = None,
               overrides=(), grid: LandGrid | None = None) -> list[SimulationRecord]:
    """Run one scenario and write records.csv, meta.txt and any snapshots."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    if scenario.mode == MODE_SPATIAL:
        sim = CoupledSimulation(scenario, params, grid=grid)
        records = sim.run(snapshot_dir=out if scenario.snapshots else None)
        resolved = sim.scenario
    else:
        records = run_nonspatial(scenario, params)
        resolved = scenario
    write_records(records, out / "records.csv")
    write_meta(resolved, out, overrides)
    return records


def run_ensemble(scenario: Scenario, n_seeds: int, out_dir,
                 params: DaisyParams | None = None) -> list[tuple[int, list[SimulationRecord]]]:
    """Run seeds 1..n_seeds into per-seed subdirectories plus summary.csv."""
    if n_seeds < 1:
        raise ValueError(f"ensemble needs at least one seed, got {n_seeds}")
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)

    def member(seed: int):
        member_scenario = replace(scenario, seed=seed)
        recs = run_single(member_scenario, out / f"seed_{seed}", params,
                          overrides=(f"seed={seed}",))
        return seed, recs

    with ThreadPoolExecutor(max_workers=min(worker_count(), n_seeds)) as pool:
        results = list(pool.map(member, range(1, n_seeds + 1)))

    lines = ["seed,final_temperature_C,final_area_black_ha,final_area_white_ha,"
             "final_area_fertile_ha,final_area_barren_ha,min_area_white_ha"]
    for seed, recs in results:
        last = recs[-1]
        min_white = min(r.area_white_ha for r in recs)
        lines.append(",".join([
            str(seed), repr(last.temperature_c), repr(last.area_black_ha),
            repr(last.area_white_ha), repr(last.area_fertile_ha),
            repr(last.area_barren_ha), repr(min_white),
        ]))
    (out / "summary.csv").write_text("\n".join(lines) + "\n")
    return results


def refined_grid(base: LandGrid, cell_size_m: float) -> LandGrid:
    """Block-subdivide a coarse base grid down to the requested cell size."""
    k = base.cell_size_m / cell_size_m
    if k < 1 or abs(k - round(k)) > 1e-9:
        raise ValueError(
            f"cell size {cell_size_m} m is not an integer refinement of the "
            f"{base.cell_size_m} m base grid"
        )
    return refine(base, int(round(k)))


def run_sweep(scenario: Scenario, resolutions, out_dir,
              params: DaisyParams | None = None, refine_from=None):
    """Run the scenario at several raster resolutions with one shared seed.

    With ``refine_from`` (path to a grid file) every resolution uses a
    block-subdivision of that base landscape, so all runs share one
    spatial pattern; otherwise each resolution generates its own random
    landscape from the shared seed. A resolution that fails (divisibility,
    refinement mismatch) is reported and skipped; the others still run.

    Returns (results, errors): label -> records, label -> message.
    """
    if scenario.mode != MODE_SPATIAL:
        raise ValueError("sweep requires a spatial scenario")
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    base = read_grid(Path(refine_from).read_text()) if refine_from is not None else None

    def member(res: float):
        label = f"{res:g}"
        member_scenario = replace(scenario, cell_size_m=res, grid_shape=None)
        grid = refined_grid(base, res) if base is not None else None
        recs = run_single(member_scenario, out / f"res_{label}", params,
                          overrides=(f"cell_size_m={label}",), grid=grid)
        return label, recs

    results: dict[str, list[SimulationRecord]] = {}
    errors: dict[str, str] = {}
    with ThreadPoolExecutor(max_workers=min(worker_count(), len(resolutions))) as pool:
        futures = {f"{res:g}": pool.submit(member, res) for res in resolutions}
        for label, future in futures.items():
            try:
                results[label] = future.result()[1]
            except ValueError as exc:
                errors[label] = str(exc)

    if results:
        labels = [f"{res:g}" for res in resolutions if f"{res:g}" in results]
        header = "time," + ",".join(f"temperature_{label}" for label in labels)
        n_rows = min(len(results[label]) for label in labels)
        lines = [header]
        for i in range(n_rows):
            row = [repr(results[labels[0]][i].time)]
            row += [repr(results[label][i].temperature_c) for label in labels]
            lines.append(",".join(row))
        (out / "sweep.csv").write_text("\n".join(lines) + "\n")
    return results, errors
