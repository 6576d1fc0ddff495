"""Command-line interface: configure, run, inspect.

Commands:
    run       one simulation -> records.csv (+ snapshots, meta.txt)
    ensemble  seeds 1..K of one scenario -> per-seed dirs + summary.csv
    sweep     one scenario at several raster resolutions -> sweep.csv
    genland   write a random landscape grid file
    compare   column-wise diff of two records.csv files

Standard output is stable and machine-parseable (one fact per line);
diagnostics go to standard error. Exit codes: 0 success, 1 input/parse
error, 2 runtime error, 3 compared files differ.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import __version__
from .engine import ModelError, SimulationError
from .experiments import run_ensemble, run_single, run_sweep
from .gridio import GridFormatError, write_grid
from .landscape import LandCode, count_cells, generate_landscape
from .records import COLUMNS, FIELDS, read_records
from .scenario import (MODE_NONSPATIAL, MODE_SPATIAL, Scenario, ScenarioError,
                       parse_scenario)

__all__ = ["main"]

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_RUNTIME = 2
EXIT_DIFFERENT = 3


def _load_scenario(path: str) -> Scenario:
    p = Path(path)
    return parse_scenario(p.read_text(), name=p.stem)


def _apply_overrides(scenario: Scenario, args) -> tuple[Scenario, tuple[str, ...]]:
    overrides = []
    if getattr(args, "seed", None) is not None:
        scenario = scenario.with_overrides(seed=args.seed)
        overrides.append(f"seed={args.seed}")
    if getattr(args, "mode", None) is not None:
        mode = MODE_SPATIAL if args.mode == "spatial" else MODE_NONSPATIAL
        scenario = scenario.with_overrides(mode=mode)
        overrides.append(f"mode={mode}")
    if getattr(args, "steps", None) is not None:
        scenario = scenario.with_overrides(steps=args.steps)
        overrides.append(f"steps={args.steps}")
    if getattr(args, "cell_size", None) is not None:
        scenario = scenario.with_overrides(cell_size_m=args.cell_size)
        overrides.append(f"cell_size_m={args.cell_size:g}")
    return scenario, tuple(overrides)


def cmd_run(args) -> int:
    scenario, overrides = _apply_overrides(_load_scenario(args.scenario), args)
    records = run_single(scenario, args.out, overrides=overrides)
    print(f"records_csv {Path(args.out) / 'records.csv'}")
    print(f"rows {len(records)}")
    return EXIT_OK


def cmd_ensemble(args) -> int:
    if args.seeds < 1:
        print(f"error: --seeds must be >= 1, got {args.seeds}", file=sys.stderr)
        return EXIT_INPUT
    scenario = _load_scenario(args.scenario)
    results = run_ensemble(scenario, args.seeds, args.out)
    for seed, _ in results:
        print(f"seed {seed} dir {Path(args.out) / f'seed_{seed}'}")
    print(f"summary_csv {Path(args.out) / 'summary.csv'}")
    return EXIT_OK


def cmd_sweep(args) -> int:
    scenario = _load_scenario(args.scenario)
    try:
        resolutions = [float(r) for r in args.resolutions.split(",") if r.strip()]
    except ValueError:
        print(f"error: malformed --resolutions '{args.resolutions}'", file=sys.stderr)
        return EXIT_INPUT
    if not resolutions:
        print("error: --resolutions is empty", file=sys.stderr)
        return EXIT_INPUT
    results, errors = run_sweep(scenario, resolutions, args.out,
                                refine_from=args.refine_from)
    for res in resolutions:
        label = f"{res:g}"
        if label in results:
            print(f"resolution {label} ok")
        else:
            print(f"resolution {label} error {errors[label]}")
    if results:
        print(f"sweep_csv {Path(args.out) / 'sweep.csv'}")
        return EXIT_OK
    return EXIT_INPUT


def _parse_counts(text: str) -> dict[LandCode, int]:
    by_name = {c.name.lower(): c for c in LandCode}
    counts = {}
    for item in text.split(","):
        if not item.strip():
            continue
        name, _, value = item.partition("=")
        code = by_name.get(name.strip().lower())
        if code is None or not value.strip():
            raise ValueError(f"malformed --counts item '{item}' "
                             f"(expected e.g. black=100)")
        counts[code] = int(value)
    return counts


def cmd_genland(args) -> int:
    counts = _parse_counts(args.counts)
    rows, _, cols = args.shape.lower().partition("x")
    nrows, ncols = int(rows), int(cols)
    grid = generate_landscape(counts, nrows, ncols, args.cellsize, args.seed)
    out = Path(args.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    out.write_text(write_grid(grid))
    for code in LandCode:
        print(f"{code.name.lower()} {count_cells(grid, code)}")
    print(f"grid {out}")
    return EXIT_OK


def cmd_compare(args) -> int:
    try:
        a = read_records(args.a)
        b = read_records(args.b)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    print(f"rows {len(a)} {len(b)}")
    n = min(len(a), len(b))
    identical = len(a) == len(b)
    for column, name in zip(COLUMNS, FIELDS):
        diff = max((abs(getattr(a[i], name) - getattr(b[i], name)) for i in range(n)),
                   default=0.0)
        if diff != 0.0:
            identical = False
        print(f"maxdiff {column} {float(diff)!r}")
    if a and b:
        for column, name in zip(COLUMNS, FIELDS):
            va, vb = getattr(a[-1], name), getattr(b[-1], name)
            print(f"final {column} {float(va)!r} {float(vb)!r} {float(vb - va)!r}")
    return EXIT_OK if identical else EXIT_DIFFERENT


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="daisysim",
        description="Spatial stock-and-flow Daisyworld simulator",
    )
    parser.add_argument("--version", action="version", version=f"daisysim {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    run_p = sub.add_parser("run", help="run one scenario")
    run_p.add_argument("--scenario", required=True)
    run_p.add_argument("--out", required=True)
    run_p.add_argument("--seed", type=int)
    run_p.add_argument("--mode", choices=["spatial", "nonspatial"])
    run_p.add_argument("--steps", type=int)
    run_p.add_argument("--cell-size", dest="cell_size", type=float)
    run_p.set_defaults(func=cmd_run)

    ens_p = sub.add_parser("ensemble", help="run seeds 1..K of one scenario")
    ens_p.add_argument("--scenario", required=True)
    ens_p.add_argument("--seeds", type=int, required=True)
    ens_p.add_argument("--out", required=True)
    ens_p.set_defaults(func=cmd_ensemble)

    sweep_p = sub.add_parser("sweep", help="run one scenario at several resolutions")
    sweep_p.add_argument("--scenario", required=True)
    sweep_p.add_argument("--resolutions", required=True,
                         help="comma-separated cell sizes in meters, e.g. 100,50,25")
    sweep_p.add_argument("--out", required=True)
    sweep_p.add_argument("--refine-from", dest="refine_from",
                         help="grid file to block-subdivide instead of regenerating")
    sweep_p.set_defaults(func=cmd_sweep)

    gen_p = sub.add_parser("genland", help="write a random landscape grid file")
    gen_p.add_argument("--counts", required=True,
                       help="per-code cell counts, e.g. fertile=500,black=100,"
                            "white=100,barren=300")
    gen_p.add_argument("--shape", required=True, help="rows x cols, e.g. 25x40")
    gen_p.add_argument("--cellsize", type=float, required=True)
    gen_p.add_argument("--seed", type=int, default=1)
    gen_p.add_argument("--out", required=True)
    gen_p.set_defaults(func=cmd_genland)

    cmp_p = sub.add_parser("compare", help="diff two records.csv files")
    cmp_p.add_argument("--a", required=True)
    cmp_p.add_argument("--b", required=True)
    cmp_p.set_defaults(func=cmd_compare)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ScenarioError, GridFormatError, ModelError, FileNotFoundError,
            IsADirectoryError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except SimulationError as exc:
        print(f"runtime error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME
    except OSError as exc:
        print(f"runtime error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
