#!/usr/bin/env python3
"""Render temperature and land-cover figures from one or more records.csv.

Usage:
    python scripts/plot_results.py out/fig7/records.csv out/fig7_ns/records.csv \
        --labels spatial non-spatial --out fig7.png

Plotting stays out of the simulation core on purpose; everything here is
derived from the CSV files alone.
"""

import argparse
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

import sys

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))
from daisysim.records import read_records  # noqa: E402


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("csv", nargs="+", help="records.csv paths")
    ap.add_argument("--labels", nargs="*", default=None)
    ap.add_argument("--out", default="results.png")
    args = ap.parse_args()

    labels = args.labels or [Path(p).parent.name or p for p in args.csv]
    if len(labels) != len(args.csv):
        ap.error("--labels must match the number of csv files")

    fig, (ax_t, ax_a, ax_l) = plt.subplots(3, 1, figsize=(9, 10), sharex=True)
    for path, label in zip(args.csv, labels):
        recs = read_records(path)
        t = [r.time for r in recs]
        ax_t.plot(t, [r.temperature_c for r in recs], label=label)
        ax_a.plot(t, [r.area_black_ha for r in recs], label=f"{label} black")
        ax_a.plot(t, [r.area_white_ha for r in recs], linestyle="--",
                  label=f"{label} white")
        ax_l.plot(t, [r.luminosity for r in recs], label=label)

    ax_t.set_ylabel("planetary temperature [degC]")
    ax_a.set_ylabel("daisy area [ha]")
    ax_l.set_ylabel("luminosity [-]")
    ax_l.set_xlabel("time step")
    for ax in (ax_t, ax_a, ax_l):
        ax.grid(True, alpha=0.3)
        ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(args.out, dpi=140)
    print(f"figure {args.out}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
