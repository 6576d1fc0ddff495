"""Per-step simulation records and their CSV form.

The CSV is the single analysis interface of the artifact. Floats are
rendered with shortest round-trip formatting, so re-reading a file
reproduces the record values exactly and identical runs produce
byte-identical files.
"""

from __future__ import annotations

from dataclasses import dataclass, fields
from pathlib import Path

__all__ = ["SimulationRecord", "CSV_HEADER", "write_records", "read_records"]

CSV_HEADER = ("time,luminosity,temperature_C,area_black_ha,area_white_ha,"
              "area_fertile_ha,area_barren_ha,albedo,D_black,D_white,"
              "grown_black,grown_white,decayed_black,decayed_white")


@dataclass(frozen=True)
class SimulationRecord:
    """One row of per-step outputs; field order matches the CSV columns."""

    time: float
    luminosity: float
    temperature_c: float
    area_black_ha: float
    area_white_ha: float
    area_fertile_ha: float
    area_barren_ha: float
    albedo: float
    d_black: float
    d_white: float
    grown_black: int = 0
    grown_white: int = 0
    decayed_black: int = 0
    decayed_white: int = 0


FIELDS = tuple(f.name for f in fields(SimulationRecord))
COLUMNS = tuple(CSV_HEADER.split(","))
_INT_FIELDS = {"grown_black", "grown_white", "decayed_black", "decayed_white"}


def _format(record: SimulationRecord) -> str:
    parts = []
    for name in FIELDS:
        value = getattr(record, name)
        parts.append(str(int(value)) if name in _INT_FIELDS else repr(float(value)))
    return ",".join(parts)


def write_records(records, destination) -> None:
    """Write records as CSV to a path or text stream."""
    body = "\n".join([CSV_HEADER] + [_format(r) for r in records]) + "\n"
    if isinstance(destination, (str, Path)):
        Path(destination).write_text(body)
    else:
        destination.write(body)


def read_records(source) -> list[SimulationRecord]:
    """Read a records CSV from a path or text stream; validates the header."""
    if isinstance(source, (str, Path)):
        text = Path(source).read_text()
    else:
        text = source.read()
    lines = text.splitlines()
    if not lines or lines[0] != CSV_HEADER:
        raise ValueError(f"unexpected records header: {lines[0] if lines else '(empty)'}")
    records = []
    for lineno, line in enumerate(lines[1:], start=2):
        if not line:
            continue
        cells = line.split(",")
        if len(cells) != len(FIELDS):
            raise ValueError(f"line {lineno}: expected {len(FIELDS)} columns, got {len(cells)}")
        kwargs = {}
        for name, cell in zip(FIELDS, cells):
            kwargs[name] = int(cell) if name in _INT_FIELDS else float(cell)
        records.append(SimulationRecord(**kwargs))
    return records
