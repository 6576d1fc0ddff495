"""Raster exchange formats: ASCII grid text and P3 pixmap snapshots.

The grid format is plain text with a small header, layout-compatible with
common ASCII-grid GIS headers:

    ncols 40
    nrows 25
    cellsize 100.0
    NODATA_value -1
    0 1 2 3 0 ...      (ncols integers per row, nrows rows)

Only cover codes travel through this format; daisy ages are not part of
the exchange and re-read daisy cells start at age 0, as at generation.
Writers are pure functions of their inputs: identical grids produce
byte-identical text.
"""

from __future__ import annotations

from pathlib import Path

import numpy as np

from .landscape import AGE_NONE, DAISY_CODES, LandCode, LandGrid

__all__ = ["GridFormatError", "read_grid", "write_grid", "write_snapshot", "PALETTE"]

NODATA = -1

# Map snapshot palette (artifact convention).
PALETTE = {
    LandCode.FERTILE: (139, 115, 85),
    LandCode.BLACK: (20, 20, 20),
    LandCode.WHITE: (240, 240, 240),
    LandCode.BARREN: (128, 128, 128),
}

_HEADER_KEYS = {"ncols", "nrows", "cellsize", "nodata_value", "xllcorner", "yllcorner"}


class GridFormatError(ValueError):
    """Grid text does not conform to the exchange format."""


def write_grid(grid: LandGrid) -> str:
    """Render a grid as exchange text."""
    lines = [
        f"ncols {grid.ncols}",
        f"nrows {grid.nrows}",
        f"cellsize {grid.cell_size_m!r}",
        f"NODATA_value {NODATA}",
    ]
    for row in grid.codes:
        lines.append(" ".join(str(int(c)) for c in row))
    return "\n".join(lines) + "\n"


def read_grid(text: str) -> LandGrid:
    """Parse exchange text into a grid; re-read daisy cells get age 0."""
    lines = text.splitlines()
    header: dict[str, str] = {}
    body_start = 0
    for i, line in enumerate(lines):
        stripped = line.strip()
        if not stripped:
            continue
        first = stripped.split()[0]
        if first[0].isalpha():
            parts = stripped.split()
            if len(parts) != 2:
                raise GridFormatError(f"line {i + 1}: malformed header line '{stripped}'")
            key = parts[0].lower()
            if key not in _HEADER_KEYS:
                raise GridFormatError(f"line {i + 1}: unknown header key '{parts[0]}'")
            header[key] = parts[1]
        else:
            body_start = i
            break
    else:
        raise GridFormatError("grid text has no body")

    for key in ("ncols", "nrows", "cellsize"):
        if key not in header:
            raise GridFormatError(f"missing header key '{key}'")
    try:
        ncols = int(header["ncols"])
        nrows = int(header["nrows"])
        cellsize = float(header["cellsize"])
    except ValueError as exc:
        raise GridFormatError(f"malformed header value: {exc}") from None
    if nrows < 1 or ncols < 1:
        raise GridFormatError(f"grid dimensions must be positive, got {nrows}x{ncols}")
    if cellsize <= 0:
        raise GridFormatError(f"cellsize must be positive, got {cellsize}")

    tokens = " ".join(lines[body_start:]).split()
    expected = nrows * ncols
    if len(tokens) != expected:
        raise GridFormatError(
            f"body has {len(tokens)} cells but header promises {nrows}x{ncols} = "
            f"{expected} ({'missing' if len(tokens) < expected else 'extra'} "
            f"{abs(len(tokens) - expected)})"
        )
    try:
        values = np.array([int(t) for t in tokens], dtype=np.int64)
    except ValueError as exc:
        raise GridFormatError(f"malformed cell value: {exc}") from None
    legal = np.array([c.value for c in LandCode])
    bad = values[~np.isin(values, legal)]
    if bad.size:
        raise GridFormatError(f"unknown land-cover code {int(bad[0])}")
    codes = values.astype(np.int8).reshape(nrows, ncols)
    age = np.where(np.isin(codes, DAISY_CODES), 0, AGE_NONE).astype(np.int32)
    return LandGrid(codes=codes, age=age, cell_size_m=cellsize)


def write_snapshot(grid: LandGrid, destination) -> None:
    """Write the grid as a P3 portable pixmap with the fixed palette."""
    colors = np.zeros((len(LandCode), 3), dtype=np.int64)
    for code, rgb in PALETTE.items():
        colors[code.value] = rgb
    pixels = colors[grid.codes]
    lines = ["P3", f"{grid.ncols} {grid.nrows}", "255"]
    for row in pixels:
        lines.append(" ".join(str(v) for v in row.reshape(-1)))
    body = "\n".join(lines) + "\n"
    if isinstance(destination, (str, Path)):
        Path(destination).write_text(body)
    else:
        destination.write(body)
