"""Raster landscape: land-cover codes, growth timestamps, and the spatial
analysis / allocation rules that couple the raster to the temporal model.

Cells carry one of four cover codes. Daisy cells additionally carry the
step index at which they were vegetated, which drives oldest-first decay.
Barren cells never change. All randomized operations are pure functions of
(grid, arguments, rng state).
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import IntEnum
from typing import Mapping

import numpy as np

__all__ = [
    "LandCode",
    "LandGrid",
    "AdjacencyStats",
    "AGE_NONE",
    "generate_landscape",
    "count_cells",
    "adjacency_stats",
    "growth_reduction",
    "frontier",
    "allocate_growth",
    "allocate_decay",
    "refine",
]

AGE_NONE = -1  # age sentinel for non-daisy cells

OFFSETS_8 = ((-1, -1), (-1, 0), (-1, 1), (0, -1), (0, 1), (1, -1), (1, 0), (1, 1))
OFFSETS_4 = ((-1, 0), (1, 0), (0, -1), (0, 1))


class LandCode(IntEnum):
    FERTILE = 0
    BLACK = 1
    WHITE = 2
    BARREN = 3


DAISY_CODES = (LandCode.BLACK, LandCode.WHITE)


@dataclass
class LandGrid:
    """Rectangular raster of land-cover codes with per-cell growth timestamps."""

    codes: np.ndarray      # int8, shape (nrows, ncols)
    age: np.ndarray        # int32, AGE_NONE where the cell is not a daisy
    cell_size_m: float

    def __post_init__(self):
        self.codes = np.asarray(self.codes, dtype=np.int8)
        self.age = np.asarray(self.age, dtype=np.int32)
        if self.codes.ndim != 2 or self.codes.shape != self.age.shape:
            raise ValueError("codes and age must be 2-D arrays of the same shape")
        if self.cell_size_m <= 0:
            raise ValueError(f"cell_size_m must be positive, got {self.cell_size_m}")

    @property
    def nrows(self) -> int:
        return self.codes.shape[0]

    @property
    def ncols(self) -> int:
        return self.codes.shape[1]

    @property
    def cell_area_ha(self) -> float:
        return self.cell_size_m * self.cell_size_m / 10_000.0

    def copy(self) -> "LandGrid":
        return LandGrid(self.codes.copy(), self.age.copy(), self.cell_size_m)

    def check_consistent(self) -> None:
        """Assert structural invariants (test helper, not a hot-path check)."""
        if not np.isin(self.codes, [c.value for c in LandCode]).all():
            raise AssertionError("grid contains codes outside LandCode")
        daisy = np.isin(self.codes, DAISY_CODES)
        if not (self.age[daisy] >= 0).all():
            raise AssertionError("daisy cell without an age timestamp")
        if not (self.age[~daisy] == AGE_NONE).all():
            raise AssertionError("non-daisy cell carries an age timestamp")


@dataclass(frozen=True)
class AdjacencyStats:
    """Fertile-cell adjacency counts (G) and daisy censuses (C).

    G counts the distinct fertile cells having at least one neighbor of
    the species, i.e. the size of that species' growth frontier.
    """

    g_black: int
    g_white: int
    c_black: int
    c_white: int

    def g(self, species: LandCode) -> int:
        return self.g_black if species == LandCode.BLACK else self.g_white

    def c(self, species: LandCode) -> int:
        return self.c_black if species == LandCode.BLACK else self.c_white


def _offsets(neighborhood: int):
    if neighborhood == 8:
        return OFFSETS_8
    if neighborhood == 4:
        return OFFSETS_4
    raise ValueError(f"neighborhood must be 8 or 4, got {neighborhood}")


def _check_species(species: LandCode) -> None:
    if species not in DAISY_CODES:
        raise ValueError(f"species must be BLACK or WHITE, got {species!r}")


def generate_landscape(counts: Mapping[LandCode, int], nrows: int, ncols: int,
                       cell_size_m: float, seed) -> LandGrid:
    """Scatter exact per-code cell counts uniformly at random over the grid.

    ``seed`` may be an int or an existing numpy Generator. Daisy cells start
    with age 0.
    """
    total = nrows * ncols
    requested = {code: int(counts.get(code, 0)) for code in LandCode}
    if any(n < 0 for n in requested.values()):
        raise ValueError(f"cell counts must be non-negative: {requested}")
    s = sum(requested.values())
    if s != total:
        diff = s - total
        kind = "surplus" if diff > 0 else "deficit"
        raise ValueError(
            f"cell counts sum to {s} but the {nrows}x{ncols} grid has {total} "
            f"cells ({kind} of {abs(diff)})"
        )
    rng = np.random.default_rng(seed)
    flat = np.repeat(
        np.array([c.value for c in LandCode], dtype=np.int8),
        [requested[c] for c in LandCode],
    )
    codes = rng.permutation(flat).reshape(nrows, ncols)
    age = np.where(np.isin(codes, DAISY_CODES), 0, AGE_NONE).astype(np.int32)
    return LandGrid(codes=codes, age=age, cell_size_m=float(cell_size_m))


def count_cells(grid: LandGrid, code: LandCode) -> int:
    """Exact census of one land-cover code."""
    return int(np.count_nonzero(grid.codes == int(code)))


def adjacency_stats(grid: LandGrid, neighborhood: int = 8) -> AdjacencyStats:
    """Scan the raster with a moving window for daisy-to-fertile adjacency.

    For each species, G is the number of distinct fertile cells with at
    least one neighboring cell of that species; C is the species census.
    Edge cells simply have fewer neighbors available.
    """
    offsets = _offsets(neighborhood)
    fertile = grid.codes == LandCode.FERTILE
    g = {}
    c = {}
    for species in DAISY_CODES:
        mask = grid.codes == int(species)
        g[species] = int(np.count_nonzero(fertile & _neighbor_any(mask, offsets)))
        c[species] = int(np.count_nonzero(mask))
    return AdjacencyStats(g_black=g[LandCode.BLACK], g_white=g[LandCode.WHITE],
                          c_black=c[LandCode.BLACK], c_white=c[LandCode.WHITE])


def growth_reduction(stats: AdjacencyStats, species: LandCode,
                     neighborhood: int = 8) -> float:
    """Fraction of the species' potential fertile adjacencies actually present.

    D = G / (neighborhood * C): each daisy cell can in theory border
    ``neighborhood`` fertile cells, also at grid edges (borders act as mild
    growth inhibitors). An extinct species yields 0.
    """
    _check_species(species)
    c = stats.c(species)
    if c == 0:
        return 0.0
    return stats.g(species) / (neighborhood * float(c))


def _neighbor_any(mask: np.ndarray, offsets) -> np.ndarray:
    """Boolean map: cell has at least one True neighbor under the offsets."""
    nr, nc = mask.shape
    out = np.zeros_like(mask, dtype=bool)
    for dr, dc in offsets:
        rs = slice(max(0, -dr), nr - max(0, dr))
        cs = slice(max(0, -dc), nc - max(0, dc))
        ns = slice(max(0, dr), nr - max(0, -dr))
        ms = slice(max(0, dc), nc - max(0, -dc))
        out[rs, cs] |= mask[ns, ms]
    return out


def frontier(grid: LandGrid, species: LandCode, neighborhood: int = 8) -> np.ndarray:
    """All fertile cells adjacent to the species: the only legal growth sites.

    Returns an (n, 2) array of (row, col) coordinates in row-major order.
    """
    _check_species(species)
    species_mask = grid.codes == int(species)
    fertile = grid.codes == LandCode.FERTILE
    candidates = fertile & _neighbor_any(species_mask, _offsets(neighborhood))
    return np.argwhere(candidates)


def allocate_growth(grid: LandGrid, species: LandCode, n_cells: int,
                    step_index: int, rng: np.random.Generator,
                    neighborhood: int = 8) -> int:
    """Vegetate up to ``n_cells`` frontier cells, chosen uniformly without
    replacement from the frontier computed once at entry (no intra-step
    cascading). Returns the realized count; shortfall is not an error.
    """
    _check_species(species)
    if n_cells < 0:
        raise ValueError(f"n_cells must be non-negative, got {n_cells}")
    sites = frontier(grid, species, neighborhood)
    realized = min(int(n_cells), len(sites))
    if realized > 0:
        chosen = sites[rng.choice(len(sites), size=realized, replace=False)]
        rr, cc = chosen[:, 0], chosen[:, 1]
        grid.codes[rr, cc] = int(species)
        grid.age[rr, cc] = step_index
    return realized


def allocate_decay(grid: LandGrid, species: LandCode, n_cells: int,
                   rng: np.random.Generator) -> int:
    """Return up to ``n_cells`` of the species to fertile soil, strictly
    oldest timestamp first, ties broken uniformly at random. Returns the
    realized count.
    """
    _check_species(species)
    if n_cells < 0:
        raise ValueError(f"n_cells must be non-negative, got {n_cells}")
    cells = np.argwhere(grid.codes == int(species))
    realized = min(int(n_cells), len(cells))
    if realized > 0:
        ages = grid.age[cells[:, 0], cells[:, 1]]
        tiebreak = rng.random(len(cells))
        order = np.lexsort((tiebreak, ages))
        victims = cells[order[:realized]]
        rr, cc = victims[:, 0], victims[:, 1]
        grid.codes[rr, cc] = LandCode.FERTILE
        grid.age[rr, cc] = AGE_NONE
    return realized


def refine(grid: LandGrid, k: int) -> LandGrid:
    """Block-subdivide each cell into k x k finer cells of the same cover.

    Preserves the spatial pattern exactly; daisy ages are carried over.
    """
    if k < 1 or int(k) != k:
        raise ValueError(f"refinement factor must be a positive integer, got {k}")
    k = int(k)
    codes = np.repeat(np.repeat(grid.codes, k, axis=0), k, axis=1)
    age = np.repeat(np.repeat(grid.age, k, axis=0), k, axis=1)
    return LandGrid(codes=codes, age=age, cell_size_m=grid.cell_size_m / k)
