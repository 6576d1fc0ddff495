"""Synchronized per-step coupling of the temporal model to the raster.

Each step: measure the landscape, inject the per-species growth
multipliers, advance the stock-flow model once, translate the step's flow
magnitudes into whole raster cells (carrying sub-cell remainders), then
snap the stocks to the raster census. The raster is the source of truth:
growth that cannot be placed is dropped, and the snap is the structural
feedback that keeps both sides exactly consistent.
"""

from __future__ import annotations

import math
from dataclasses import replace
from pathlib import Path

import numpy as np

from . import engine
from .daisyworld import (DaisyParams, EXTINCTION_FRACTION, build_nonspatial_model,
                         build_spatial_model)
from .gridio import write_snapshot
from .landscape import (LandCode, LandGrid, adjacency_stats, allocate_decay,
                        allocate_growth, count_cells, generate_landscape,
                        growth_reduction)
from .records import SimulationRecord
from .scenario import MODE_NONSPATIAL, MODE_SPATIAL, Scenario

__all__ = ["CoupledSimulation", "run_nonspatial", "cells_for_areas", "default_shape"]

_SPECIES = (LandCode.BLACK, LandCode.WHITE)
_STOCK_OF = {LandCode.BLACK: "area_black", LandCode.WHITE: "area_white"}
_GROWTH_OF = {LandCode.BLACK: "growth_black", LandCode.WHITE: "growth_white"}
_DECAY_OF = {LandCode.BLACK: "decay_black", LandCode.WHITE: "decay_white"}
_D_OF = {LandCode.BLACK: "D_black", LandCode.WHITE: "D_white"}


def cells_for_areas(areas_ha, cell_area_ha: float) -> dict[LandCode, int]:
    """Convert per-code areas to whole cell counts; rejects non-divisible areas."""
    counts = {}
    for code in LandCode:
        area = areas_ha.get(code, 0.0)
        cells = area / cell_area_ha
        n = round(cells)
        if abs(cells - n) > 1e-9 * max(1.0, abs(cells)):
            lo = math.floor(cells) * cell_area_ha
            hi = math.ceil(cells) * cell_area_ha
            raise ValueError(
                f"area_{code.name.lower()} = {area} ha is not a whole number of "
                f"{cell_area_ha} ha cells; nearest legal areas are {lo!r} and {hi!r}"
            )
        counts[code] = int(n)
    return counts


def default_shape(n_cells: int) -> tuple[int, int]:
    """Most square factorization of the cell count, with ncols >= nrows."""
    r = math.isqrt(n_cells)
    while n_cells % r:
        r -= 1
    return r, n_cells // r


class CoupledSimulation:
    """One spatial run: stock-flow state, raster grid, and their coupling.

    End-of-step invariants, every step: each daisy stock equals its raster
    census times the cell area exactly, the four areas sum to the total
    planet area, the barren census never changes, and each sub-cell
    residual accumulator stays below one cell area in magnitude.
    """

    def __init__(self, scenario: Scenario, params: DaisyParams | None = None,
                 grid: LandGrid | None = None):
        if scenario.mode != MODE_SPATIAL:
            raise ValueError(f"scenario mode is '{scenario.mode}', expected 'spatial'")
        self.params = params or DaisyParams()
        self.rng = np.random.default_rng(scenario.seed)

        if grid is None:
            cell_area = scenario.cell_size_m ** 2 / 10_000.0
            counts = cells_for_areas(scenario.areas_ha, cell_area)
            total_cells = sum(counts.values())
            shape = scenario.grid_shape or default_shape(total_cells)
            if shape[0] * shape[1] != total_cells:
                raise ValueError(
                    f"grid_shape {shape[0]}x{shape[1]} holds {shape[0] * shape[1]} "
                    f"cells but the areas need {total_cells}"
                )
            self.grid = generate_landscape(counts, shape[0], shape[1],
                                           scenario.cell_size_m, self.rng)
        else:
            self.grid = grid.copy()

        # The raster is authoritative: stocks start at census * cell_area.
        ca = self.grid.cell_area_ha
        census_areas = {code: count_cells(self.grid, code) * ca for code in LandCode}
        self.scenario = replace(scenario, areas_ha=census_areas,
                                cell_size_m=self.grid.cell_size_m)
        self.model = build_spatial_model(self.scenario, self.params)

        self.step_index = 0
        self.residual_growth = {s: 0.0 for s in _SPECIES}
        self.residual_decay = {s: 0.0 for s in _SPECIES}
        self._multipliers = self._measure()
        self.state = engine.init_state(self.model, injections={
            _D_OF[s]: self._multipliers[s] for s in _SPECIES
        })

    def _measure(self) -> dict[LandCode, float]:
        nb = self.scenario.neighborhood
        stats = adjacency_stats(self.grid, nb)
        return {s: growth_reduction(stats, s, nb) for s in _SPECIES}

    def _record(self, grown, decayed) -> SimulationRecord:
        get = self.state.values.__getitem__
        return SimulationRecord(
            time=self.state.time,
            luminosity=get("luminosity"),
            temperature_c=get("temperature"),
            area_black_ha=get("area_black"),
            area_white_ha=get("area_white"),
            area_fertile_ha=get("area_fertile"),
            area_barren_ha=get("area_barren"),
            albedo=get("albedo"),
            d_black=self._multipliers[LandCode.BLACK],
            d_white=self._multipliers[LandCode.WHITE],
            grown_black=grown[LandCode.BLACK],
            grown_white=grown[LandCode.WHITE],
            decayed_black=decayed[LandCode.BLACK],
            decayed_white=decayed[LandCode.WHITE],
        )

    def initial_record(self) -> SimulationRecord:
        zero = {s: 0 for s in _SPECIES}
        return self._record(zero, zero)

    def step_once(self) -> SimulationRecord:
        """Advance one synchronized step.

        On a temporal-model error nothing is committed: the injections go
        into a working copy, so state and raster stay bit-identical to the
        last completed step.
        """
        work = engine.SimState(model=self.model, time=self.state.time,
                               values=dict(self.state.values),
                               last_flows=self.state.last_flows)
        for s in _SPECIES:
            engine.inject(work, _D_OF[s], self._multipliers[s])
        new_state = engine.step(self.model, work)
        # Temporal step committed; raster reconciliation cannot fail below.
        self.state = new_state
        self.step_index += 1

        ca = self.grid.cell_area_ha
        dt = self.model.dt
        grown = {}
        decayed = {}
        for s in _SPECIES:
            self.residual_growth[s] += dt * self.state.last_flows[_GROWTH_OF[s]]
            self.residual_decay[s] += dt * self.state.last_flows[_DECAY_OF[s]]
        for s in _SPECIES:
            want = int(self.residual_growth[s] // ca)
            grown[s] = allocate_growth(self.grid, s, want, self.step_index,
                                       self.rng, self.scenario.neighborhood)
            # Whole cells that found no frontier are dropped, not carried;
            # the census snap below is the matching stock correction.
            self.residual_growth[s] -= want * ca
        for s in _SPECIES:
            want = int(self.residual_decay[s] // ca)
            decayed[s] = allocate_decay(self.grid, s, want, self.rng)
            self.residual_decay[s] -= want * ca

        for s in _SPECIES:
            engine.set_stock(self.state, _STOCK_OF[s], count_cells(self.grid, s) * ca)
        engine.refresh(self.state)
        self._multipliers = self._measure()
        return self._record(grown, decayed)

    def run(self, snapshot_dir=None) -> list[SimulationRecord]:
        """Run the scenario's full step count; returns the record stream.

        Snapshots are written at step 0 and every ``scenario.snapshots``
        steps when a directory is given and the scenario enables them.
        """
        every = self.scenario.snapshots
        out = Path(snapshot_dir) if snapshot_dir is not None else None

        def snapshot():
            if out is not None and every and self.step_index % every == 0:
                write_snapshot(self.grid, out / f"map_{self.step_index:05d}.ppm")

        snapshot()
        records = [self.initial_record()]
        for k in range(self.scenario.steps):
            try:
                records.append(self.step_once())
            except engine.SimulationError as exc:
                raise engine.SimulationError(f"step {k + 1}: {exc}") from exc
            snapshot()
        return records


def run_nonspatial(scenario: Scenario, params: DaisyParams | None = None
                   ) -> list[SimulationRecord]:
    """Pure stock-flow baseline run; no raster is involved.

    The growth-multiplier columns report the shared fertile-area fraction
    for comparability with spatial runs. A daisy stock that falls below
    ``EXTINCTION_FRACTION`` of total area snaps to zero and stays there;
    fertile soil, as the closure term, absorbs the snapped remainder.
    """
    if scenario.mode != MODE_NONSPATIAL:
        raise ValueError(f"scenario mode is '{scenario.mode}', expected 'non-spatial'")
    p = params or DaisyParams()
    model = build_nonspatial_model(scenario, p)
    state = engine.init_state(model)
    threshold = EXTINCTION_FRACTION * scenario.total_area_ha

    def record(st) -> SimulationRecord:
        get = st.values.__getitem__
        return SimulationRecord(
            time=st.time, luminosity=get("luminosity"),
            temperature_c=get("temperature"),
            area_black_ha=get("area_black"), area_white_ha=get("area_white"),
            area_fertile_ha=get("area_fertile"), area_barren_ha=get("area_barren"),
            albedo=get("albedo"), d_black=get("D_black"), d_white=get("D_white"),
        )

    records = [record(state)]
    for k in range(scenario.steps):
        try:
            state = engine.step(model, state)
        except engine.SimulationError as exc:
            raise engine.SimulationError(f"step {k + 1}: {exc}") from exc
        snapped = False
        for name in ("area_black", "area_white"):
            if 0.0 < state.values[name] < threshold:
                engine.set_stock(state, name, 0.0)
                snapped = True
        if snapped:
            engine.refresh(state)
        records.append(record(state))
    return records
