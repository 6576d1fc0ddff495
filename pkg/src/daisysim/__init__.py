"""Spatial stock-and-flow Daisyworld simulator.

A minimal system-dynamics core synchronously coupled to a raster
landscape with bidirectional structural feedback, plus the batch
experiment surface (runs, ensembles, resolution sweeps) and plain-text
persistence formats.
"""

__version__ = "0.1.0"

from .coupling import CoupledSimulation, run_nonspatial
from .daisyworld import (AreaState, DaisyParams, LuminositySchedule,
                         build_nonspatial_model, build_spatial_model,
                         growth_rate, local_temperature, planetary_albedo,
                         planetary_temperature)
from .landscape import (AdjacencyStats, LandCode, LandGrid, adjacency_stats,
                        allocate_decay, allocate_growth, count_cells, frontier,
                        generate_landscape, growth_reduction, refine)
from .records import SimulationRecord, read_records, write_records
from .scenario import Scenario, ScenarioError, parse_scenario, render_scenario

__all__ = [
    "__version__",
    "CoupledSimulation", "run_nonspatial",
    "AreaState", "DaisyParams", "LuminositySchedule",
    "build_nonspatial_model", "build_spatial_model",
    "growth_rate", "local_temperature", "planetary_albedo", "planetary_temperature",
    "AdjacencyStats", "LandCode", "LandGrid", "adjacency_stats",
    "allocate_decay", "allocate_growth", "count_cells", "frontier",
    "generate_landscape", "growth_reduction", "refine",
    "SimulationRecord", "read_records", "write_records",
    "Scenario", "ScenarioError", "parse_scenario", "render_scenario",
]
