"""Daisyworld physics and the stock-and-flow wiring of both model variants.

The planet carries four cover types (fertile soil, black daisies, white
daisies, barren land). Albedo is the area-weighted mean over the four
types; surface temperature follows Stefan-Boltzmann; daisies grow as a
parabola of their local temperature and die at a fixed fractional rate.

Two variants share the wiring and differ only in the growth multiplier:
the non-spatial baseline uses the global fertile-area fraction, the
spatial variant reads per-species multipliers injected from the raster
analysis between steps.
"""

from __future__ import annotations

from dataclasses import dataclass

from .engine import StockFlowModel, aux, build_model, const, exogenous, flow, stock
from .landscape import LandCode

__all__ = [
    "DaisyParams",
    "AreaState",
    "LuminositySchedule",
    "EXTINCTION_FRACTION",
    "planetary_albedo",
    "planetary_temperature",
    "local_temperature",
    "growth_rate",
    "build_nonspatial_model",
    "build_spatial_model",
]

# Non-spatial runs snap a daisy stock to zero once it falls below this
# fraction of total planet area; exponential decay alone never reaches 0.
EXTINCTION_FRACTION = 1e-4


@dataclass(frozen=True)
class DaisyParams:
    """Physical constants of the model."""

    albedo_fertile: float = 0.5
    albedo_black: float = 0.25
    albedo_white: float = 0.75
    albedo_barren: float = 0.5
    solar_flux: float = 917.0          # W m^-2
    stefan_boltzmann: float = 5.67032e-8
    q_prime: float = 20.0              # degC local-temperature coupling
    decay_rate: float = 0.3            # per step
    growth_optimum: float = 22.5       # degC
    growth_coeff: float = 0.003265


@dataclass(frozen=True)
class AreaState:
    """Cover fractions of total planet area; fertile closes the sum to 1."""

    frac_black: float
    frac_white: float
    frac_fertile: float
    frac_barren: float

    @classmethod
    def closing(cls, frac_black: float, frac_white: float,
                frac_barren: float) -> "AreaState":
        fertile = 1.0 - frac_black - frac_white - frac_barren
        return cls(frac_black, frac_white, fertile, frac_barren)


@dataclass(frozen=True)
class LuminositySchedule:
    """Piecewise solar luminosity: constant, one-time step, or linear ramp."""

    kind: str                    # "constant" | "step" | "ramp"
    l0: float
    l1: float | None = None
    t_change: float | None = None
    t_start: float | None = None
    t_end: float | None = None

    def __post_init__(self):
        if self.kind not in ("constant", "step", "ramp"):
            raise ValueError(f"unknown luminosity kind '{self.kind}'")
        if self.l0 < 0 or (self.l1 is not None and self.l1 < 0):
            raise ValueError("luminosity must be non-negative")
        if self.kind == "step":
            if self.l1 is None or self.t_change is None:
                raise ValueError("step schedule needs L1 and t_change")
        if self.kind == "ramp":
            if self.l1 is None or self.t_start is None or self.t_end is None:
                raise ValueError("ramp schedule needs L1, t_start and t_end")
            if self.t_end <= self.t_start:
                raise ValueError(
                    f"ramp needs t_end > t_start, got {self.t_start}..{self.t_end}"
                )

    def value(self, t: float) -> float:
        if self.kind == "constant":
            return self.l0
        if self.kind == "step":
            return self.l0 if t < self.t_change else self.l1
        if t <= self.t_start:
            return self.l0
        if t >= self.t_end:
            return self.l1
        frac = (t - self.t_start) / (self.t_end - self.t_start)
        return self.l0 + (self.l1 - self.l0) * frac


def planetary_albedo(areas: AreaState, p: DaisyParams) -> float:
    """Area-weighted mean albedo over the four cover types."""
    return (areas.frac_fertile * p.albedo_fertile
            + areas.frac_black * p.albedo_black
            + areas.frac_white * p.albedo_white
            + areas.frac_barren * p.albedo_barren)


def planetary_temperature(luminosity: float, albedo: float, p: DaisyParams) -> float:
    """Planar-surface Stefan-Boltzmann temperature in degC."""
    return (p.solar_flux * luminosity * (1.0 - albedo) / p.stefan_boltzmann) ** 0.25 - 273.0


def local_temperature(albedo: float, albedo_species: float, t_planet: float,
                      p: DaisyParams) -> float:
    """Temperature next to one species, offset by the albedo difference."""
    return p.q_prime * (albedo - albedo_species) + t_planet


def growth_rate(t_local: float, p: DaisyParams) -> float:
    """Parabolic growth factor, 1 at the optimum; negative far from it."""
    return 1.0 - p.growth_coeff * (p.growth_optimum - t_local) ** 2


def _wiring(scenario, p: DaisyParams, spatial: bool):
    """Shared stock-and-flow definitions for both variants.

    Stocks are in hectares. The equations consume fractions of total
    planet area, derived in-model; fertile soil is the closure, so the
    four areas sum to the total exactly at every step.
    """
    areas = scenario.areas_ha
    total = (areas[LandCode.FERTILE] + areas[LandCode.BLACK]
             + areas[LandCode.WHITE] + areas[LandCode.BARREN])
    schedule = scenario.luminosity

    defs = [
        const("total_area", total),
        const("area_barren", areas[LandCode.BARREN]),
        stock("area_black", areas[LandCode.BLACK],
              inflows=("growth_black",), outflows=("decay_black",)),
        stock("area_white", areas[LandCode.WHITE],
              inflows=("growth_white",), outflows=("decay_white",)),
        aux("luminosity", lambda v: schedule.value(v["time"]), ("time",)),
        aux("area_fertile",
            lambda v: v["total_area"] - v["area_barren"] - v["area_black"] - v["area_white"],
            ("total_area", "area_barren", "area_black", "area_white")),
        aux("frac_black", lambda v: v["area_black"] / v["total_area"],
            ("area_black", "total_area")),
        aux("frac_white", lambda v: v["area_white"] / v["total_area"],
            ("area_white", "total_area")),
        aux("frac_fertile", lambda v: v["area_fertile"] / v["total_area"],
            ("area_fertile", "total_area")),
        aux("frac_barren", lambda v: v["area_barren"] / v["total_area"],
            ("area_barren", "total_area")),
        aux("albedo",
            lambda v: planetary_albedo(AreaState(v["frac_black"], v["frac_white"],
                                                 v["frac_fertile"], v["frac_barren"]), p),
            ("frac_black", "frac_white", "frac_fertile", "frac_barren")),
        aux("temperature",
            lambda v: planetary_temperature(v["luminosity"], v["albedo"], p),
            ("luminosity", "albedo")),
        aux("temp_adjust_black", lambda v: p.q_prime * (v["albedo"] - p.albedo_black),
            ("albedo",)),
        aux("temp_adjust_white", lambda v: p.q_prime * (v["albedo"] - p.albedo_white),
            ("albedo",)),
        aux("temp_black", lambda v: v["temperature"] + v["temp_adjust_black"],
            ("temperature", "temp_adjust_black")),
        aux("temp_white", lambda v: v["temperature"] + v["temp_adjust_white"],
            ("temperature", "temp_adjust_white")),
        aux("beta_black", lambda v: growth_rate(v["temp_black"], p), ("temp_black",)),
        aux("beta_white", lambda v: growth_rate(v["temp_white"], p), ("temp_white",)),
        # Negative growth factors shrink the growth flow to 0; shrinkage is
        # only ever the decay term.
        flow("growth_black",
             lambda v: v["area_black"] * max(v["D_black"] * v["beta_black"], 0.0),
             ("area_black", "D_black", "beta_black")),
        flow("growth_white",
             lambda v: v["area_white"] * max(v["D_white"] * v["beta_white"], 0.0),
             ("area_white", "D_white", "beta_white")),
        flow("decay_black", lambda v: v["area_black"] * p.decay_rate, ("area_black",)),
        flow("decay_white", lambda v: v["area_white"] * p.decay_rate, ("area_white",)),
    ]
    if spatial:
        defs += [exogenous("D_black"), exogenous("D_white")]
    else:
        defs += [
            aux("D_black", lambda v: v["frac_fertile"], ("frac_fertile",)),
            aux("D_white", lambda v: v["frac_fertile"], ("frac_fertile",)),
        ]
    return defs


def build_nonspatial_model(scenario, p: DaisyParams) -> StockFlowModel:
    """Baseline variant: growth limited by the global fertile fraction."""
    if scenario.mode != "non-spatial":
        raise ValueError(f"scenario mode is '{scenario.mode}', expected 'non-spatial'")
    return build_model(_wiring(scenario, p, spatial=False), dt=scenario.dt)


def build_spatial_model(scenario, p: DaisyParams) -> StockFlowModel:
    """Spatial variant: growth limited by injected per-species multipliers."""
    if scenario.mode != "spatial":
        raise ValueError(f"scenario mode is '{scenario.mode}', expected 'spatial'")
    return build_model(_wiring(scenario, p, spatial=True), dt=scenario.dt)
