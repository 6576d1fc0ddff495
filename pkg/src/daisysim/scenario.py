"""Scenario files: flat ``key = value`` text with a ``[luminosity]`` section.

The format is hand-editable and diff-friendly. Unknown keys are rejected
so typos fail loudly. ``parse_scenario`` and ``render_scenario`` are
inverses on the canonical form.

Grammar (one statement per line, '#' starts a comment):

    name = fig7                 # optional label
    mode = spatial              # spatial | non-spatial
    steps = 100
    dt = 1.0                    # optional, default 1
    cell_size_m = 100.0
    seed = 1                    # optional, default 1
    neighborhood = 8            # optional, 8 | 4
    snapshots = every 10        # optional, none | every <k>
    grid_shape = 25x40          # optional, rows x cols
    area_black = 100.0          # hectares
    area_white = 100.0
    area_fertile = 500.0
    area_barren = 300.0

    [luminosity]
    kind = step                 # constant | step | ramp
    L0 = 1.0
    L1 = 0.9                    # step and ramp
    t_change = 50.0             # step only
    t_start = 50.0              # ramp only
    t_end = 100.0               # ramp only
"""

from __future__ import annotations

from dataclasses import dataclass, replace

from .daisyworld import LuminositySchedule
from .landscape import LandCode

__all__ = ["Scenario", "ScenarioError", "parse_scenario", "render_scenario"]

MODE_SPATIAL = "spatial"
MODE_NONSPATIAL = "non-spatial"

_TOP_KEYS = {
    "name", "mode", "steps", "dt", "cell_size_m", "seed", "neighborhood",
    "snapshots", "grid_shape",
    "area_black", "area_white", "area_fertile", "area_barren",
}
_LUM_KEYS = {"kind", "L0", "L1", "t_change", "t_start", "t_end"}

_AREA_KEYS = {
    "area_black": LandCode.BLACK,
    "area_white": LandCode.WHITE,
    "area_fertile": LandCode.FERTILE,
    "area_barren": LandCode.BARREN,
}


class ScenarioError(ValueError):
    """Scenario text could not be parsed or validated."""


@dataclass(frozen=True)
class Scenario:
    """One fully-resolved simulation setup."""

    name: str
    mode: str                       # MODE_SPATIAL | MODE_NONSPATIAL
    steps: int
    areas_ha: dict[LandCode, float]
    luminosity: LuminositySchedule
    cell_size_m: float = 100.0
    dt: float = 1.0
    seed: int = 1
    neighborhood: int = 8
    snapshots: int = 0              # 0 = none, k = snapshot every k steps
    grid_shape: tuple[int, int] | None = None   # (nrows, ncols)

    def __post_init__(self):
        if self.mode not in (MODE_SPATIAL, MODE_NONSPATIAL):
            raise ScenarioError(f"mode must be spatial or non-spatial, got '{self.mode}'")
        if self.steps < 1:
            raise ScenarioError(f"steps must be >= 1, got {self.steps}")
        if self.dt <= 0:
            raise ScenarioError(f"dt must be positive, got {self.dt}")
        if self.cell_size_m <= 0:
            raise ScenarioError(f"cell_size_m must be positive, got {self.cell_size_m}")
        if not 0 <= self.seed < 2 ** 64:
            raise ScenarioError(f"seed must be a 64-bit unsigned integer, got {self.seed}")
        if self.neighborhood not in (8, 4):
            raise ScenarioError(f"neighborhood must be 8 or 4, got {self.neighborhood}")
        if self.snapshots < 0:
            raise ScenarioError("snapshots must be none or a positive interval")
        areas = {code: float(self.areas_ha.get(code, 0.0)) for code in LandCode}
        if any(v < 0 for v in areas.values()):
            raise ScenarioError(f"areas must be non-negative: {self.areas_ha}")
        if sum(areas.values()) <= 0:
            raise ScenarioError("total area must be positive")
        object.__setattr__(self, "areas_ha", areas)
        if self.grid_shape is not None:
            nr, nc = self.grid_shape
            if nr < 1 or nc < 1:
                raise ScenarioError(f"grid_shape must be positive, got {self.grid_shape}")

    @property
    def total_area_ha(self) -> float:
        a = self.areas_ha
        return (a[LandCode.FERTILE] + a[LandCode.BLACK]
                + a[LandCode.WHITE] + a[LandCode.BARREN])

    def with_overrides(self, **kwargs) -> "Scenario":
        return replace(self, **kwargs)


def _split_statements(text: str):
    """Yield (lineno, section, key, value) for every statement."""
    section = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("[") and line.endswith("]"):
            section = line[1:-1].strip()
            if section != "luminosity":
                raise ScenarioError(f"line {lineno}: unknown section '[{section}]'")
            continue
        if "=" not in line:
            raise ScenarioError(f"line {lineno}: expected 'key = value', got '{line}'")
        key, value = (part.strip() for part in line.split("=", 1))
        yield lineno, section, key, value


def _as_float(key: str, value: str, lineno: int) -> float:
    try:
        return float(value)
    except ValueError:
        raise ScenarioError(f"line {lineno}: key '{key}': malformed number '{value}'") from None


def _as_int(key: str, value: str, lineno: int) -> int:
    try:
        return int(value)
    except ValueError:
        raise ScenarioError(f"line {lineno}: key '{key}': malformed integer '{value}'") from None


def parse_scenario(text: str, name: str | None = None) -> Scenario:
    """Parse scenario text into a fully-populated :class:`Scenario`.

    ``name`` provides a fallback label (typically the file stem) when the
    text carries no ``name`` key.
    """
    top: dict[str, tuple[str, int]] = {}
    lum: dict[str, tuple[str, int]] = {}
    for lineno, section, key, value in _split_statements(text):
        if section is None:
            if key not in _TOP_KEYS:
                raise ScenarioError(f"line {lineno}: unknown key '{key}'")
            bucket = top
        else:
            if key not in _LUM_KEYS:
                raise ScenarioError(f"line {lineno}: unknown luminosity key '{key}'")
            bucket = lum
        if key in bucket:
            raise ScenarioError(f"line {lineno}: duplicate key '{key}'")
        bucket[key] = (value, lineno)

    def require(bucket, key, where):
        if key not in bucket:
            raise ScenarioError(f"missing required key '{key}'{where}")
        return bucket[key]

    mode_raw, mode_line = require(top, "mode", "")
    mode = {"spatial": MODE_SPATIAL, "non-spatial": MODE_NONSPATIAL,
            "nonspatial": MODE_NONSPATIAL}.get(mode_raw)
    if mode is None:
        raise ScenarioError(
            f"line {mode_line}: mode must be spatial or non-spatial, got '{mode_raw}'")

    steps = _as_int("steps", *require(top, "steps", ""))
    cell_size = _as_float("cell_size_m", *require(top, "cell_size_m", ""))
    areas = {code: _as_float(key, *require(top, key, ""))
             for key, code in _AREA_KEYS.items()}

    dt = _as_float("dt", *top["dt"]) if "dt" in top else 1.0
    seed = _as_int("seed", *top["seed"]) if "seed" in top else 1
    neighborhood = _as_int("neighborhood", *top["neighborhood"]) if "neighborhood" in top else 8

    snapshots = 0
    if "snapshots" in top:
        value, lineno = top["snapshots"]
        if value == "none":
            snapshots = 0
        elif value.startswith("every"):
            snapshots = _as_int("snapshots", value[len("every"):].strip(), lineno)
            if snapshots < 1:
                raise ScenarioError(f"line {lineno}: snapshot interval must be >= 1")
        else:
            raise ScenarioError(
                f"line {lineno}: snapshots must be 'none' or 'every <k>', got '{value}'")

    grid_shape = None
    if "grid_shape" in top:
        value, lineno = top["grid_shape"]
        parts = value.lower().split("x")
        if len(parts) != 2:
            raise ScenarioError(
                f"line {lineno}: grid_shape must look like '25x40' (rows x cols)")
        grid_shape = (_as_int("grid_shape", parts[0].strip(), lineno),
                      _as_int("grid_shape", parts[1].strip(), lineno))

    kind_raw, kind_line = require(lum, "kind", " in [luminosity]")
    lum_floats = {k: _as_float(k, *lum[k]) for k in lum if k != "kind"}
    try:
        schedule = LuminositySchedule(
            kind=kind_raw,
            l0=lum_floats.pop("L0"),
            l1=lum_floats.pop("L1", None),
            t_change=lum_floats.pop("t_change", None),
            t_start=lum_floats.pop("t_start", None),
            t_end=lum_floats.pop("t_end", None),
        )
    except KeyError:
        raise ScenarioError("missing required key 'L0' in [luminosity]") from None
    except ValueError as exc:
        raise ScenarioError(f"line {kind_line}: [luminosity]: {exc}") from None

    label = top["name"][0] if "name" in top else (name or "unnamed")
    try:
        return Scenario(
            name=label, mode=mode, steps=steps, areas_ha=areas, luminosity=schedule,
            cell_size_m=cell_size, dt=dt, seed=seed, neighborhood=neighborhood,
            snapshots=snapshots, grid_shape=grid_shape,
        )
    except ScenarioError:
        raise
    except ValueError as exc:
        raise ScenarioError(str(exc)) from None


def render_scenario(s: Scenario) -> str:
    """Canonical scenario text; ``parse_scenario`` inverts it exactly."""
    lines = [
        f"name = {s.name}",
        f"mode = {s.mode}",
        f"steps = {s.steps}",
        f"dt = {s.dt!r}",
        f"cell_size_m = {s.cell_size_m!r}",
        f"seed = {s.seed}",
        f"neighborhood = {s.neighborhood}",
        "snapshots = none" if s.snapshots == 0 else f"snapshots = every {s.snapshots}",
    ]
    if s.grid_shape is not None:
        lines.append(f"grid_shape = {s.grid_shape[0]}x{s.grid_shape[1]}")
    lines += [
        f"area_black = {s.areas_ha[LandCode.BLACK]!r}",
        f"area_white = {s.areas_ha[LandCode.WHITE]!r}",
        f"area_fertile = {s.areas_ha[LandCode.FERTILE]!r}",
        f"area_barren = {s.areas_ha[LandCode.BARREN]!r}",
        "",
        "[luminosity]",
        f"kind = {s.luminosity.kind}",
        f"L0 = {s.luminosity.l0!r}",
    ]
    lum = s.luminosity
    if lum.l1 is not None:
        lines.append(f"L1 = {lum.l1!r}")
    if lum.t_change is not None:
        lines.append(f"t_change = {lum.t_change!r}")
    if lum.t_start is not None:
        lines.append(f"t_start = {lum.t_start!r}")
    if lum.t_end is not None:
        lines.append(f"t_end = {lum.t_end!r}")
    return "\n".join(lines) + "\n"
