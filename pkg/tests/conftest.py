from pathlib import Path

import pytest

from daisysim import LandCode, LuminositySchedule, Scenario

SCENARIO_DIR = Path(__file__).resolve().parent.parent / "scenarios"

FIG7_AREAS = {
    LandCode.BLACK: 100.0,
    LandCode.WHITE: 100.0,
    LandCode.FERTILE: 500.0,
    LandCode.BARREN: 300.0,
}


@pytest.fixture
def fig7_scenario() -> Scenario:
    return Scenario(
        name="fig7",
        mode="spatial",
        steps=100,
        areas_ha=dict(FIG7_AREAS),
        luminosity=LuminositySchedule(kind="step", l0=1.0, l1=0.9, t_change=50.0),
        cell_size_m=100.0,
        seed=1,
    )


@pytest.fixture
def scenario_dir() -> Path:
    return SCENARIO_DIR
