"""Energy-depletion engagement simulator."""

import json
import os

from ._core import (
    Engagement,
    GeometryError,
    ScenarioError,
    ScenarioInvalid,
    energy_step,
    solve_intercept,
    terminal_heading,
    unicycle_step,
)
from . import _core

__all__ = [
    "Engagement",
    "GeometryError",
    "ScenarioError",
    "ScenarioInvalid",
    "energy_step",
    "load_scenario",
    "simulate",
    "solve_intercept",
    "terminal_heading",
    "unicycle_step",
    "validate",
]


def _text(scenario):
    if isinstance(scenario, dict):
        return json.dumps(scenario)
    if isinstance(scenario, os.PathLike) or (isinstance(scenario, str) and not scenario.lstrip().startswith("{")):
        with open(scenario, encoding="utf-8") as f:
            return f.read()
    return scenario


def load_scenario(scenario):
    """Validated scenario as a dict, from a dict, JSON text or file path."""
    return json.loads(_core.normalize_scenario(_text(scenario)))


def validate(scenario):
    """List of (code, message) violations; empty when the scenario is valid."""
    return _core.validate(_text(scenario))


def simulate(scenario, master_step=None, max_time=None, ballistic_depletion=False):
    """Runs an engagement and returns an Engagement handle."""
    return _core.simulate(_text(scenario), master_step, max_time, ballistic_depletion)
