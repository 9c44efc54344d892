"""Time-slicing solver for degenerate parabolic problems on moving or jumping domains."""

import json

from ._tslice import (
    Error,
    Expr,
    Field,
    ParseError,
    Scenario,
    SolverStallError,
    ValidationError,
    cli,
    load_scenario,
    observed_order,
    parse_scenario,
)
from . import _tslice

__all__ = [
    "Error", "Expr", "Field", "ParseError", "Scenario", "SolverStallError", "ValidationError",
    "check_structure", "cli", "energy", "l1_contraction", "load_scenario", "max_principle", "mms",
    "observed_order", "parse_scenario", "refinement_study", "run",
]


def run(scenario):
    """Run the scheme; returns (Field, run report dict)."""
    field, report = _tslice._run(scenario)
    return field, json.loads(report)


def max_principle(field, scenario):
    return json.loads(_tslice._max_principle(field, scenario))


def energy(field, scenario):
    return json.loads(_tslice._energy(field, scenario))


def l1_contraction(scenario, u0b):
    """Compare the scenario's own u0 against the expression u0b."""
    return json.loads(_tslice._l1_contraction(scenario, u0b))


def refinement_study(scenario, levels, resolution=0.0):
    return json.loads(_tslice._refinement_study(scenario, levels, resolution))


def mms(scenario, exact):
    return json.loads(_tslice._mms(scenario, exact))


def check_structure(kind, p=2.0, samples=10000, seed=1, dim=1):
    return json.loads(_tslice._check_structure(kind, p, samples, seed, dim))
