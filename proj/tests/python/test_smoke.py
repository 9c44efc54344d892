import math
import os
from pathlib import Path

import pytest

import tslice

SCENARIOS = Path(os.environ.get("TSLICE_SCENARIOS", Path(__file__).resolve().parents[2] / "scenarios"))

HEAT = """
[grid]
dim = 1
xmin = -0.125
xmax = 1.125
h = 0.03125

[time]
T = 0.05
slices = 2
substeps = 20

[domain]
type = moving_intervals
left = "0"
right = "1"

[flux]
type = p_laplacian
p = 2

[data]
u0 = "sin(pi*x)"
psi = "0"
"""


def heat():
    return tslice.parse_scenario(HEAT)


def test_expr_round_trip():
    e = tslice.Expr("1 + t*x^2")
    assert e.eval(t=2.0, x=3.0) == 19.0
    assert tslice.Expr(str(e)) == e
    with pytest.raises(tslice.ParseError):
        tslice.Expr("1 +")


def test_run_shapes_and_peak():
    sc = heat()
    field, report = tslice.run(sc)
    assert field.stamp_count() == 2 * 20 + 2
    assert field.knots == pytest.approx([0.0, 0.025, 0.05])
    assert len(report["slices"]) == 2
    mid = min(range(sc.node_count), key=lambda n: abs(sc.node_position(n)[0] - 0.5))
    assert field.states(0)[mid] == 1
    # Backward Euler decays a little faster than the exact mode.
    assert field.frames[-1][mid] == pytest.approx(math.exp(-math.pi**2 * 0.05), rel=2e-2)
    outside = field.states(0).index(-1)
    assert math.isnan(field.frames[0][outside])


def test_reports_pass_on_heat():
    sc = heat()
    field, _ = tslice.run(sc)
    assert tslice.max_principle(field, sc)["pass"]
    assert tslice.energy(field, sc)["pass"]
    assert tslice.l1_contraction(sc, "0")["pass"]


def test_validation_error_lists_problems():
    with pytest.raises(tslice.ValidationError):
        tslice.parse_scenario(HEAT.replace("p = 2", "p = 2\nbogus = 1"))


def test_structure_checks():
    assert tslice.check_structure("p_laplacian", 3.0, samples=500)["pass"]
    assert tslice.check_structure("z_modulated", 2.5, samples=500, dim=2)["pass"]


def test_bundled_scenario_and_cli(tmp_path):
    path = SCENARIOS / "moving_heat.scn"
    sc = tslice.load_scenario(path)
    assert len(sc.hash()) == 16
    code, out, err = tslice.cli(["run", str(path), "--out", str(tmp_path)])
    assert code == 0, err
    assert (tmp_path / "manifest.json").exists()
    code, _, _ = tslice.cli(["run", str(tmp_path / "missing.scn")])
    assert code == 2


def test_refinement_study_levels():
    study = tslice.refinement_study(heat(), 2)
    assert len(study["levels"]) == 2
    assert len(study["l1_distances"]) == 1
    assert study["l1_distances"][0] > 0.0
