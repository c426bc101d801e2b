import re
import xml.etree.ElementTree as ET

import pytest

from onebitboost.harness import ExperimentPlan, PlanError, ResultTable, aggregate, run_plan
from onebitboost.plotting import PANELS, render_panel

SVG = "{http://www.w3.org/2000/svg}"


@pytest.fixture(scope="module")
def table():
    plan = ExperimentPlan("t", distributions=("gaussian", "uniform"), n_grid=(10, 20), corrupt_grid=(0,),
                          replications=3, iterations=200, mc_samples=2000)
    return run_plan(plan)


def test_one_solid_and_one_dashdot_series_per_distribution(table):
    root = ET.fromstring(render_panel(table, "figure2-right"))
    series = root.findall(f"{SVG}polyline[@class='series']")
    assert len(series) == 4
    for dist in ("gaussian", "uniform"):
        lp = [s for s in series if s.get("data-distribution") == dist and s.get("data-estimator") == "lp"]
        ab = [s for s in series if s.get("data-distribution") == dist and s.get("data-estimator") == "adaboost"]
        assert len(lp) == len(ab) == 1
        assert lp[0].get("stroke-dasharray") is None
        assert len(ab[0].get("stroke-dasharray").split(",")) == 4


def test_plotted_points_follow_medians(table):
    svg = render_panel(table, "figure2-right")
    series = aggregate(table, "n", "margin", {"n_corrupt": 0})
    root = ET.fromstring(svg)
    for line in root.findall(f"{SVG}polyline[@class='series']"):
        key = (line.get("data-distribution"), line.get("data-estimator"))
        ys = [float(p.split(",")[1]) for p in line.get("points").split()]
        medians = [st["median"] for _, st in series[key]]
        # higher medians sit higher on the page (smaller y)
        order_y = sorted(range(len(ys)), key=lambda i: ys[i])
        order_m = sorted(range(len(medians)), key=lambda i: -medians[i])
        assert order_y == order_m


def test_deterministic(table):
    assert render_panel(table, "figure2-left") == render_panel(ResultTable.from_csv(table.to_csv()), "figure2-left")


def test_single_cell_table():
    plan = ExperimentPlan("one", distributions=("gaussian",), n_grid=(10,), replications=1,
                          estimators=("lp",), mc_samples=1000)
    svg = render_panel(run_plan(plan), "figure2-right")
    root = ET.fromstring(svg)
    (line,) = root.findall(f"{SVG}polyline[@class='series']")
    assert len(line.get("points").split()) == 1


def test_failures_only_is_usage_error():
    plan = ExperimentPlan("bad", distributions=("gaussian",), n_grid=(3,), corrupt_grid=(5,),
                          replications=1, estimators=("lp",))
    with pytest.raises(PlanError):
        render_panel(run_plan(plan), "smoke")


def test_unknown_panel(table):
    with pytest.raises(PlanError):
        render_panel(table, "figure9")
    assert set(PANELS) >= {"figure1-left", "figure1-right", "figure2-left", "figure2-right"}


def test_no_nondeterministic_content(table):
    svg = render_panel(table, "smoke")
    assert not re.search(r"\d{4}-\d{2}-\d{2}", svg)
