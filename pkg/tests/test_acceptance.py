"""Acceptance criteria, one test each, with the tolerances pinned below.

Each test records a single ``PASS``/``FAIL`` line that is printed in the
pytest terminal summary (and to stdout when run as a script).  Criterion
7 runs at n = 200 (plan scale 0.4); set ``ONEBIT_FULL=1`` for n = 500.
"""

import math
import os
import time

import numpy as np
import pytest

from conftest import ACCEPTANCE_LINES
from onebitboost import rng
from onebitboost.boost import BoostConfig, iterations_rule, run_adaboost
from onebitboost.datagen import FeatureDistribution, GenSpec, generate_instance
from onebitboost.harness import ExperimentPlan, builtin_plan, loglog_slope, run_plan
from onebitboost.lpmargin import margin_of_best, solve_max_margin
from onebitboost.metrics import prediction_error_gaussian, prediction_error_mc
from onebitboost.oracle import brute_force_margin, exhaustive_sign_check
from onebitboost.plotting import render_panel

# pinned tolerances
DUALITY_REL = 1e-8          # |gamma * ||beta_hat||_1 - 1|
GAP_REL = 1e-6              # duality_gap <= GAP_REL * max(1, gamma)
ORACLE_ABS = 1e-3           # |gamma_LP - brute force|
ORACLE_GRID = 100_000
RATIO_MIN, RATIO_SEEDS_MIN = 0.5, 19
ERROR_SLOPE = (-0.70, -0.15)
MARGIN_SLOPE = (-0.60, -0.15)
LOSS_SLACK = ALPHA_SLACK = 1e-12
MC_SIGMAS = 4.0
MC_SAMPLES = 100_000


def report(number, ok, detail, elapsed=None):
    timing = f" [{elapsed:.1f}s]" if elapsed is not None else ""
    line = f"{'PASS' if ok else 'FAIL'} criterion {number:>2}: {detail}{timing}"
    ACCEPTANCE_LINES.append(line)
    print(line)
    assert ok, line


def _gauss(n, p, s, corrupt, seed):
    return generate_instance(GenSpec(n, p, s, corrupt, FeatureDistribution.gaussian(), seed))


def test_c01_strong_duality():
    t0 = time.perf_counter()
    gen = rng.stream(101)
    worst_norm = worst_gap = 0.0
    bad = 0
    for k in range(100):
        n = int(gen.integers(5, 101))
        sol = solve_max_margin(_gauss(n, 10 * n, 5, 0, rng.derive_seed(101, 1, k)))
        if not sol.optimal:
            bad += 1
            continue
        norm_err = abs(sol.margin * np.abs(sol.beta_hat).sum() - 1)
        worst_norm = max(worst_norm, norm_err)
        worst_gap = max(worst_gap, sol.duality_gap / max(1.0, sol.margin))
    elapsed = time.perf_counter() - t0
    ok = bad == 0 and worst_norm <= DUALITY_REL and worst_gap <= GAP_REL and elapsed < 60
    report(1, ok, f"100 instances, non-optimal={bad}, max |gamma*||b||-1|={worst_norm:.2e}, "
                  f"max rel gap={worst_gap:.2e}", elapsed)


def test_c02_oracle_equivalence():
    t0 = time.perf_counter()
    dists = [FeatureDistribution.gaussian(), FeatureDistribution.student_t(3),
             FeatureDistribution.uniform(), FeatureDistribution.laplace()]
    gen = rng.stream(202)
    worst = 0.0
    for k in range(200):
        n, s = int(gen.integers(1, 4)), int(gen.integers(1, 3))
        inst = generate_instance(GenSpec(n, 2, s, 0, dists[k % 4], rng.derive_seed(202, 1, k)))
        sol = solve_max_margin(inst)
        assert sol.optimal
        worst = max(worst, abs(sol.margin - brute_force_margin(inst, ORACLE_GRID)))
    elapsed = time.perf_counter() - t0
    report(2, worst <= ORACLE_ABS and elapsed < 30,
           f"200 p=2 instances, max |gamma_LP - brute force| = {worst:.2e}", elapsed)


@pytest.fixture(scope="module")
def margin_runs():
    """Criterion 3 runs: n=100, p=1000, s=5, no corruptions, eps=1/6, 20 seeds."""
    t0 = time.perf_counter()
    T = iterations_rule(100, 5, 0, 1000, 1 / 6)
    runs = []
    for seed in range(20):
        inst = _gauss(100, 1000, 5, 0, rng.derive_seed(303, 1, seed))
        sol = solve_max_margin(inst)
        model, traj = run_adaboost(inst, BoostConfig(1 / 6, T))
        runs.append((inst, sol, model, traj))
    return T, runs, time.perf_counter() - t0


def test_c03_margin_approximation(margin_runs):
    T, runs, elapsed = margin_runs
    ratios = np.array([margin_of_best(inst, model, sol) for inst, sol, model, _ in runs])
    good = int(np.sum(ratios >= RATIO_MIN))
    report(3, good >= RATIO_SEEDS_MIN and elapsed < 300,
           f"T={T}, margin_ratio >= {RATIO_MIN} in {good}/20 seeds (min {ratios.min():.3f})", elapsed)


def test_c04_interpolation(margin_runs):
    _, runs, _ = margin_runs
    checked = failed = 0
    for inst, sol, model, _ in runs:
        if margin_of_best(inst, model, sol) > 0:
            checked += 1
            if not (exhaustive_sign_check(inst, sol.beta_hat) and exhaustive_sign_check(inst, model)):
                failed += 1
    report(4, failed == 0 and checked > 0, f"sign checks on {checked} seeds, failures={failed}")


@pytest.fixture(scope="module")
def rate_table():
    plan = ExperimentPlan("rate", distributions=("gaussian",), n_grid=(100, 200, 400), corrupt_grid=(0,),
                          replications=20, estimators=("lp",))
    t0 = time.perf_counter()
    table = run_plan(plan)
    return table, time.perf_counter() - t0


def _medians(table, column, key, grid):
    return np.array([np.median(table.select(**{key: v}).values(column)) for v in grid])


def test_c05_rate_trend(rate_table):
    table, elapsed = rate_table
    grid = (100, 200, 400)
    med = _medians(table, "prediction_error", "n", grid)
    slope = loglog_slope(grid, med)
    ok = (not table.failures and np.all(np.diff(med) < 0)
          and ERROR_SLOPE[0] <= slope <= ERROR_SLOPE[1] and elapsed < 600)
    report(5, ok, f"median errors {np.round(med, 4).tolist()}, log-log slope {slope:.3f} "
                  f"in [{ERROR_SLOPE[0]}, {ERROR_SLOPE[1]}]", elapsed)


def test_c06_margin_scaling(rate_table):
    table, _ = rate_table
    grid = (100, 200, 400)
    med = _medians(table, "margin", "n", grid)
    slope = loglog_slope(grid, med)
    ok = np.all(np.diff(med) < 0) and MARGIN_SLOPE[0] <= slope <= MARGIN_SLOPE[1]
    report(6, ok, f"median gamma {np.round(med, 4).tolist()}, log-log slope {slope:.3f} "
                  f"in [{MARGIN_SLOPE[0]}, {MARGIN_SLOPE[1]}]")


def test_c07_noise_monotonicity():
    scale = 1.0 if os.environ.get("ONEBIT_FULL") else 0.4
    base = builtin_plan("figure1-right").scaled(scale)
    plan = ExperimentPlan("noise", distributions=("gaussian",), n_grid=base.n_grid,
                          corrupt_grid=(0, 10, 20, 40), replications=20, estimators=("lp",))
    t0 = time.perf_counter()
    table = run_plan(plan)
    grid = plan.corrupt_grid
    med = _medians(table, "prediction_error", "n_corrupt", grid)
    ok = not table.failures and np.all(np.diff(med) >= 0) and np.all(med < 0.5)
    report(7, ok, f"n={plan.n_grid[0]}, median errors at |O|={list(grid)}: {np.round(med, 4).tolist()}",
           time.perf_counter() - t0)


def test_c08_loss_monotone(margin_runs):
    _, runs, _ = margin_runs
    worst_rise = -math.inf
    worst_alpha = 0.0
    for _, _, _, traj in runs:
        loss = np.concatenate([[1.0], traj.column("loss")])  # loss at beta_0 = 0 is 1
        worst_rise = max(worst_rise, float(np.max(np.diff(loss))))
        worst_alpha = max(worst_alpha, float(np.max(np.abs(traj.column("alpha")))))
    report(8, worst_rise <= LOSS_SLACK and worst_alpha <= 1 + ALPHA_SLACK,
           f"max loss increase {worst_rise:.2e}, max |alpha| {worst_alpha:.4f}")


def test_c09_metric_cross_validation():
    gen = rng.stream(909)
    worst = 0.0
    for k in range(50):
        p = int(gen.integers(2, 20))
        truth = gen.standard_normal(p)
        truth /= np.linalg.norm(truth)
        beta = gen.standard_normal(p)
        exact = prediction_error_gaussian(beta, truth)
        est, se = prediction_error_mc(beta, truth, "gaussian", MC_SAMPLES, rng.substream(909, rng.EVALUATION, k))
        worst = max(worst, abs(est - exact) / se)
    report(9, worst <= MC_SIGMAS, f"50 directions, max |mc - closed form| / std_error = {worst:.2f}")


def test_c10_determinism():
    t0 = time.perf_counter()
    plan = builtin_plan("smoke")
    a, b = run_plan(plan), run_plan(plan)
    csv_same = a.to_csv() == b.to_csv()
    svg_same = render_panel(a, "smoke") == render_panel(b, "smoke")
    report(10, csv_same and svg_same, f"smoke plan CSV identical={csv_same}, SVG identical={svg_same}",
           time.perf_counter() - t0)


if __name__ == "__main__":
    raise SystemExit(pytest.main([__file__, "-q"]))
