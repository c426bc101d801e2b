"""Experiment orchestration: parameter grids, replications, CSV output.

A plan expands to the work set ``distributions x n_grid x corrupt_grid x
replications``; each work item generates one instance and fits every
requested estimator on it, producing one row per estimator.  Rows are
sorted by ``(distribution, n, p, s, n_corrupt, replication, estimator)``
so the output does not depend on how work items were scheduled.

Seeding: the instance seed of a work item is
``derive_seed(master_seed, cell_hash, replication)`` where ``cell_hash``
is the first 8 bytes (little-endian) of the BLAKE2b digest of the text
``"<distribution>|<n>|<p>|<s>"``.  The corruption level is deliberately
not part of the key, so a noise sweep reuses the same features and
ground truth at every level, and (the corruption subset being a prefix of
one permutation) the corrupted sets are nested.

Plan files are flat ``key = value`` text; ``#`` starts a comment and list
values are comma separated::

    name = my-plan
    distributions = gaussian, laplace
    n_grid = 100, 200
    ratio = 10                # p = ratio * n
    s = 5
    corrupt_grid = 0, 40
    epsilon = 0.2
    iterations = rule         # or a fixed integer T
    replications = 20
    estimators = adaboost, lp
    master_seed = 2023
    mc_samples = 100000       # Monte Carlo size for non-Gaussian errors
    dof = 7                   # optional student-t override
    standardize_laplace = false
"""

from __future__ import annotations

import csv
import hashlib
import io
import logging
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np

from . import rng
from .boost import BoostConfig, iterations_rule, run_adaboost
from .core import exp_loss, exp_loss_arrays, l1_margin
from .datagen import DISTRIBUTIONS, FeatureDistribution, GenSpec, generate_instance, student_dof
from .lpmargin import solve_max_margin
from .metrics import DEFAULT_MC_SAMPLES, l2_direction_error, prediction_error

logger = logging.getLogger(__name__)

COLUMNS = (
    "plan", "distribution", "n", "p", "s", "n_corrupt", "replication", "seed",
    "estimator", "status", "margin", "margin_ratio", "prediction_error",
    "l2_direction_error", "loss", "iterations", "wall_time_ms",
)
KEY_COLUMNS = ("distribution", "n", "p", "s", "n_corrupt", "replication", "estimator")
INT_COLUMNS = ("n", "p", "s", "n_corrupt", "replication", "seed", "iterations", "wall_time_ms")
FLOAT_COLUMNS = ("margin", "margin_ratio", "prediction_error", "l2_direction_error", "loss")
METRIC_COLUMNS = FLOAT_COLUMNS

ESTIMATORS = ("adaboost", "lp")
CONTINUOUS = ("gaussian", "student-t", "uniform", "laplace")
DEFAULT_N_GRID = (100, 200, 300, 400, 500)
DEFAULT_SEED = 2023


class PlanError(ValueError):
    """Malformed plan or plan file (a usage error)."""


@dataclass(frozen=True)
class ExperimentPlan:
    name: str
    distributions: tuple = CONTINUOUS
    n_grid: tuple = DEFAULT_N_GRID
    ratio: int = 10
    s: int = 5
    corrupt_grid: tuple = (0,)
    epsilon: float = 0.2
    iterations: object = "rule"  # "rule" or a fixed int T
    replications: int = 20
    estimators: tuple = ESTIMATORS
    master_seed: int = DEFAULT_SEED
    mc_samples: int = DEFAULT_MC_SAMPLES
    dof: int | None = None
    standardize_laplace: bool = False
    record_timings: bool = False

    def __post_init__(self):
        for key in ("distributions", "n_grid", "corrupt_grid", "estimators"):
            value = tuple(getattr(self, key))
            if not value:
                raise PlanError(f"{key} must be nonempty")
            object.__setattr__(self, key, value)
        bad = set(self.distributions) - set(DISTRIBUTIONS)
        if bad:
            raise PlanError(f"unknown distributions {sorted(bad)}")
        bad = set(self.estimators) - set(ESTIMATORS)
        if bad:
            raise PlanError(f"unknown estimators {sorted(bad)}")
        if self.replications < 1:
            raise PlanError("replications must be >= 1")
        if not 0 < self.epsilon < 1:
            raise PlanError("epsilon must lie in (0, 1)")
        if self.iterations != "rule" and not (isinstance(self.iterations, int) and self.iterations >= 0):
            raise PlanError("iterations must be 'rule' or a nonnegative integer")
        if self.ratio < 1 or self.s < 1 or min(self.n_grid) < 1 or min(self.corrupt_grid) < 0:
            raise PlanError("grid values out of range")

    def scaled(self, k):
        """Multiply every entry of ``n_grid`` by ``k`` (rounded, at least 1)."""
        if k <= 0:
            raise PlanError("scale must be positive")
        return replace(self, n_grid=tuple(max(1, int(round(n * k))) for n in self.n_grid))

    @property
    def size(self):
        return (len(self.distributions) * len(self.n_grid) * len(self.corrupt_grid)
                * self.replications * len(self.estimators))


def builtin_plan(name):
    if name == "figure1-left":
        return ExperimentPlan(name, corrupt_grid=(40,))
    if name == "figure1-right":
        return ExperimentPlan(name, n_grid=(500,), corrupt_grid=(0, 10, 20, 40))
    if name in ("figure2-left", "figure2-right"):
        return ExperimentPlan(name, corrupt_grid=(0,))
    if name == "smoke":
        return ExperimentPlan(name, distributions=("gaussian", "laplace"), n_grid=(40, 80),
                              corrupt_grid=(0, 4), replications=3, mc_samples=20_000)
    raise PlanError(f"unknown plan {name!r}; builtin plans: {', '.join(BUILTIN_PLANS)}")


BUILTIN_PLANS = ("figure1-left", "figure1-right", "figure2-left", "figure2-right", "smoke")


def _parse_list(value, cast):
    return tuple(cast(v.strip()) for v in value.split(",") if v.strip())


def _parse_bool(value):
    v = value.strip().lower()
    if v in ("1", "true", "yes", "on"):
        return True
    if v in ("0", "false", "no", "off"):
        return False
    raise PlanError(f"not a boolean: {value!r}")


_PLAN_KEYS = {
    "name": str,
    "distributions": lambda v: _parse_list(v, str),
    "n_grid": lambda v: _parse_list(v, int),
    "ratio": int,
    "s": int,
    "corrupt_grid": lambda v: _parse_list(v, int),
    "epsilon": float,
    "iterations": lambda v: "rule" if v.strip() == "rule" else int(v),
    "replications": int,
    "estimators": lambda v: _parse_list(v, str),
    "master_seed": int,
    "mc_samples": int,
    "dof": int,
    "standardize_laplace": _parse_bool,
    "record_timings": _parse_bool,
}


def parse_plan(text):
    values = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        key = key.strip()
        if not sep or key not in _PLAN_KEYS:
            raise PlanError(f"line {lineno}: expected 'key = value' with key in {sorted(_PLAN_KEYS)}")
        try:
            values[key] = _PLAN_KEYS[key](value.strip())
        except ValueError as exc:
            raise PlanError(f"line {lineno}: bad value for {key}: {exc}") from None
    if "name" not in values:
        raise PlanError("plan file must set 'name'")
    return ExperimentPlan(**values)


def load_plan(name_or_path):
    """A builtin plan name, or the path of a plan file."""
    if name_or_path in BUILTIN_PLANS:
        return builtin_plan(name_or_path)
    path = Path(name_or_path)
    if not path.is_file():
        raise PlanError(f"{name_or_path!r} is neither a builtin plan ({', '.join(BUILTIN_PLANS)}) nor a file")
    return parse_plan(path.read_text())


def cell_hash(distribution, n, p, s):
    digest = hashlib.blake2b(f"{distribution}|{n}|{p}|{s}".encode(), digest_size=8).digest()
    return int.from_bytes(digest, "little")


def cell_seed(master_seed, distribution, n, p, s, replication):
    return rng.derive_seed(master_seed, cell_hash(distribution, n, p, s), replication)


@dataclass(frozen=True)
class WorkItem:
    plan: ExperimentPlan
    distribution: str
    n: int
    n_corrupt: int
    replication: int

    @property
    def p(self):
        return self.plan.ratio * self.n

    @property
    def seed(self):
        return cell_seed(self.plan.master_seed, self.distribution, self.n, self.p, self.plan.s, self.replication)


def work_items(plan):
    for dist in plan.distributions:
        for n in plan.n_grid:
            for k in plan.corrupt_grid:
                for r in range(plan.replications):
                    yield WorkItem(plan, dist, n, k, r)


def _feature_distribution(plan, kind, p):
    if kind == "student-t":
        return FeatureDistribution.student_t(plan.dof if plan.dof is not None else student_dof(p))
    return FeatureDistribution(kind)


def _blank_row(item, estimator):
    plan = item.plan
    row = dict.fromkeys(COLUMNS)
    row.update(plan=plan.name, distribution=item.distribution, n=item.n, p=item.p, s=plan.s,
               n_corrupt=item.n_corrupt, replication=item.replication, seed=item.seed,
               estimator=estimator, status="ok", iterations=0, wall_time_ms=0)
    return row


def _evaluate(row, inst, coef, plan):
    gen = rng.substream(inst.seed, rng.EVALUATION)
    row["prediction_error"], _ = prediction_error(inst, coef, m=plan.mc_samples, gen=gen)
    row["l2_direction_error"] = l2_direction_error(coef, inst.ground_truth)
    row["margin"] = l1_margin(inst, coef)


def run_item(item):
    """Generate the instance for one work item and fit every estimator."""
    plan = item.plan
    if item.n_corrupt > item.n:
        rows = []
        for est in plan.estimators:
            row = _blank_row(item, est)
            row["status"] = "invalid: n_corrupt > n"
            rows.append(row)
        return rows
    spec = GenSpec(item.n, item.p, plan.s, item.n_corrupt,
                   _feature_distribution(plan, item.distribution, item.p),
                   item.seed, plan.standardize_laplace)
    inst = generate_instance(spec)
    rows = []
    gamma = None
    if "lp" in plan.estimators:
        row = _blank_row(item, "lp")
        t0 = time.perf_counter()
        try:
            sol = solve_max_margin(inst)
            row["iterations"] = sol.iterations
            if sol.optimal:
                gamma = sol.margin
                _evaluate(row, inst, sol.beta_hat, plan)
                row["margin_ratio"] = row["margin"] / gamma
                row["loss"] = exp_loss(inst, sol.beta_hat)
            else:
                row["status"] = sol.status
        except Exception as exc:  # failures are data
            row["status"] = f"error: {type(exc).__name__}: {exc}"
        row["wall_time_ms"] = int(round(1000 * (time.perf_counter() - t0)))
        rows.append(row)
    if "adaboost" in plan.estimators:
        row = _blank_row(item, "adaboost")
        t0 = time.perf_counter()
        try:
            T = (iterations_rule(item.n, plan.s, item.n_corrupt, item.p, plan.epsilon)
                 if plan.iterations == "rule" else plan.iterations)
            model, _ = run_adaboost(inst, BoostConfig(learning_rate=plan.epsilon, max_iterations=T),
                                    trajectory=False)
            row["iterations"] = T
            if model.degenerate:
                row["status"] = "degenerate_model"
            else:
                _evaluate(row, inst, model.coefficients, plan)
                if gamma is not None and gamma > 0:
                    row["margin_ratio"] = row["margin"] / gamma
                row["loss"] = exp_loss_arrays(inst.features / model.feature_scale, inst.labels,
                                              model.coefficients)
        except Exception as exc:
            row["status"] = f"error: {type(exc).__name__}: {exc}"
        row["wall_time_ms"] = int(round(1000 * (time.perf_counter() - t0)))
        rows.append(row)
    if not plan.record_timings:
        for row in rows:
            row["wall_time_ms"] = 0
    return rows


def _sort_key(row):
    return tuple(row[k] for k in KEY_COLUMNS)


@dataclass
class ResultTable:
    rows: list = field(default_factory=list)

    def __len__(self):
        return len(self.rows)

    def __iter__(self):
        return iter(self.rows)

    @property
    def failures(self):
        return [r for r in self.rows if r["status"] != "ok"]

    def select(self, **where):
        return ResultTable([r for r in self.rows if all(r[k] == v for k, v in where.items())])

    def values(self, column):
        return np.array([r[column] for r in self.rows], dtype=float)

    def to_csv(self):
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(COLUMNS)
        for row in self.rows:
            w.writerow([_format(row[c]) for c in COLUMNS])
        return buf.getvalue()

    def write_csv(self, path):
        Path(path).write_text(self.to_csv())

    @classmethod
    def from_csv(cls, text):
        reader = csv.DictReader(io.StringIO(text))
        if tuple(reader.fieldnames or ()) != COLUMNS:
            raise PlanError(f"CSV header must be {','.join(COLUMNS)}")
        return cls([_parse_row(r) for r in reader])

    @classmethod
    def read_csv(cls, path):
        return cls.from_csv(Path(path).read_text())


def _format(value):
    if value is None:
        return ""
    if isinstance(value, float):
        return repr(value)
    return str(value)


def _parse_row(raw):
    row = dict(raw)
    for c in INT_COLUMNS:
        row[c] = int(row[c])
    for c in FLOAT_COLUMNS:
        row[c] = float(row[c]) if row[c] != "" else None
    return row


def run_plan(plan, workers=1):
    """Run every work item of ``plan``; output is independent of ``workers``."""
    items = list(work_items(plan))
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            chunks = list(pool.map(run_item, items, chunksize=1))
    else:
        chunks = [run_item(item) for item in items]
    rows = [row for chunk in chunks for row in chunk]
    rows.sort(key=_sort_key)
    return ResultTable(rows)


def cell_statistics(values):
    """mean, median, lower and upper quartile (linear interpolation)."""
    v = np.asarray(values, dtype=float)
    q1, med, q3 = np.percentile(v, [25, 50, 75])
    return {"count": int(v.size), "mean": float(v.mean()), "median": float(med),
            "q1": float(q1), "q3": float(q3)}


def aggregate(table, x, y, where=None):
    """Per (distribution, estimator, x) statistics of column ``y`` over ok rows.

    Returns a dict keyed by ``(distribution, estimator)`` whose values are
    lists of ``(x, stats)`` sorted by x.
    """
    groups = {}
    for row in table:
        if row["status"] != "ok" or row[y] is None:
            continue
        if where and any(row[k] != v for k, v in where.items()):
            continue
        groups.setdefault((row["distribution"], row["estimator"]), {}).setdefault(row[x], []).append(row[y])
    return {key: [(xv, cell_statistics(vals)) for xv, vals in sorted(cells.items())]
            for key, cells in sorted(groups.items())}


SUMMARY_KEYS = ("plan", "distribution", "n", "p", "s", "n_corrupt", "estimator")


def summarize(table):
    """One row per cell and estimator with count, mean and median of each metric."""
    groups = {}
    for row in table:
        groups.setdefault(tuple(row[k] for k in SUMMARY_KEYS), []).append(row)
    out = []
    for key, rows in sorted(groups.items(), key=lambda kv: kv[0][1:]):
        rec = dict(zip(SUMMARY_KEYS, key))
        ok = [r for r in rows if r["status"] == "ok"]
        rec["replications"] = len(rows)
        rec["ok"] = len(ok)
        for c in METRIC_COLUMNS:
            vals = [r[c] for r in ok if r[c] is not None]
            rec[f"{c}_mean"] = float(np.mean(vals)) if vals else None
            rec[f"{c}_median"] = float(np.median(vals)) if vals else None
        out.append(rec)
    return out


def summary_csv(table):
    recs = summarize(table)
    cols = list(SUMMARY_KEYS) + ["replications", "ok"] + [
        f"{c}_{s}" for c in METRIC_COLUMNS for s in ("mean", "median")]
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(cols)
    for rec in recs:
        w.writerow([_format(rec[c]) for c in cols])
    return buf.getvalue()


def loglog_slope(x, y):
    """Least-squares slope of log(y) against log(x)."""
    lx, ly = np.log(np.asarray(x, float)), np.log(np.asarray(y, float))
    return float(np.polyfit(lx, ly, 1)[0])


def render_plot(table, panel):
    """SVG for a named panel (see :mod:`onebitboost.plotting`)."""
    from .plotting import render_panel

    return render_panel(table, panel)


__all__ = [
    "ExperimentPlan", "ResultTable", "PlanError", "builtin_plan", "load_plan", "parse_plan",
    "run_plan", "run_item", "aggregate", "summarize", "summary_csv", "render_plot",
    "cell_seed", "loglog_slope", "BUILTIN_PLANS", "COLUMNS",
]
