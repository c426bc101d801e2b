"""Command line entry point: ``onebitboost <subcommand> ...``.

Exit codes: 0 success, 2 usage error, 3 experiment finished with failed
cells.
"""

from __future__ import annotations

import argparse
import csv
import logging
import sys
from pathlib import Path

from . import io as fmt
from .boost import BoostConfig, iterations_rule, run_adaboost
from .core import DomainError, InvalidSpecError, Model, exp_loss_arrays, l1_margin
from .datagen import DISTRIBUTIONS, FeatureDistribution, GenSpec, generate_instance, student_dof
from .harness import PlanError, ResultTable, load_plan, run_plan, summary_csv
from .lpmargin import solve_max_margin
from .metrics import DEFAULT_MC_SAMPLES, l2_direction_error, prediction_error
from .plotting import PANELS, render_panel

EXIT_OK, EXIT_USAGE, EXIT_PARTIAL = 0, 2, 3


class UsageError(Exception):
    pass


def _cmd_gen(args):
    if args.dist == "student-t":
        dist = FeatureDistribution.student_t(args.dof if args.dof is not None else student_dof(args.p))
    else:
        if args.dof is not None:
            raise UsageError("--dof only applies to --dist student-t")
        dist = FeatureDistribution(args.dist)
    spec = GenSpec(args.n, args.p, args.s, args.corrupt, dist, args.seed, args.standardize_laplace)
    fmt.save_instance(generate_instance(spec), args.out)
    return EXIT_OK


def _cmd_fit_adaboost(args):
    inst = fmt.load_instance(args.input)
    if args.iters_rule:
        if inst.ground_truth is None:
            raise UsageError("--iters-rule needs the sparsity; pass --s or an instance with ground truth")
        s = args.s if args.s is not None else int((inst.ground_truth != 0).sum())
        T = iterations_rule(inst.n, s, inst.corruptions.size, inst.p, args.epsilon)
    elif args.iters is not None:
        T = args.iters
    else:
        raise UsageError("give --iters or --iters-rule")
    model, traj = run_adaboost(inst, BoostConfig(args.epsilon, T, args.record_every))
    if args.out_model:
        fmt.save_model(model, args.out_model)
    if args.out_trajectory:
        fmt.save_trajectory(traj, args.out_trajectory)
    if model.degenerate:
        logging.warning("AdaBoost returned all-zero coefficients; margin undefined")
    else:
        print(f"iterations={T} margin={l1_margin(inst, model.coefficients)!r} "
              f"loss={exp_loss_arrays(inst.features / model.feature_scale, inst.labels, model.coefficients)!r}")
    return EXIT_OK


def _cmd_fit_lp(args):
    inst = fmt.load_instance(args.input)
    sol = solve_max_margin(inst)
    print(f"status={sol.status} margin={sol.margin!r} duality_gap={sol.duality_gap!r} iterations={sol.iterations}")
    if sol.optimal and args.out_model:
        fmt.save_model(Model(sol.beta_hat, "lp", iterations=sol.iterations), args.out_model)
    if args.out_certificate:
        with open(args.out_certificate, "w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["sample", "dual_weight"])
            for i, v in enumerate(sol.dual_weights):
                w.writerow([i, repr(float(v))])
            w.writerow(["gamma", repr(float(sol.margin))])
            w.writerow(["duality_gap", repr(float(sol.duality_gap))])
            w.writerow(["status", sol.status])
    return EXIT_OK if sol.status != "numerically_degenerate" else EXIT_PARTIAL


def _cmd_eval(args):
    inst = fmt.load_instance(args.input)
    model = fmt.load_model(args.model)
    if inst.ground_truth is None:
        raise UsageError("instance has no ground truth to evaluate against")
    coef = model.coefficients
    err, method = prediction_error(inst, coef, m=args.mc_samples)
    row = {
        "estimator": model.estimator_tag,
        "prediction_error": repr(err),
        "prediction_error_method": method,
        "l2_direction_error": repr(l2_direction_error(coef, inst.ground_truth)),
        "margin": repr(l1_margin(inst, coef)),
        "loss": repr(exp_loss_arrays(inst.features / model.feature_scale, inst.labels, coef)),
    }
    if args.out:
        with open(args.out, "w", newline="") as fh:
            w = csv.DictWriter(fh, fieldnames=list(row), lineterminator="\n")
            w.writeheader()
            w.writerow(row)
    else:
        print(",".join(row))
        print(",".join(row.values()))
    return EXIT_OK


def _cmd_experiment(args):
    plan = load_plan(args.plan)
    if args.scale != 1.0:
        plan = plan.scaled(args.scale)
    if args.timings:
        from dataclasses import replace

        plan = replace(plan, record_timings=True)
    table = run_plan(plan, workers=args.workers)
    out = Path(args.out)
    table.write_csv(out)
    out.with_name(out.stem + "_summary.csv").write_text(summary_csv(table))
    failures = table.failures
    if failures:
        logging.warning("%d of %d rows failed", len(failures), len(table))
        return EXIT_PARTIAL
    return EXIT_OK


def _cmd_plot(args):
    table = ResultTable.read_csv(args.input)
    Path(args.out).write_text(render_panel(table, args.panel))
    return EXIT_OK


def build_parser():
    p = argparse.ArgumentParser(prog="onebitboost", description=__doc__.splitlines()[0])
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen", help="generate a synthetic instance")
    g.add_argument("--dist", choices=DISTRIBUTIONS, default="gaussian")
    g.add_argument("--n", type=int, required=True)
    g.add_argument("--p", type=int, required=True)
    g.add_argument("--s", type=int, default=5)
    g.add_argument("--corrupt", type=int, default=0)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--dof", type=int)
    g.add_argument("--standardize-laplace", action="store_true")
    g.add_argument("--out", required=True, help="output path (.csv for CSV, otherwise MBCS1)")
    g.set_defaults(func=_cmd_gen)

    a = sub.add_parser("fit-adaboost", help="run AdaBoost on an instance")
    a.add_argument("--in", dest="input", required=True)
    a.add_argument("--epsilon", type=float, default=0.2)
    it = a.add_mutually_exclusive_group()
    it.add_argument("--iters", type=int)
    it.add_argument("--iters-rule", action="store_true", help="use the simulation iteration formula")
    a.add_argument("--s", type=int, help="sparsity for --iters-rule (default: from ground truth)")
    a.add_argument("--record-every", type=int, default=1)
    a.add_argument("--out-model")
    a.add_argument("--out-trajectory")
    a.set_defaults(func=_cmd_fit_adaboost)

    lp = sub.add_parser("fit-lp", help="solve the max-l1-margin LP")
    lp.add_argument("--in", dest="input", required=True)
    lp.add_argument("--out-model")
    lp.add_argument("--out-certificate")
    lp.set_defaults(func=_cmd_fit_lp)

    e = sub.add_parser("eval", help="evaluate a model against an instance's ground truth")
    e.add_argument("--in", dest="input", required=True)
    e.add_argument("--model", required=True)
    e.add_argument("--mc-samples", type=int, default=DEFAULT_MC_SAMPLES)
    e.add_argument("--out")
    e.set_defaults(func=_cmd_eval)

    x = sub.add_parser("experiment", help="run an experiment plan")
    x.add_argument("--plan", required=True, help="builtin plan name or plan file")
    x.add_argument("--scale", type=float, default=1.0)
    x.add_argument("--workers", type=int, default=1)
    x.add_argument("--timings", action="store_true", help="record wall times (output no longer byte-reproducible)")
    x.add_argument("--out", required=True)
    x.set_defaults(func=_cmd_experiment)

    pl = sub.add_parser("plot", help="render one panel of an experiment CSV as SVG")
    pl.add_argument("--in", dest="input", required=True)
    pl.add_argument("--panel", required=True, choices=sorted(PANELS))
    pl.add_argument("--out", required=True)
    pl.set_defaults(func=_cmd_plot)
    return p


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except (UsageError, PlanError, InvalidSpecError, DomainError, fmt.FormatError, FileNotFoundError) as exc:
        print(f"onebitboost {args.command}: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
