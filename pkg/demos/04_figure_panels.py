"""Reduced-size versions of the simulation panels, written as SVG.

The full plans (n up to 500, twenty replications, four feature laws) take
hours on one core; here the n grid is scaled by 0.2 and replications cut
to 5.  Use the CLI for the full runs:

    onebitboost experiment --plan figure2-right --out fig2r.csv
    onebitboost plot --in fig2r.csv --panel figure2-right --out fig2r.svg

    python demos/04_figure_panels.py [outdir]
"""

import dataclasses
import sys
from pathlib import Path

from onebitboost.harness import aggregate, builtin_plan, loglog_slope, run_plan, summary_csv
from onebitboost.plotting import render_panel

out = Path(sys.argv[1] if len(sys.argv) > 1 else "demo_output")
out.mkdir(exist_ok=True)

plan = dataclasses.replace(builtin_plan("figure2-right").scaled(0.2), replications=5, mc_samples=20_000)
print(f"running {plan.size} fits: n grid {plan.n_grid}, laws {plan.distributions}")
table = run_plan(plan)
table.write_csv(out / "figure2.csv")
(out / "figure2_summary.csv").write_text(summary_csv(table))
for panel in ("figure2-left", "figure2-right"):
    (out / f"{panel}.svg").write_text(render_panel(table, panel))

for (dist, est), cells in aggregate(table, "n", "margin").items():
    ns = [n for n, _ in cells]
    med = [st["median"] for _, st in cells]
    print(f"{dist:>10} {est:>8}: median margin {[round(m, 4) for m in med]} over n={ns}, "
          f"log-log slope {loglog_slope(ns, med):.2f}")
print("wrote", ", ".join(sorted(p.name for p in out.iterdir())))
