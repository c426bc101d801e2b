"""Deterministic SVG line charts of per-cell medians with IQR bands.

Written by hand rather than through a plotting library so the bytes of
the output depend only on the data: no timestamps, random ids or font
metrics.  LP series are solid, AdaBoost series dash-dotted; one colour
per feature distribution.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from xml.sax.saxutils import escape

from .harness import PlanError, aggregate

WIDTH, HEIGHT = 640, 440
LEFT, RIGHT, TOP, BOTTOM = 70, 160, 40, 55

COLORS = {
    "gaussian": "#1f77b4",
    "student-t": "#d62728",
    "uniform": "#2ca02c",
    "laplace": "#ff7f0e",
    "rademacher": "#9467bd",
}
DASH = {"lp": None, "adaboost": "9,4,2,4"}


@dataclass(frozen=True)
class PanelSpec:
    name: str
    x: str
    y: str
    xlog: bool = True
    ylog: bool = True
    where: dict = field(default_factory=dict)
    title: str = ""
    xlabel: str = ""
    ylabel: str = ""


PANELS = {
    "figure1-left": PanelSpec("figure1-left", "n", "prediction_error", where={"n_corrupt": 40},
                              title="Prediction error, |O| = 40", xlabel="n", ylabel="prediction error"),
    "figure1-right": PanelSpec("figure1-right", "n_corrupt", "prediction_error", xlog=False,
                               title="Prediction error vs corruptions", xlabel="|O|",
                               ylabel="prediction error"),
    "figure2-left": PanelSpec("figure2-left", "n", "prediction_error", where={"n_corrupt": 0},
                              title="Prediction error, noiseless", xlabel="n", ylabel="prediction error"),
    "figure2-right": PanelSpec("figure2-right", "n", "margin", where={"n_corrupt": 0},
                               title="l1-margin, noiseless", xlabel="n", ylabel="margin"),
    "smoke": PanelSpec("smoke", "n", "prediction_error", title="Smoke run", xlabel="n",
                       ylabel="prediction error"),
}


def _num(v):
    return f"{v:.2f}"


def _label(v):
    return f"{v:.4g}"


class _Axis:
    def __init__(self, lo, hi, log, start, end):
        if log:
            lo, hi = math.log10(lo), math.log10(hi)
        if hi - lo < 1e-12:
            pad = 0.3 if log else max(abs(lo) * 0.1, 1.0)
            lo, hi = lo - pad, hi + pad
        else:
            pad = 0.05 * (hi - lo)
            lo, hi = lo - pad, hi + pad
        self.lo, self.hi, self.log, self.start, self.end = lo, hi, log, start, end

    def __call__(self, v):
        t = math.log10(v) if self.log else v
        return self.start + (t - self.lo) / (self.hi - self.lo) * (self.end - self.start)

    def ticks(self):
        if self.log:
            out = []
            for e in range(math.floor(self.lo), math.ceil(self.hi) + 1):
                for m in (1, 2, 5):
                    t = math.log10(m) + e
                    if self.lo <= t <= self.hi:
                        out.append(m * 10.0 ** e)
            return out
        span = self.hi - self.lo
        step = 10 ** math.floor(math.log10(span / 5))
        for m in (1, 2, 5, 10):
            if span / (m * step) <= 6:
                step *= m
                break
        first = math.ceil(self.lo / step)
        return [k * step for k in range(first, math.floor(self.hi / step) + 1)]


def _usable(v, log):
    return v is not None and math.isfinite(v) and (v > 0 or not log)


def render_panel(table, panel):
    """Return the SVG document (a string) for ``panel`` drawn from ``table``."""
    if isinstance(panel, str):
        if panel not in PANELS:
            raise PlanError(f"unknown panel {panel!r}; choose from {', '.join(PANELS)}")
        panel = PANELS[panel]
    spec = panel
    series = aggregate(table, spec.x, spec.y, spec.where)
    points = {
        key: [(x, st) for x, st in cells if _usable(x, spec.xlog) and _usable(st["median"], spec.ylog)]
        for key, cells in series.items()
    }
    points = {k: v for k, v in points.items() if v}
    if not points:
        dists = sorted({r["distribution"] for r in table})
        ests = sorted({r["estimator"] for r in table})
        ok = sum(1 for r in table if r["status"] == "ok")
        raise PlanError(
            f"panel {spec.name!r} selects no usable rows (filter {spec.where}, {ok} ok rows); "
            f"table has distributions {dists}, estimators {ests}, "
            f"n {sorted({r['n'] for r in table})}, n_corrupt {sorted({r['n_corrupt'] for r in table})}"
        )

    xs = [x for pts in points.values() for x, _ in pts]
    ys = [v for pts in points.values() for _, st in pts
          for v in (st["q1"], st["median"], st["q3"]) if _usable(v, spec.ylog)]
    ax = _Axis(min(xs), max(xs), spec.xlog, LEFT, WIDTH - RIGHT)
    ay = _Axis(min(ys), max(ys), spec.ylog, HEIGHT - BOTTOM, TOP)

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" '
        f'viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="11">',
        f'<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="white"/>',
        f'<text x="{WIDTH / 2 - RIGHT / 2:.2f}" y="22" text-anchor="middle" font-size="14">{escape(spec.title or spec.name)}</text>',
    ]
    x0, x1, y0, y1 = LEFT, WIDTH - RIGHT, HEIGHT - BOTTOM, TOP
    out.append(f'<rect x="{x0}" y="{y1}" width="{x1 - x0}" height="{y0 - y1}" fill="none" stroke="black"/>')
    for t in ax.ticks():
        px = _num(ax(t))
        out.append(f'<line x1="{px}" y1="{y0}" x2="{px}" y2="{y0 + 5}" stroke="black"/>')
        out.append(f'<text x="{px}" y="{y0 + 18}" text-anchor="middle">{_label(t)}</text>')
    for t in ay.ticks():
        py = _num(ay(t))
        out.append(f'<line x1="{x0 - 5}" y1="{py}" x2="{x0}" y2="{py}" stroke="black"/>')
        out.append(f'<line x1="{x0}" y1="{py}" x2="{x1}" y2="{py}" stroke="#dddddd"/>')
        out.append(f'<text x="{x0 - 8}" y="{py}" text-anchor="end" dominant-baseline="middle">{_label(t)}</text>')
    out.append(f'<text x="{(x0 + x1) / 2:.2f}" y="{HEIGHT - 15}" text-anchor="middle">{escape(spec.xlabel or spec.x)}</text>')
    out.append(f'<text x="18" y="{(y0 + y1) / 2:.2f}" text-anchor="middle" '
               f'transform="rotate(-90 18 {(y0 + y1) / 2:.2f})">{escape(spec.ylabel or spec.y)}</text>')

    for (dist, est), pts in sorted(points.items()):
        color = COLORS.get(dist, "#444444")
        dash = DASH.get(est)
        lower = [(ax(x), ay(st["q1"])) for x, st in pts if _usable(st["q1"], spec.ylog)]
        upper = [(ax(x), ay(st["q3"])) for x, st in pts if _usable(st["q3"], spec.ylog)]
        if len(lower) == len(pts) == len(upper) and len(pts) > 1:
            poly = " ".join(f"{_num(a)},{_num(b)}" for a, b in lower + upper[::-1])
            out.append(f'<polygon points="{poly}" fill="{color}" fill-opacity="0.12" stroke="none"/>')
        line = " ".join(f"{_num(ax(x))},{_num(ay(st['median']))}" for x, st in pts)
        dash_attr = f' stroke-dasharray="{dash}"' if dash else ""
        out.append(f'<polyline class="series" data-distribution="{escape(dist)}" data-estimator="{escape(est)}" '
                   f'points="{line}" fill="none" stroke="{color}" stroke-width="1.8"{dash_attr}/>')
        for x, st in pts:
            out.append(f'<circle cx="{_num(ax(x))}" cy="{_num(ay(st["median"]))}" r="2.5" fill="{color}"/>')

    ly = TOP + 10
    for (dist, est) in sorted(points):
        color = COLORS.get(dist, "#444444")
        dash = DASH.get(est)
        dash_attr = f' stroke-dasharray="{dash}"' if dash else ""
        lx = WIDTH - RIGHT + 12
        out.append(f'<line x1="{lx}" y1="{ly}" x2="{lx + 28}" y2="{ly}" stroke="{color}" stroke-width="1.8"{dash_attr}/>')
        out.append(f'<text x="{lx + 34}" y="{ly}" dominant-baseline="middle">{escape(dist)} ({escape(est)})</text>')
        ly += 16
    out.append("</svg>")
    return "\n".join(out) + "\n"
