"""SVG rendering of frugality curves, Pareto scatter plots and ordered heat maps.

Output is byte-stable: coordinates are printed with 4 significant digits and
nothing time- or environment-dependent is embedded.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from os import PathLike
from typing import Sequence
from xml.sax.saxutils import escape, quoteattr

import numpy as np

from .frugality import FrugalityCurve, line_crossing
from .pareto import ParetoFront, ParetoPoint

PALETTE = (
    "#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd",
    "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf",
)

#: score -> RGB; white at -1, yellow at 0, red at +1
DEFAULT_STOPS: tuple[tuple[float, tuple[int, int, int]], ...] = (
    (-1.0, (255, 255, 255)),
    (0.0, (255, 255, 0)),
    (1.0, (255, 0, 0)),
)

MARGIN_LEFT, MARGIN_RIGHT, MARGIN_TOP, MARGIN_BOTTOM = 70, 170, 40, 50


@dataclass(frozen=True)
class PlotSpec:
    title: str = ""
    x_label: str = ""
    y_label: str = ""
    width: int = 720
    height: int = 480
    y_log10: bool = False
    legend: tuple[str, ...] = ()

    def __post_init__(self) -> None:
        if self.width <= 0 or self.height <= 0:
            raise ValueError("plot dimensions must be positive")
        object.__setattr__(self, "legend", tuple(self.legend))
        if len(set(self.legend)) != len(self.legend):
            raise ValueError("legend entries must be unique")


@dataclass(frozen=True)
class HeatmapSpec:
    """Axis ids of the score matrix plus the display order of each axis."""

    row_ids: tuple[str, ...]
    column_ids: tuple[str, ...]
    row_order: tuple[str, ...]
    column_order: tuple[str, ...]
    stops: tuple[tuple[float, tuple[int, int, int]], ...] = DEFAULT_STOPS
    title: str = ""
    cell: int = 14

    def __post_init__(self) -> None:
        for name in ("row_ids", "column_ids", "row_order", "column_order"):
            object.__setattr__(self, name, tuple(getattr(self, name)))
        if sorted(self.row_order) != sorted(self.row_ids) or len(set(self.row_ids)) != len(self.row_ids):
            raise ValueError("row order is not a permutation of the row ids")
        if sorted(self.column_order) != sorted(self.column_ids) or len(set(self.column_ids)) != len(self.column_ids):
            raise ValueError("column order is not a permutation of the column ids")
        values = [v for v, _ in self.stops]
        if len(values) < 2 or any(b <= a for a, b in zip(values, values[1:])):
            raise ValueError("color stops need at least two strictly ascending values")


def fmt(v: float) -> str:
    s = format(float(v), ".4g")
    return "0" if s == "-0" else s


def _write(doc: str, sink) -> str:
    if sink is None:
        return doc
    if isinstance(sink, (str, PathLike)):
        with open(sink, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(doc)
    else:
        sink.write(doc)
    return doc


def _document(width: int, height: int, body: list[str], title: str) -> str:
    head = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}" font-family="sans-serif" font-size="11">',
        f'<rect x="0" y="0" width="{width}" height="{height}" fill="#ffffff"/>',
    ]
    if title:
        head.append(f'<text x="{fmt(width / 2)}" y="22" text-anchor="middle" font-size="14">{escape(title)}</text>')
    return "\n".join(head + body + ["</svg>"]) + "\n"


class _Axes:
    """Linear map from data space onto the plot rectangle."""

    def __init__(self, spec: PlotSpec, x_range, y_range):
        self.x0, self.x1 = MARGIN_LEFT, spec.width - MARGIN_RIGHT
        self.y0, self.y1 = spec.height - MARGIN_BOTTOM, MARGIN_TOP
        self.xmin, self.xmax = _pad(*x_range)
        self.ymin, self.ymax = _pad(*y_range)

    def px(self, x: float) -> float:
        return self.x0 + (x - self.xmin) / (self.xmax - self.xmin) * (self.x1 - self.x0)

    def py(self, y: float) -> float:
        return self.y0 + (y - self.ymin) / (self.ymax - self.ymin) * (self.y1 - self.y0)

    def frame(self, spec: PlotSpec, y_tick_fmt=fmt) -> list[str]:
        out = [
            f'<rect x="{self.x0}" y="{self.y1}" width="{self.x1 - self.x0}" height="{self.y0 - self.y1}" '
            'fill="none" stroke="#000000"/>'
        ]
        for t in np.linspace(self.xmin, self.xmax, 6):
            x = fmt(self.px(t))
            out.append(f'<line x1="{x}" y1="{self.y0}" x2="{x}" y2="{self.y0 + 4}" stroke="#000000"/>')
            out.append(f'<text x="{x}" y="{self.y0 + 16}" text-anchor="middle">{fmt(t)}</text>')
        for t in np.linspace(self.ymin, self.ymax, 6):
            y = fmt(self.py(t))
            out.append(f'<line x1="{self.x0 - 4}" y1="{y}" x2="{self.x0}" y2="{y}" stroke="#000000"/>')
            out.append(f'<text x="{self.x0 - 6}" y="{y}" text-anchor="end" dominant-baseline="middle">'
                       f'{y_tick_fmt(t)}</text>')
        cx = fmt((self.x0 + self.x1) / 2)
        cy = fmt((self.y0 + self.y1) / 2)
        out.append(f'<text x="{cx}" y="{spec.height - 12}" text-anchor="middle">{escape(spec.x_label)}</text>')
        out.append(f'<text x="16" y="{cy}" text-anchor="middle" transform="rotate(-90 16 {cy})">'
                   f'{escape(spec.y_label)}</text>')
        return out


def _pad(lo: float, hi: float, min_span: float = 0.0) -> tuple[float, float]:
    if hi - lo >= max(min_span, 1e-300):
        return lo, hi
    grow = (max(min_span, 1.0) - (hi - lo)) / 2
    return lo - grow, hi + grow


def _legend(spec: PlotSpec, entries: Sequence[tuple[str, str]]) -> list[str]:
    x = spec.width - MARGIN_RIGHT + 12
    out = []
    for i, (label, color) in enumerate(entries):
        y = MARGIN_TOP + 8 + 16 * i
        out.append(f'<line x1="{x}" y1="{y}" x2="{x + 18}" y2="{y}" stroke="{color}" stroke-width="2"/>')
        out.append(f'<text x="{x + 24}" y="{y}" dominant-baseline="middle">{escape(label)}</text>')
    return out


# --------------------------------------------------------------------------- curves


def emit_curves(curves: Sequence[FrugalityCurve], spec: PlotSpec, sink=None, crossings: bool = True) -> str:
    """One polyline per curve; dashed vertical markers at pairwise crossings in range."""
    if not curves:
        raise ValueError("no curves to plot")
    grid = curves[0].grid
    if any(c.grid != grid for c in curves):
        raise ValueError("curves must share one w grid")
    scores = [s for c in curves for _, s in c.points]
    # a score span below 1 would magnify nearly flat curves into slopes
    axes = _Axes(spec, (grid[0], grid[-1]), _pad(min(scores), max(scores), 1.0))
    body = axes.frame(spec)
    if crossings:
        for i, a in enumerate(curves):
            for b in curves[i + 1:]:
                w = line_crossing(a.intercept, a.slope, b.intercept, b.slope)
                if w is None or not grid[0] <= w <= grid[-1]:
                    continue
                x = fmt(axes.px(w))
                body.append(
                    f'<line class="crossing" data-a={quoteattr(a.algorithm_id)} data-b={quoteattr(b.algorithm_id)} '
                    f'data-w="{w:.6g}" x1="{x}" y1="{axes.y1}" x2="{x}" y2="{axes.y0}" '
                    'stroke="#999999" stroke-dasharray="4 3"/>'
                )
    labels = spec.legend if spec.legend else tuple(c.algorithm_id for c in curves)
    if len(labels) != len(curves):
        raise ValueError("legend must have one entry per curve")
    entries = []
    for i, c in enumerate(curves):
        color = PALETTE[i % len(PALETTE)]
        pts = " ".join(f"{fmt(axes.px(w))},{fmt(axes.py(s))}" for w, s in c.points)
        body.append(f'<polyline class="curve" data-algorithm={quoteattr(c.algorithm_id)} points="{pts}" '
                    f'fill="none" stroke="{color}" stroke-width="1.5"/>')
        entries.append((labels[i], color))
    body += _legend(spec, entries)
    return _write(_document(spec.width, spec.height, body, spec.title), sink)


# --------------------------------------------------------------------------- pareto


def emit_pareto(points: Sequence[ParetoPoint], front: ParetoFront, spec: PlotSpec, sink=None) -> str:
    """AUC on x, time on y; front points filled and joined in time order."""
    pts = list(points)
    on_front = set(front.ids)
    for p in front.points:
        if p.algorithm_id not in {q.algorithm_id for q in pts}:
            pts.append(p)
    if not pts:
        raise ValueError("no points to plot")
    if spec.y_log10 and any(p.time_ms <= 0 for p in pts):
        raise ValueError("non-positive time cannot be drawn on a log10 axis")
    ty = (lambda t: math.log10(t)) if spec.y_log10 else (lambda t: t)
    ys = [ty(p.time_ms) for p in pts]
    axes = _Axes(spec, (min(p.auc for p in pts), max(p.auc for p in pts)), (min(ys), max(ys)))
    tick = (lambda v: fmt(10 ** v)) if spec.y_log10 else fmt
    body = axes.frame(spec, y_tick_fmt=tick)
    if len(front.points) > 1:
        coords = " ".join(f"{fmt(axes.px(p.auc))},{fmt(axes.py(ty(p.time_ms)))}" for p in front.points)
        body.append(f'<polyline class="front" points="{coords}" fill="none" stroke="#d62728" stroke-width="1.5"/>')
    for p in sorted(pts, key=lambda p: (p.time_ms, -p.auc, p.algorithm_id)):
        x, y = fmt(axes.px(p.auc)), fmt(axes.py(ty(p.time_ms)))
        if p.algorithm_id in on_front:
            body.append(f'<circle class="on-front" data-algorithm={quoteattr(p.algorithm_id)} cx="{x}" cy="{y}" '
                        'r="4" fill="#d62728" stroke="#d62728"/>')
            body.append(f'<text x="{x}" y="{y}" dx="6" dy="-6" font-size="9">{escape(p.algorithm_id)}</text>')
        else:
            body.append(f'<circle class="dominated" data-algorithm={quoteattr(p.algorithm_id)} cx="{x}" cy="{y}" '
                        'r="3.5" fill="none" stroke="#555555"/>')
    return _write(_document(spec.width, spec.height, body, spec.title), sink)


# --------------------------------------------------------------------------- heat map


def color_for(score: float, stops=DEFAULT_STOPS) -> str:
    """Piecewise-linear interpolation between stops, clamped at both ends."""
    values = [v for v, _ in stops]
    s = min(max(float(score), values[0]), values[-1])
    for (v0, c0), (v1, c1) in zip(stops, stops[1:]):
        if s <= v1:
            t = (s - v0) / (v1 - v0)
            rgb = [round(a + (b - a) * t) for a, b in zip(c0, c1)]
            return "#{:02x}{:02x}{:02x}".format(*rgb)
    return "#{:02x}{:02x}{:02x}".format(*stops[-1][1])


def emit_heatmap(scores, spec: HeatmapSpec, sink=None) -> str:
    """Grid of colored cells, rows and columns in the HeatmapSpec display order."""
    scores = np.asarray(scores, dtype=float)
    if scores.shape != (len(spec.row_ids), len(spec.column_ids)):
        raise ValueError(f"score matrix shape {scores.shape} does not match the HeatmapSpec axes")
    ri = {r: i for i, r in enumerate(spec.row_ids)}
    ci = {c: j for j, c in enumerate(spec.column_ids)}
    cell = spec.cell
    left, top = 160, 60
    label_space = 150
    width = left + cell * len(spec.column_order) + 20
    height = top + cell * len(spec.row_order) + label_space
    body = []
    for r, row in enumerate(spec.row_order):
        y = top + r * cell
        body.append(f'<text x="{left - 4}" y="{fmt(y + cell / 2)}" text-anchor="end" dominant-baseline="middle" '
                    f'font-size="9">{escape(row)}</text>')
        for c, col in enumerate(spec.column_order):
            v = scores[ri[row], ci[col]]
            body.append(f'<rect x="{left + c * cell}" y="{y}" width="{cell}" height="{cell}" '
                        f'fill="{color_for(v, spec.stops)}"><title>{escape(row)} / {escape(col)}: {fmt(v)}</title></rect>')
    base = top + cell * len(spec.row_order) + 4
    for c, col in enumerate(spec.column_order):
        x = fmt(left + c * cell + cell / 2)
        body.append(f'<text x="{x}" y="{base}" font-size="9" transform="rotate(90 {x} {base})">{escape(col)}</text>')
    return _write(_document(width, height, body, spec.title), sink)


def format_heatmap_csv(scores, spec: HeatmapSpec) -> str:
    """Plotted values in display order: one row per dataset, one column per algorithm."""
    scores = np.asarray(scores, dtype=float)
    ri = {r: i for i, r in enumerate(spec.row_ids)}
    ci = {c: j for j, c in enumerate(spec.column_ids)}
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["dataset_id"] + list(spec.column_order))
    for row in spec.row_order:
        writer.writerow([row] + [repr(float(scores[ri[row], ci[c]])) for c in spec.column_order])
    return buf.getvalue()
