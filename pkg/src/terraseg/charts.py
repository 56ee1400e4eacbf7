"""Deterministic SVG renderings: dendrogram, indicator scatter, radial, box plots.

Every emitter is a pure function of its inputs: fixed-point coordinate
formatting, deterministic iteration orders, and no timestamps, so identical
inputs produce byte-identical SVG. Elements carry stable class names
(leaf-label, junction, point, legend-entry, profile, box, outlier, cut-line)
so downstream checks can count structure instead of parsing geometry.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .cluster import MergeTree
from .errors import InconsistentInput
from .taxonomy import label_sort_key

CHART_KINDS = ("dendrogram", "nl2-scatter", "radial", "boxplot")

PALETTE = (
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
    "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf",
)


@dataclass(frozen=True)
class ChartDocument:
    kind: str
    svg: bytes
    provenance: dict


def _f(v: float) -> str:
    return f"{v:.2f}"


def _esc(text: str) -> str:
    return text.replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;").replace('"', "&quot;")


class _Svg:
    def __init__(self, width: float, height: float):
        self.width = width
        self.height = height
        self.parts: list[str] = [
            '<?xml version="1.0" encoding="UTF-8"?>\n'
            f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{_f(width)}" '
            f'height="{_f(height)}" viewBox="0 0 {_f(width)} {_f(height)}">\n'
        ]

    def line(self, x1, y1, x2, y2, stroke="#333333", width=1.0, cls=""):
        c = f' class="{cls}"' if cls else ""
        self.parts.append(
            f'<line{c} x1="{_f(x1)}" y1="{_f(y1)}" x2="{_f(x2)}" y2="{_f(y2)}" '
            f'stroke="{stroke}" stroke-width="{_f(width)}"/>\n'
        )

    def path(self, d: str, stroke="#333333", width=1.0, cls="", fill="none"):
        c = f' class="{cls}"' if cls else ""
        self.parts.append(
            f'<path{c} d="{d}" fill="{fill}" stroke="{stroke}" stroke-width="{_f(width)}"/>\n'
        )

    def circle(self, cx, cy, r, fill, cls=""):
        c = f' class="{cls}"' if cls else ""
        self.parts.append(f'<circle{c} cx="{_f(cx)}" cy="{_f(cy)}" r="{_f(r)}" fill="{fill}"/>\n')

    def rect(self, x, y, w, h, fill="none", stroke="#333333", cls=""):
        c = f' class="{cls}"' if cls else ""
        self.parts.append(
            f'<rect{c} x="{_f(x)}" y="{_f(y)}" width="{_f(w)}" height="{_f(h)}" '
            f'fill="{fill}" stroke="{stroke}"/>\n'
        )

    def polygon(self, points: list[tuple[float, float]], stroke, fill, cls=""):
        c = f' class="{cls}"' if cls else ""
        pts = " ".join(f"{_f(x)},{_f(y)}" for x, y in points)
        self.parts.append(
            f'<polygon{c} points="{pts}" fill="{fill}" fill-opacity="0.25" stroke="{stroke}"/>\n'
        )

    def text(self, x, y, content, size=10.0, anchor="middle", cls="", rotate: float | None = None):
        c = f' class="{cls}"' if cls else ""
        transform = f' transform="rotate({_f(rotate)} {_f(x)} {_f(y)})"' if rotate is not None else ""
        self.parts.append(
            f'<text{c} x="{_f(x)}" y="{_f(y)}" font-family="sans-serif" font-size="{_f(size)}" '
            f'text-anchor="{anchor}"{transform}>{_esc(str(content))}</text>\n'
        )

    def render(self) -> bytes:
        return ("".join(self.parts) + "</svg>\n").encode("utf-8")


def color_for(label: str, labels: tuple[str, ...]) -> str:
    ordered = sorted(set(labels), key=label_sort_key)
    return PALETTE[ordered.index(label) % len(PALETTE)]


def _render_dendrogram(inputs: dict) -> bytes:
    tree: MergeTree = inputs["tree"]
    leaf_names = inputs.get("leaf_names")
    cut_height = inputs.get("cut_height")
    n = tree.n_leaves
    names = leaf_names if leaf_names is not None else [str(i) for i in range(n)]
    if len(names) != n:
        raise InconsistentInput(f"{len(names)} leaf names for {n} leaves")

    order = tree.leaf_order()
    margin, label_h = 40.0, 60.0
    spacing = max(900.0 / max(n, 1), 4.0)
    width = margin * 2 + spacing * (n - 1 if n > 1 else 1)
    plot_h = 420.0
    height = margin + plot_h + label_h
    hmax = max((m.height for m in tree.merges), default=1.0) or 1.0

    def y_of(h: float) -> float:
        return margin + plot_h * (1.0 - h / hmax)

    svg = _Svg(width, height)
    xs = {leaf: margin + spacing * pos for pos, leaf in enumerate(order)}
    ys = {leaf: y_of(0.0) for leaf in range(n)}
    for k, m in enumerate(tree.merges):
        node = n + k
        xl, xr = xs[m.left], xs[m.right]
        yl, yr = ys[m.left], ys[m.right]
        ym = y_of(m.height)
        svg.path(
            f"M {_f(xl)} {_f(yl)} L {_f(xl)} {_f(ym)} L {_f(xr)} {_f(ym)} L {_f(xr)} {_f(yr)}",
            cls="junction",
        )
        xs[node] = (xl + xr) / 2.0
        ys[node] = ym
    for pos, leaf in enumerate(order):
        svg.text(
            xs[leaf],
            margin + plot_h + 12.0,
            names[leaf],
            size=min(spacing * 0.9, 10.0),
            anchor="end",
            cls="leaf-label",
            rotate=-90.0,
        )
    if cut_height is not None:
        svg.line(margin / 2, y_of(float(cut_height)), width - margin / 2, y_of(float(cut_height)),
                 stroke="#d62728", width=1.5, cls="cut-line")
    svg.text(width / 2, 14.0, f"merge tree ({tree.linkage} linkage, squared-distance heights)", size=12.0)
    return svg.render()


def _render_scatter(inputs: dict) -> bytes:
    entity_ids: list[int] = list(inputs["entity_ids"])
    values: list[float] = [float(v) for v in inputs["values"]]
    labels: list[str] = list(inputs["labels"])
    highlights = set(inputs.get("highlight_ids", ()))
    if not (len(entity_ids) == len(values) == len(labels)):
        raise InconsistentInput("entity_ids, values, and labels must have equal length")

    margin = 50.0
    plot_w, plot_h = 720.0, 420.0
    width, height = margin * 2 + plot_w + 140.0, margin * 2 + plot_h
    xmin, xmax = min(entity_ids), max(entity_ids)
    xspan = (xmax - xmin) or 1

    def x_of(eid: int) -> float:
        return margin + plot_w * (eid - xmin) / xspan

    def y_of(v: float) -> float:
        return margin + plot_h * (1.0 - v / 100.0)

    svg = _Svg(width, height)
    svg.line(margin, margin, margin, margin + plot_h)
    svg.line(margin, margin + plot_h, margin + plot_w, margin + plot_h)
    for tick in (0, 25, 50, 75, 100):
        svg.text(margin - 8.0, y_of(tick) + 3.0, str(tick), size=9.0, anchor="end")
    distinct = tuple(sorted(set(labels), key=label_sort_key))
    for eid, v, lab in zip(entity_ids, values, labels):
        svg.circle(x_of(eid), y_of(v), 2.5, color_for(lab, distinct), cls="point")
    for eid, v in zip(entity_ids, values):
        if eid in highlights:
            svg.rect(x_of(eid) - 4.0, y_of(v) - 4.0, 8.0, 8.0, fill="none", stroke="#000000",
                     cls="highlight")
    legend_x = margin + plot_w + 20.0
    for i, lab in enumerate(distinct):
        y = margin + 16.0 * i
        svg.circle(legend_x, y, 4.0, color_for(lab, distinct), cls="legend-entry")
        svg.text(legend_x + 10.0, y + 3.0, lab, size=10.0, anchor="start")
    svg.text(width / 2, 16.0, "separation indicator by entity", size=12.0)
    return svg.render()


def _render_radial(inputs: dict) -> bytes:
    profiles: dict = inputs["profiles"]  # label -> [(code, value 0..100), ...]
    labels = tuple(sorted(profiles, key=label_sort_key))
    if not labels:
        raise InconsistentInput("no profiles to draw")
    p = len(profiles[labels[0]])
    for lab in labels:
        if len(profiles[lab]) != p:
            raise InconsistentInput("profiles must all have the same attribute count")

    size = 520.0
    cx = cy = size / 2.0
    radius = size / 2.0 - 70.0

    def vertex(a: int, value: float) -> tuple[float, float]:
        angle = -math.pi / 2.0 + 2.0 * math.pi * a / p
        r = radius * value / 100.0
        return (cx + r * math.cos(angle), cy + r * math.sin(angle))

    svg = _Svg(size + 160.0, size)
    for ring in (25, 50, 75, 100):
        pts = [vertex(a, ring) for a in range(p)]
        svg.polygon(pts, stroke="#cccccc", fill="none", cls="grid-ring")
    for a in range(p):
        x, y = vertex(a, 100.0)
        svg.line(cx, cy, x, y, stroke="#dddddd", width=0.5)
        lx, ly = vertex(a, 112.0)
        svg.text(lx, ly, profiles[labels[0]][a][0], size=9.0)
    for lab in labels:
        pts = [vertex(a, float(profiles[lab][a][1])) for a in range(p)]
        svg.polygon(pts, stroke=color_for(lab, labels), fill=color_for(lab, labels), cls="profile")
    for i, lab in enumerate(labels):
        y = 30.0 + 16.0 * i
        svg.circle(size + 30.0, y, 4.0, color_for(lab, labels), cls="legend-entry")
        svg.text(size + 40.0, y + 3.0, lab, size=10.0, anchor="start")
    return svg.render()


def _render_boxplot(inputs: dict) -> bytes:
    # stats: label -> list of BoxplotSummary-as-dict, one per attribute
    stats: dict = inputs["stats"]
    codes: list[str] = list(inputs["codes"])
    labels = tuple(sorted(stats, key=label_sort_key))
    if not labels:
        raise InconsistentInput("no box-plot groups to draw")
    for lab in labels:
        if len(stats[lab]) != len(codes):
            raise InconsistentInput("one summary per attribute required")

    panel_w, panel_h, pad = 240.0, 150.0, 36.0
    cols = 3
    rows = (len(codes) + cols - 1) // cols
    width = pad + cols * (panel_w + pad)
    height = pad + rows * (panel_h + pad)
    svg = _Svg(width, height)
    box_w = panel_w / (len(labels) + 1) * 0.6

    for a, code in enumerate(codes):
        px = pad + (a % cols) * (panel_w + pad)
        py = pad + (a // cols) * (panel_h + pad)
        svg.rect(px, py, panel_w, panel_h, fill="none", stroke="#bbbbbb", cls="panel")
        svg.text(px + panel_w / 2, py - 4.0, code, size=10.0)
        extents: list[float] = []
        for lab in labels:
            s = stats[lab][a]
            extents.extend((s["whisker_low"], s["whisker_high"]))
            extents.extend(v for _, v in s["outliers"])
        lo, hi = min(extents), max(extents)
        if not hi > lo:
            lo, hi = lo - 1.0, hi + 1.0
        span = hi - lo

        def y_of(v: float) -> float:
            return py + panel_h - (v - lo) / span * (panel_h - 16.0) - 8.0

        for li, lab in enumerate(labels):
            s = stats[lab][a]
            x = px + panel_w * (li + 1) / (len(labels) + 1)
            color = color_for(lab, labels)
            svg.line(x, y_of(s["whisker_low"]), x, y_of(s["q1"]), stroke=color)
            svg.line(x, y_of(s["q3"]), x, y_of(s["whisker_high"]), stroke=color)
            svg.rect(x - box_w / 2, y_of(s["q3"]), box_w, y_of(s["q1"]) - y_of(s["q3"]),
                     fill="none", stroke=color, cls="box")
            svg.line(x - box_w / 2, y_of(s["median"]), x + box_w / 2, y_of(s["median"]),
                     stroke=color, width=1.5)
            for _, v in s["outliers"]:
                svg.circle(x, y_of(v), 1.8, color, cls="outlier")
    for i, lab in enumerate(labels):
        svg.circle(pad + 90.0 * i + 6.0, height - 10.0, 4.0, color_for(lab, labels), cls="legend-entry")
        svg.text(pad + 90.0 * i + 16.0, height - 7.0, lab, size=10.0, anchor="start")
    return svg.render()


_RENDERERS = {
    "dendrogram": _render_dendrogram,
    "nl2-scatter": _render_scatter,
    "radial": _render_radial,
    "boxplot": _render_boxplot,
}


def render_chart(kind: str, inputs: dict, provenance: dict | None = None) -> ChartDocument:
    """Render one chart kind from its inputs; identical inputs give identical bytes."""
    if kind not in _RENDERERS:
        raise InconsistentInput(f"unknown chart kind {kind!r}; expected one of {CHART_KINDS}")
    try:
        svg = _RENDERERS[kind](dict(inputs))
    except KeyError as exc:
        raise InconsistentInput(f"missing input {exc} for chart kind {kind!r}") from None
    return ChartDocument(kind=kind, svg=svg, provenance=dict(provenance or {}))
