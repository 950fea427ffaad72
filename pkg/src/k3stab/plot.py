"""Deterministic SVG figures with a CSV twin.

Everything is collected as exact rationals first.  Floats appear only when
the SVG text is written, with fixed formatting, so identical inputs give
byte-identical files.  The CSV twin has columns ``kind,label,v1..v4``:

    point      x, t
    segment    x, t_top                    (open or closed top in label)
    wall       alpha_E, x_E, center, radius_sq
    vline      x
    strip      t_top
    disk       center_x, radius_sq          (Euclidean, in y units)
    disk_D     tangent_x, top_t
    ray        x, t_min
"""

from __future__ import annotations

import csv
import io
import math
from fractions import Fraction

from .exact import as_fraction, format_rational, parse_rational
from .lattice import MukaiVector
from .model import K3Context
from .spherical import enumerate_spherical
from .walls import (
    WallType,
    boundary_component,
    disk_D,
    large_volume_path,
    printed_disk,
    region_R,
    wall,
)

WIDTH, HEIGHT, MARGIN = 1000, 600, 40
CSV_COLUMNS = ["kind", "label", "v1", "v2", "v3", "v4"]

_STYLE = {
    "point": 'fill="#1f4e79"',
    "segment": 'stroke="#1f4e79" stroke-width="1.5"',
    "wall": 'fill="none" stroke="#b03a2e" stroke-width="1"',
    "vline": 'stroke="#b03a2e" stroke-width="1"',
    "strip": 'fill="#f2d7a0" fill-opacity="0.5" stroke="none"',
    "disk": 'fill="#f2d7a0" fill-opacity="0.5" stroke="#a0742a"',
    "disk_D": 'fill="#a9cce3" fill-opacity="0.5" stroke="#2471a3"',
    "ray": 'stroke="#196f3d" stroke-width="2"',
}


def _f(v: float) -> str:
    return f"{v:.3f}"


class Figure:
    def __init__(self, ctx: K3Context, x_min, x_max, title: str = ""):
        self.ctx = ctx
        self.x_min = as_fraction(x_min)
        self.x_max = as_fraction(x_max)
        if self.x_max <= self.x_min:
            self.x_max = self.x_min + 1
        self.title = title
        self.rows: list[list] = []

    def add(self, kind: str, label: str, *values) -> None:
        self.rows.append([kind, label, *values])

    # -- output --

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(CSV_COLUMNS)
        for kind, label, *vals in self.rows:
            cells = [format_rational(v) for v in vals]
            writer.writerow([kind, label] + cells + [""] * (4 - len(cells)))
        return buf.getvalue()

    def _y_top(self) -> float:
        sqrt_d = math.sqrt(self.ctx.d)
        heights = [1 / sqrt_d]
        for kind, _, *v in self.rows:
            if kind in ("point", "segment"):
                heights.append(float(v[1]) / sqrt_d)
            elif kind == "wall":
                heights.append(math.sqrt(float(v[3])))
            elif kind == "disk":
                heights.append(2 * math.sqrt(float(v[1])))
            elif kind == "disk_D":
                heights.append(float(v[1]) / sqrt_d)
            elif kind == "strip":
                heights.append(float(v[0]) / sqrt_d)
            elif kind == "ray":
                heights.append(float(v[1]) / sqrt_d)
        return 1.2 * max(heights)

    def to_svg(self) -> str:
        sqrt_d = math.sqrt(self.ctx.d)
        x0, x1 = float(self.x_min), float(self.x_max)
        y_top = self._y_top()
        sx = (WIDTH - 2 * MARGIN) / (x1 - x0)
        sy = (HEIGHT - 2 * MARGIN) / y_top
        base = HEIGHT - MARGIN

        def px(x: float) -> float:
            return MARGIN + (x - x0) * sx

        def py(y: float) -> float:
            return base - y * sy

        out = [
            f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" '
            f'viewBox="0 0 {WIDTH} {HEIGHT}">',
            f'<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="white"/>',
            f'<clipPath id="plot"><rect x="{MARGIN}" y="{MARGIN}" width="{WIDTH - 2 * MARGIN}" '
            f'height="{HEIGHT - 2 * MARGIN}"/></clipPath>',
        ]
        if self.title:
            out.append(f'<text x="{MARGIN}" y="{MARGIN - 12}" font-size="14" font-family="monospace">'
                       f"{_escape(self.title)}</text>")
        out.append('<g clip-path="url(#plot)">')
        # shaded areas underneath, then curves, then points
        order = {"strip": 0, "disk": 0, "disk_D": 0, "wall": 1, "vline": 1, "segment": 2, "ray": 2, "point": 3}
        for kind, label, *v in sorted(self.rows, key=lambda row: order[row[0]]):
            style = _STYLE[kind]
            if kind == "point":
                out.append(f'<circle cx="{_f(px(float(v[0])))}" cy="{_f(py(float(v[1]) / sqrt_d))}" r="2.5" {style}/>')
            elif kind == "segment":
                x = _f(px(float(v[0])))
                out.append(f'<line x1="{x}" y1="{_f(base)}" x2="{x}" y2="{_f(py(float(v[1]) / sqrt_d))}" {style}/>')
            elif kind == "wall":
                lo, hi = sorted((float(v[0]), float(v[1])))
                rad = math.sqrt(float(v[3]))
                out.append(f'<path d="M {_f(px(lo))} {_f(base)} A {_f(rad * sx)} {_f(rad * sy)} 0 0 1 '
                           f'{_f(px(hi))} {_f(base)}" {style}/>')
            elif kind == "vline":
                x = _f(px(float(v[0])))
                out.append(f'<line x1="{x}" y1="{_f(base)}" x2="{x}" y2="{MARGIN}" {style}/>')
            elif kind == "strip":
                top = py(float(v[0]) / sqrt_d)
                out.append(f'<rect x="{MARGIN}" y="{_f(top)}" width="{WIDTH - 2 * MARGIN}" '
                           f'height="{_f(base - top)}" {style}/>')
            elif kind == "disk":
                rad = math.sqrt(float(v[1]))
                out.append(f'<ellipse cx="{_f(px(float(v[0])))}" cy="{_f(py(rad))}" rx="{_f(rad * sx)}" '
                           f'ry="{_f(rad * sy)}" {style}/>')
            elif kind == "disk_D":
                rad = float(v[1]) / (2 * sqrt_d)
                out.append(f'<ellipse cx="{_f(px(float(v[0])))}" cy="{_f(py(rad))}" rx="{_f(rad * sx)}" '
                           f'ry="{_f(rad * sy)}" {style}/>')
            elif kind == "ray":
                x = _f(px(float(v[0])))
                out.append(f'<line x1="{x}" y1="{_f(py(float(v[1]) / sqrt_d))}" x2="{x}" y2="{MARGIN}" {style}/>')
        out.append("</g>")
        # axes
        out.append(f'<line x1="{MARGIN}" y1="{_f(base)}" x2="{WIDTH - MARGIN}" y2="{_f(base)}" stroke="black"/>')
        out.append(f'<line x1="{MARGIN}" y1="{_f(base)}" x2="{MARGIN}" y2="{MARGIN}" stroke="black"/>')
        for x in _ticks(self.x_min, self.x_max):
            out.append(f'<text x="{_f(px(float(x)))}" y="{_f(base + 16)}" font-size="11" '
                       f'font-family="monospace" text-anchor="middle">{format_rational(x)}</text>')
        out.append("</svg>")
        return "\n".join(out) + "\n"


def _escape(text: str) -> str:
    return text.replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;")


def _ticks(lo: Fraction, hi: Fraction) -> list[Fraction]:
    step = Fraction(1)
    while (hi - lo) / step > 10:
        step *= 2
    while (hi - lo) / step < 4:
        step /= 2
    k = math.ceil(lo / step)
    out = []
    while k * step <= hi:
        out.append(k * step)
        k += 1
    return out


def _label(v: MukaiVector) -> str:
    return f"{v.r},{v.n},{v.s}"


def _spherical_in(ctx, r_max, x_min, x_max):
    if x_min > x_max:
        return []
    return enumerate_spherical(ctx, r_max, x_min, x_max)


def plot_spherical(ctx: K3Context, r_max: int, x_min, x_max) -> Figure:
    fig = Figure(ctx, x_min, x_max, f"spherical points d={ctx.d} r<={r_max}")
    for sc in _spherical_in(ctx, r_max, as_fraction(x_min), as_fraction(x_max)):
        fig.add("segment", "closed " + _label(sc.delta), sc.point.x, sc.point.t)
        fig.add("point", _label(sc.delta), sc.point.x, sc.point.t)
    return fig


def plot_boundary(ctx: K3Context, r_max: int, x_min, x_max) -> Figure:
    fig = Figure(ctx, x_min, x_max, f"boundary segments d={ctx.d} r<={r_max}")
    for sc in _spherical_in(ctx, r_max, as_fraction(x_min), as_fraction(x_max)):
        comp = boundary_component(sc.delta, ctx)
        fig.add("segment", "open " + _label(sc.delta), comp.base_x, comp.top.t)
    return fig


def plot_walls(ctx: K3Context, E: MukaiVector, r_max: int, x_min, x_max) -> Figure:
    fig = Figure(ctx, x_min, x_max, f"walls W(A,E) E=({_label(E)}) d={ctx.d} r_A<={r_max}")
    for sc in _spherical_in(ctx, r_max, as_fraction(x_min), as_fraction(x_max)):
        w = wall(sc.delta, E, ctx)
        if w.wall_type is WallType.VERTICAL:
            fig.add("vline", _label(sc.delta), w.x_E)
        else:
            fig.add("wall", f"{w.wall_type.value} {_label(sc.delta)}",
                    w.alpha_E, w.x_E, w.geodesic.center, w.geodesic.radius_sq)
        fig.add("point", _label(sc.delta), sc.point.x, sc.point.t)
    return fig


def plot_region(ctx: K3Context, v0: MukaiVector, r_max: int, paper_printed_B: bool = False) -> Figure:
    reg = region_R(v0, ctx, paper_printed_B)
    span = reg.B + 2
    fig = Figure(ctx, reg.center_x - span, reg.center_x + span,
                 f"region R v0=({_label(v0)}) d={ctx.d} B={format_rational(reg.B)}")
    fig.add("strip", "t<=1", reg.strip_top_t)
    for c in reg.disk_centers():
        fig.add("disk", "R", c, reg.half_diameter**2)
    path = large_volume_path(v0, ctx)
    if fig.x_min <= path.ray_x <= fig.x_max:
        fig.add("ray", "large volume path", path.ray_x, path.ray_t_min)
    for sc in _spherical_in(ctx, r_max, fig.x_min, fig.x_max):
        w = wall(sc.delta, v0, ctx)
        if w.wall_type is WallType.TYPE_II:
            fig.add("wall", f"TypeII {_label(sc.delta)}", w.alpha_E, w.x_E, w.geodesic.center, w.geodesic.radius_sq)
        fig.add("point", _label(sc.delta), sc.point.x, sc.point.t)
    return fig


def plot_disk(ctx: K3Context, A: MukaiVector, r_bound: int, paper_printed_disk: bool = False) -> Figure:
    disk = printed_disk(A, ctx) if paper_printed_disk else disk_D(A, ctx)
    half = max(disk.top_t, Fraction(1, 4))
    fig = Figure(ctx, disk.tangent_x - half, disk.tangent_x + half,
                 f"disk D_A A=({_label(A.normalized())}) d={ctx.d}")
    fig.add("disk_D", "printed" if paper_printed_disk else "image of t>1", disk.tangent_x, disk.top_t)
    for sc in _spherical_in(ctx, r_bound, fig.x_min, fig.x_max):
        fig.add("point", _label(sc.delta), sc.point.x, sc.point.t)
    return fig


def parse_csv(text: str) -> list[list]:
    """Read a CSV twin back into ``[kind, label, Fraction...]`` rows."""
    rows = []
    reader = csv.reader(io.StringIO(text))
    header = next(reader)
    if header != CSV_COLUMNS:
        raise ValueError(f"unexpected header {header}")
    for kind, label, *vals in reader:
        rows.append([kind, label] + [parse_rational(v) for v in vals if v != ""])
    return rows
