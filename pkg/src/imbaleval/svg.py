"""Minimal static SVG line charts with linear, log and normal-deviate axes.

Output depends only on the data: fixed-precision coordinates, no timestamps,
no ids derived from memory addresses.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from statistics import NormalDist
from typing import Sequence
from xml.sax.saxutils import escape

__all__ = ["Axis", "Series", "line_chart_svg"]

WIDTH, HEIGHT = 640, 480
LEFT, RIGHT, TOP, BOTTOM = 72, 24, 40, 56
COLORS = ("#1f77b4", "#ff7f0e", "#2ca02c", "#d62728")

_ND = NormalDist()
_PROBIT_TICKS = (0.001, 0.01, 0.05, 0.2, 0.5, 0.8, 0.95, 0.99, 0.999)


@dataclass(frozen=True)
class Axis:
    label: str
    lo: float
    hi: float
    scale: str = "linear"  # linear | log | probit

    def __post_init__(self) -> None:
        if self.scale not in ("linear", "log", "probit"):
            raise ValueError(f"unknown axis scale {self.scale!r}")
        if not self.lo < self.hi:
            raise ValueError("axis range is empty")
        if self.scale != "linear" and self.lo <= 0:
            raise ValueError(f"{self.scale} axis needs a positive lower bound")
        if self.scale == "probit" and self.hi >= 1:
            raise ValueError("probit axis needs an upper bound below 1")

    def warp(self, v: float) -> float:
        v = min(max(v, self.lo), self.hi)
        if self.scale == "log":
            return math.log10(v)
        if self.scale == "probit":
            return _ND.inv_cdf(v)
        return v

    def fraction(self, v: float) -> float:
        lo, hi = self.warp(self.lo), self.warp(self.hi)
        return (self.warp(v) - lo) / (hi - lo)

    def ticks(self) -> list[float]:
        if self.scale == "log":
            return [10.0 ** k for k in range(math.ceil(math.log10(self.lo) - 1e-9),
                                             math.floor(math.log10(self.hi) + 1e-9) + 1)]
        if self.scale == "probit":
            return [t for t in _PROBIT_TICKS if self.lo <= t <= self.hi]
        step = _nice_step((self.hi - self.lo) / 5)
        start = math.ceil(self.lo / step - 1e-9)
        return [round(k * step, 12) for k in range(start, math.floor(self.hi / step + 1e-9) + 1)]


def _nice_step(raw: float) -> float:
    mag = 10.0 ** math.floor(math.log10(raw))
    for m in (1, 2, 2.5, 5, 10):
        if raw <= m * mag:
            return m * mag
    return 10 * mag


def _tick_text(v: float) -> str:
    if v != 0 and (abs(v) < 1e-3 or abs(v) >= 1e4):
        return f"{v:.0e}"
    return f"{v:g}"


@dataclass(frozen=True)
class Series:
    name: str
    xs: Sequence[float]
    ys: Sequence[float]


def line_chart_svg(title: str, series: Sequence[Series], x_axis: Axis, y_axis: Axis,
                   band: tuple[float, float] | None = None) -> str:
    """Render polylines on shared axes; ``band`` shades an x interval."""
    pw, ph = WIDTH - LEFT - RIGHT, HEIGHT - TOP - BOTTOM

    def px(v: float) -> float:
        return LEFT + x_axis.fraction(v) * pw

    def py(v: float) -> float:
        return TOP + (1.0 - y_axis.fraction(v)) * ph

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" '
        f'viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">',
        f'<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="#ffffff"/>',
        f'<text x="{WIDTH / 2:.2f}" y="24" text-anchor="middle" font-size="15">{escape(title)}</text>',
    ]
    if band is not None:
        x0, x1 = px(band[0]), px(band[1])
        out.append(f'<rect x="{x0:.2f}" y="{TOP}" width="{x1 - x0:.2f}" height="{ph}" '
                   'fill="#fdf2d0"/>')
    for t in x_axis.ticks():
        x = px(t)
        out.append(f'<line x1="{x:.2f}" y1="{TOP}" x2="{x:.2f}" y2="{TOP + ph}" stroke="#e5e5e5"/>')
        out.append(f'<text x="{x:.2f}" y="{TOP + ph + 16}" text-anchor="middle">{_tick_text(t)}</text>')
    for t in y_axis.ticks():
        y = py(t)
        out.append(f'<line x1="{LEFT}" y1="{y:.2f}" x2="{LEFT + pw}" y2="{y:.2f}" stroke="#e5e5e5"/>')
        out.append(f'<text x="{LEFT - 6}" y="{y + 4:.2f}" text-anchor="end">{_tick_text(t)}</text>')
    out.append(f'<rect x="{LEFT}" y="{TOP}" width="{pw}" height="{ph}" fill="none" stroke="#333333"/>')
    out.append(f'<text x="{LEFT + pw / 2:.2f}" y="{HEIGHT - 14}" text-anchor="middle">'
               f'{escape(x_axis.label)}</text>')
    out.append(f'<text x="16" y="{TOP + ph / 2:.2f}" text-anchor="middle" '
               f'transform="rotate(-90 16 {TOP + ph / 2:.2f})">{escape(y_axis.label)}</text>')
    for i, s in enumerate(series):
        color = COLORS[i % len(COLORS)]
        pts = " ".join(f"{px(x):.2f},{py(y):.2f}" for x, y in zip(s.xs, s.ys))
        out.append(f'<polyline points="{pts}" fill="none" stroke="{color}" stroke-width="1.5"/>')
        out.append(f'<text x="{LEFT + 8}" y="{TOP + 16 + 14 * i}" fill="{color}">{escape(s.name)}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
