"""Tiny deterministic SVG writer: scatter + polyline with linear axes.

Callers pre-transform data (e.g. to log2 coordinates); this module only maps
to pixels, draws ticks and writes text.  Output bytes depend only on the
input arrays, so rerenders are reproducible.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

__all__ = ["Figure"]

_COLORS = ("#1f6fb2", "#d1495b", "#3a7d44", "#8e6c8a", "#c98a2b", "#4a4a4a")


def _fmt(x: float) -> str:
    return f"{x:.3f}"


def _ticks(lo: float, hi: float, n: int = 5) -> list[float]:
    if hi <= lo:
        return [lo]
    raw = (hi - lo) / n
    mag = 10.0 ** math.floor(math.log10(raw))
    for mult in (1.0, 2.0, 2.5, 5.0, 10.0):
        if mag * mult >= raw:
            step = mag * mult
            break
    first = math.ceil(lo / step) * step
    out = []
    t = first
    while t <= hi + 1e-12 * step:
        out.append(round(t, 12))
        t += step
    return out


@dataclass
class Figure:
    title: str = ""
    xlabel: str = ""
    ylabel: str = ""
    width: int = 640
    height: int = 440
    _series: list = field(default_factory=list)

    def line(self, xs, ys, label: str = "") -> None:
        self._series.append(("line", list(map(float, xs)), list(map(float, ys)), label))

    def scatter(self, xs, ys, label: str = "") -> None:
        self._series.append(("scatter", list(map(float, xs)), list(map(float, ys)), label))

    def save(self, path) -> None:
        xs = [x for _, sx, _, _ in self._series for x in sx]
        ys = [y for _, _, sy, _ in self._series for y in sy]
        if not xs:
            xs, ys = [0.0, 1.0], [0.0, 1.0]
        x0, x1 = min(xs), max(xs)
        y0, y1 = min(ys), max(ys)
        if x1 == x0:
            x0, x1 = x0 - 0.5, x1 + 0.5
        if y1 == y0:
            y0, y1 = y0 - 0.5, y1 + 0.5
        padx = 0.04 * (x1 - x0)
        pady = 0.06 * (y1 - y0)
        x0, x1 = x0 - padx, x1 + padx
        y0, y1 = y0 - pady, y1 + pady
        left, right, top, bottom = 62, 16, 34, 46
        pw = self.width - left - right
        ph = self.height - top - bottom

        def px(x: float) -> float:
            return left + (x - x0) / (x1 - x0) * pw

        def py(y: float) -> float:
            return top + (y1 - y) / (y1 - y0) * ph

        parts = [
            f'<svg xmlns="http://www.w3.org/2000/svg" width="{self.width}" '
            f'height="{self.height}" viewBox="0 0 {self.width} {self.height}">',
            f'<rect width="{self.width}" height="{self.height}" fill="white"/>',
            f'<rect x="{left}" y="{top}" width="{pw}" height="{ph}" fill="none" '
            'stroke="#333" stroke-width="1"/>',
        ]
        for t in _ticks(x0, x1):
            x = px(t)
            parts.append(
                f'<line x1="{_fmt(x)}" y1="{top + ph}" x2="{_fmt(x)}" '
                f'y2="{top + ph + 5}" stroke="#333"/>'
            )
            parts.append(
                f'<text x="{_fmt(x)}" y="{top + ph + 18}" font-size="11" '
                f'text-anchor="middle" font-family="sans-serif">{t:g}</text>'
            )
        for t in _ticks(y0, y1):
            y = py(t)
            parts.append(
                f'<line x1="{left - 5}" y1="{_fmt(y)}" x2="{left}" y2="{_fmt(y)}" stroke="#333"/>'
            )
            parts.append(
                f'<text x="{left - 8}" y="{_fmt(y + 4)}" font-size="11" '
                f'text-anchor="end" font-family="sans-serif">{t:g}</text>'
            )
        for k, (kind, sx, sy, label) in enumerate(self._series):
            color = _COLORS[k % len(_COLORS)]
            if kind == "line":
                pts = " ".join(f"{_fmt(px(x))},{_fmt(py(y))}" for x, y in zip(sx, sy))
                parts.append(
                    f'<polyline points="{pts}" fill="none" stroke="{color}" stroke-width="1.5"/>'
                )
            else:
                for x, y in zip(sx, sy):
                    parts.append(
                        f'<circle cx="{_fmt(px(x))}" cy="{_fmt(py(y))}" r="3" '
                        f'fill="{color}" fill-opacity="0.7"/>'
                    )
            if label:
                ly = top + 14 + 14 * k
                parts.append(
                    f'<line x1="{left + pw - 120}" y1="{ly - 4}" x2="{left + pw - 100}" '
                    f'y2="{ly - 4}" stroke="{color}" stroke-width="3"/>'
                )
                parts.append(
                    f'<text x="{left + pw - 94}" y="{ly}" font-size="11" '
                    f'font-family="sans-serif">{label}</text>'
                )
        if self.title:
            parts.append(
                f'<text x="{self.width / 2:g}" y="20" font-size="13" text-anchor="middle" '
                f'font-family="sans-serif" font-weight="bold">{self.title}</text>'
            )
        if self.xlabel:
            parts.append(
                f'<text x="{left + pw / 2:g}" y="{self.height - 10}" font-size="12" '
                f'text-anchor="middle" font-family="sans-serif">{self.xlabel}</text>'
            )
        if self.ylabel:
            parts.append(
                f'<text x="16" y="{top + ph / 2:g}" font-size="12" text-anchor="middle" '
                f'font-family="sans-serif" transform="rotate(-90 16 {top + ph / 2:g})">'
                f"{self.ylabel}</text>"
            )
        parts.append("</svg>")
        with open(path, "w") as fh:
            fh.write("\n".join(parts) + "\n")
