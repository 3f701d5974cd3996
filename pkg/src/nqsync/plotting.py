"""Dependency-free SVG figures: line plots and heatmaps.

Good enough to eyeball a sweep; the CSV files are the actual output.
"""

from __future__ import annotations

import math
from pathlib import Path
from typing import Sequence
from xml.sax.saxutils import escape

import numpy as np

PALETTE = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e")
# viridis anchors
_CMAP = np.array(
    [[68, 1, 84], [59, 82, 139], [33, 145, 140], [94, 201, 98], [253, 231, 37]], dtype=float
)
MISSING = "#bbbbbb"


def _color(t: float) -> str:
    t = min(max(t, 0.0), 1.0) * (len(_CMAP) - 1)
    i = min(int(t), len(_CMAP) - 2)
    rgb = _CMAP[i] + (t - i) * (_CMAP[i + 1] - _CMAP[i])
    return "#%02x%02x%02x" % tuple(int(round(c)) for c in rgb)


def _ticks(lo: float, hi: float, n: int = 5) -> list[float]:
    if hi <= lo:
        return [lo]
    raw = (hi - lo) / n
    mag = 10 ** math.floor(math.log10(raw))
    step = min((m * mag for m in (1, 2, 5, 10) if m * mag >= raw), default=raw)
    start = math.ceil(lo / step) * step
    return [start + k * step for k in range(int((hi - start) / step + 1e-9) + 1)]


def _text(x, y, s, anchor="middle", size=11, rotate=None) -> str:
    rot = f' transform="rotate({rotate} {x:.1f} {y:.1f})"' if rotate else ""
    return (f'<text x="{x:.1f}" y="{y:.1f}" font-size="{size}" font-family="sans-serif" '
            f'text-anchor="{anchor}"{rot}>{escape(s)}</text>')


class _Frame:
    def __init__(self, x0, y0, w, h, xlim, ylim):
        self.x0, self.y0, self.w, self.h = x0, y0, w, h
        self.xlim, self.ylim = xlim, ylim

    def px(self, x):
        lo, hi = self.xlim
        return self.x0 + (x - lo) / (hi - lo or 1.0) * self.w

    def py(self, y):
        lo, hi = self.ylim
        return self.y0 + self.h - (y - lo) / (hi - lo or 1.0) * self.h

    def axes(self, xlabel, ylabel, title) -> list[str]:
        out = [f'<rect x="{self.x0}" y="{self.y0}" width="{self.w}" height="{self.h}" '
               f'fill="none" stroke="black"/>']
        for t in _ticks(*self.xlim):
            x = self.px(t)
            out.append(f'<line x1="{x:.1f}" y1="{self.y0 + self.h}" x2="{x:.1f}" y2="{self.y0 + self.h + 4}" stroke="black"/>')
            out.append(_text(x, self.y0 + self.h + 16, f"{t:.4g}"))
        for t in _ticks(*self.ylim):
            y = self.py(t)
            out.append(f'<line x1="{self.x0 - 4}" y1="{y:.1f}" x2="{self.x0}" y2="{y:.1f}" stroke="black"/>')
            out.append(_text(self.x0 - 6, y + 4, f"{t:.4g}", anchor="end"))
        out.append(_text(self.x0 + self.w / 2, self.y0 + self.h + 34, xlabel))
        out.append(_text(self.x0 - 52, self.y0 + self.h / 2, ylabel, rotate=-90))
        out.append(_text(self.x0 + self.w / 2, self.y0 - 8, title, size=13))
        return out


def _svg(width, height, body) -> str:
    return (f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
            f'viewBox="0 0 {width} {height}">\n<rect width="100%" height="100%" fill="white"/>\n'
            + "\n".join(body) + "\n</svg>\n")


def line_plot(
    path: str | Path,
    x: Sequence[float],
    series: Sequence[tuple[str, Sequence[float | None]]],
    *,
    xlabel: str = "",
    ylabel: str = "",
    title: str = "",
) -> None:
    """Write one panel with a polyline per series; ``None`` values break the line."""
    vals = [v for _, ys in series for v in ys if v is not None and math.isfinite(v)]
    ylim = (min(vals), max(vals)) if vals else (0.0, 1.0)
    if ylim[0] == ylim[1]:
        ylim = (ylim[0] - 0.5, ylim[1] + 0.5)
    pad = 0.05 * (ylim[1] - ylim[0])
    fr = _Frame(80, 40, 520, 320, (min(x), max(x)), (ylim[0] - pad, ylim[1] + pad))
    body = fr.axes(xlabel, ylabel, title)
    for k, (label, ys) in enumerate(series):
        color = PALETTE[k % len(PALETTE)]
        segment: list[str] = []
        for xi, yi in list(zip(x, ys)) + [(None, None)]:
            if yi is None or not math.isfinite(yi):
                if len(segment) > 1:
                    body.append(f'<polyline fill="none" stroke="{color}" stroke-width="1.5" '
                                f'points="{" ".join(segment)}"/>')
                segment = []
                continue
            segment.append(f"{fr.px(xi):.2f},{fr.py(yi):.2f}")
        body.append(f'<line x1="{fr.x0 + fr.w - 110}" y1="{fr.y0 + 16 + 16 * k}" x2="{fr.x0 + fr.w - 90}" '
                    f'y2="{fr.y0 + 16 + 16 * k}" stroke="{color}" stroke-width="2"/>')
        body.append(_text(fr.x0 + fr.w - 86, fr.y0 + 20 + 16 * k, label, anchor="start"))
    Path(path).write_text(_svg(640, 420, body))


def heatmaps(
    path: str | Path,
    x: Sequence[float],
    y: Sequence[float],
    panels: Sequence[tuple[str, np.ndarray]],
    *,
    xlabel: str = "",
    ylabel: str = "",
) -> None:
    """Side-by-side heatmaps; each ``z`` has shape ``(len(x), len(y))``, NaN drawn grey."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    pw, ph, gap = 300, 260, 110
    body: list[str] = []
    for k, (title, z) in enumerate(panels):
        z = np.asarray(z, dtype=float)
        fr = _Frame(80 + k * (pw + gap), 40, pw, ph, (x[0], x[-1]), (y[0], y[-1]))
        finite = z[np.isfinite(z)]
        lo, hi = (float(finite.min()), float(finite.max())) if finite.size else (0.0, 1.0)
        dx = pw / len(x)
        dy = ph / len(y)
        for i in range(len(x)):
            for j in range(len(y)):
                v = z[i, j]
                c = _color((v - lo) / (hi - lo) if hi > lo else 0.5) if math.isfinite(v) else MISSING
                body.append(f'<rect x="{fr.x0 + i * dx:.2f}" y="{fr.y0 + ph - (j + 1) * dy:.2f}" '
                            f'width="{dx + 0.3:.2f}" height="{dy + 0.3:.2f}" fill="{c}"/>')
        body += fr.axes(xlabel, ylabel if k == 0 else "", title)
        cx = fr.x0 + pw + 10
        for s in range(20):
            body.append(f'<rect x="{cx}" y="{fr.y0 + ph - (s + 1) * ph / 20:.2f}" width="12" '
                        f'height="{ph / 20 + 0.3:.2f}" fill="{_color(s / 19)}"/>')
        body.append(_text(cx + 15, fr.y0 + ph, f"{lo:.3g}", anchor="start", size=10))
        body.append(_text(cx + 15, fr.y0 + 8, f"{hi:.3g}", anchor="start", size=10))
    width = 80 + len(panels) * (pw + gap)
    Path(path).write_text(_svg(width, ph + 100, body))
