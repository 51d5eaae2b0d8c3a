"""Dependency-free SVG line charts of simulation output."""

from __future__ import annotations

from typing import Mapping, Sequence

import numpy as np

WIDTH = 720
HEIGHT = 420
MARGIN = dict(left=80, right=130, top=30, bottom=50)
COLORS = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e")


def _fmt(x: float) -> str:
    return f"{x:.2f}"


def _tick(x: float) -> str:
    return f"{x:.4g}"


def line_chart(t: Sequence[float], channels: Mapping[str, Sequence[float]], title: str = "") -> str:
    """One polyline per channel against ``t``, with axes and a legend.

    Output depends only on the inputs, so identical data gives identical
    bytes. A single sample is drawn as a point mark.
    """
    t = np.asarray(t, dtype=float)
    data = {k: np.asarray(v, dtype=float) for k, v in channels.items()}
    x0, x1 = MARGIN["left"], WIDTH - MARGIN["right"]
    y0, y1 = HEIGHT - MARGIN["bottom"], MARGIN["top"]

    tmin, tmax = (float(t.min()), float(t.max())) if t.size else (0.0, 1.0)
    if tmax == tmin:
        tmin, tmax = tmin - 0.5, tmax + 0.5
    finite = np.concatenate([v[np.isfinite(v)] for v in data.values()]) if data else np.zeros(0)
    vmin, vmax = (float(finite.min()), float(finite.max())) if finite.size else (0.0, 1.0)
    if vmax == vmin:
        pad = abs(vmax) * 0.5 or 0.5
        vmin, vmax = vmin - pad, vmax + pad

    def px(tt):
        return x0 + (tt - tmin) / (tmax - tmin) * (x1 - x0)

    def py(vv):
        return y0 - (vv - vmin) / (vmax - vmin) * (y0 - y1)

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" '
        f'viewBox="0 0 {WIDTH} {HEIGHT}">',
        f'<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="white"/>',
    ]
    if title:
        out.append(f'<text x="{WIDTH / 2:.0f}" y="18" text-anchor="middle" font-size="14">{title}</text>')

    # axes and ticks
    out.append(f'<line x1="{x0}" y1="{y0}" x2="{x1}" y2="{y0}" stroke="black"/>')
    out.append(f'<line x1="{x0}" y1="{y0}" x2="{x0}" y2="{y1}" stroke="black"/>')
    for frac in np.linspace(0.0, 1.0, 5):
        tv = tmin + frac * (tmax - tmin)
        vv = vmin + frac * (vmax - vmin)
        xp, yp = px(tv), py(vv)
        out.append(f'<line x1="{_fmt(xp)}" y1="{y0}" x2="{_fmt(xp)}" y2="{y0 + 5}" stroke="black"/>')
        out.append(
            f'<text x="{_fmt(xp)}" y="{y0 + 20}" text-anchor="middle" font-size="11">{_tick(tv)}</text>'
        )
        out.append(f'<line x1="{x0 - 5}" y1="{_fmt(yp)}" x2="{x0}" y2="{_fmt(yp)}" stroke="black"/>')
        out.append(
            f'<text x="{x0 - 8}" y="{_fmt(yp + 4)}" text-anchor="end" font-size="11">{_tick(vv)}</text>'
        )
    out.append(f'<text x="{(x0 + x1) / 2:.0f}" y="{HEIGHT - 10}" text-anchor="middle" font-size="12">t</text>')

    for idx, (name, values) in enumerate(data.items()):
        color = COLORS[idx % len(COLORS)]
        pts = [(px(a), py(b)) for a, b in zip(t, values) if np.isfinite(b)]
        if len(pts) == 1:
            pts = pts * 2
        coords = " ".join(f"{_fmt(a)},{_fmt(b)}" for a, b in pts)
        out.append(f'<polyline fill="none" stroke="{color}" stroke-width="1.5" points="{coords}"/>')
        if len(t) == 1 and pts:
            out.append(f'<circle cx="{_fmt(pts[0][0])}" cy="{_fmt(pts[0][1])}" r="3" fill="{color}"/>')
        ly = y1 + 10 + 20 * idx
        out.append(f'<line x1="{x1 + 15}" y1="{ly}" x2="{x1 + 40}" y2="{ly}" stroke="{color}" stroke-width="2"/>')
        out.append(f'<text x="{x1 + 46}" y="{ly + 4}" font-size="12">{name}</text>')

    out.append("</svg>")
    return "\n".join(out) + "\n"
