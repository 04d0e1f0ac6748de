"""Minimal hand-written SVG for survival curves on a log scale."""

from __future__ import annotations

import math
from xml.sax.saxutils import escape

import numpy as np

WIDTH, HEIGHT = 640, 420
LEFT, RIGHT, TOP, BOTTOM = 70, 20, 20, 50


def _ticks(lo: float, hi: float, count: int = 5) -> list[float]:
    if hi <= lo:
        return [lo]
    step = (hi - lo) / count
    mag = 10 ** math.floor(math.log10(step))
    step = min((m * mag for m in (1, 2, 5, 10) if m * mag >= step), default=step)
    start = math.ceil(lo / step) * step
    return [start + k * step for k in range(int((hi - start) / step + 1e-9) + 1)]


def survival_svg(fraction: np.ndarray, fit_slope: float | None = None, fit_intercept: float = 0.0,
                 spectral_rho: float | None = None, title: str = "") -> str:
    """ln(survival fraction) against step, plus the fitted line and the spectral slope."""
    t = np.arange(fraction.size)
    pos = fraction > 0
    y = np.log(fraction[pos])
    x = t[pos]
    y_lo = float(min(y.min(initial=0.0), 0.0))
    x_hi = float(max(t[-1], 1))
    if fit_slope is not None:
        y_lo = min(y_lo, -fit_slope * x_hi - fit_intercept)
    y_lo = y_lo - 0.05 * max(1e-9, -y_lo) if y_lo < 0 else -1.0
    pw, ph = WIDTH - LEFT - RIGHT, HEIGHT - TOP - BOTTOM

    def px(a: float) -> float:
        return LEFT + pw * a / x_hi

    def py(b: float) -> float:
        return TOP + ph * (b / y_lo)

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">',
        '<rect width="100%" height="100%" fill="white"/>',
        f'<line x1="{LEFT}" y1="{TOP}" x2="{LEFT}" y2="{TOP + ph}" stroke="black"/>',
        f'<line x1="{LEFT}" y1="{TOP + ph}" x2="{LEFT + pw}" y2="{TOP + ph}" stroke="black"/>',
    ]
    for v in _ticks(0.0, x_hi):
        out.append(f'<text x="{px(v):.1f}" y="{TOP + ph + 18}" font-size="11" text-anchor="middle">{v:g}</text>')
    for v in _ticks(y_lo, 0.0):
        out.append(f'<text x="{LEFT - 6}" y="{py(v) + 4:.1f}" font-size="11" text-anchor="end">{v:.3g}</text>')
    out.append(f'<text x="{LEFT + pw / 2}" y="{HEIGHT - 10}" font-size="12" text-anchor="middle">step t</text>')
    out.append(f'<text x="16" y="{TOP + ph / 2}" font-size="12" transform="rotate(-90 16 {TOP + ph / 2})" '
               'text-anchor="middle">ln s_t</text>')
    if title:
        out.append(f'<text x="{LEFT + pw / 2}" y="{TOP + 12}" font-size="13" text-anchor="middle">{escape(title)}</text>')
    pts = " ".join(f"{px(a):.2f},{py(b):.2f}" for a, b in zip(x.tolist(), y.tolist()))
    out.append(f'<polyline fill="none" stroke="#1f77b4" stroke-width="1.5" points="{pts}"/>')
    legend = [("#1f77b4", "simulated")]
    if fit_slope is not None:
        out.append(f'<line x1="{px(0):.2f}" y1="{py(-fit_intercept):.2f}" x2="{px(x_hi):.2f}" '
                   f'y2="{py(-fit_intercept - fit_slope * x_hi):.2f}" stroke="#d62728" stroke-dasharray="6 3"/>')
        legend.append(("#d62728", f"fit, rho = {fit_slope:.5f}"))
    if spectral_rho is not None and math.isfinite(spectral_rho):
        out.append(f'<line x1="{px(0):.2f}" y1="{py(-fit_intercept):.2f}" x2="{px(x_hi):.2f}" '
                   f'y2="{py(-fit_intercept - spectral_rho * x_hi):.2f}" stroke="#2ca02c" stroke-dasharray="2 2"/>')
        legend.append(("#2ca02c", f"spectral, rho = {spectral_rho:.5f}"))
    for k, (color, label) in enumerate(legend):
        ly = TOP + ph - 14 * (len(legend) - k)
        out.append(f'<line x1="{LEFT + pw - 190}" y1="{ly}" x2="{LEFT + pw - 170}" y2="{ly}" stroke="{color}" stroke-width="2"/>')
        out.append(f'<text x="{LEFT + pw - 164}" y="{ly + 4}" font-size="11">{escape(label)}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
