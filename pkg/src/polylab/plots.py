"""Dependency-free SVG plots for campaign outputs."""
from __future__ import annotations

import math
from xml.sax.saxutils import escape

import numpy as np

from .errors import DomainError

W, H = 480, 320
LEFT, RIGHT, TOP, BOTTOM = 60, 20, 30, 45


def _ticks(lo: float, hi: float, k: int = 5) -> np.ndarray:
    return np.linspace(lo, hi, k)


def _frame(title: str, xlabel: str, ylabel: str, xr, yr) -> list:
    x0, x1 = LEFT, W - RIGHT
    y0, y1 = H - BOTTOM, TOP
    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" viewBox="0 0 {W} {H}" font-family="sans-serif" font-size="11">',
        f'<rect x="0" y="0" width="{W}" height="{H}" fill="white"/>',
        f'<text x="{W / 2}" y="18" text-anchor="middle" font-size="13">{escape(title)}</text>',
        f'<line class="axis" x1="{x0}" y1="{y0}" x2="{x1}" y2="{y0}" stroke="black"/>',
        f'<line class="axis" x1="{x0}" y1="{y0}" x2="{x0}" y2="{y1}" stroke="black"/>',
        f'<text x="{(x0 + x1) / 2}" y="{H - 8}" text-anchor="middle">{escape(xlabel)}</text>',
        f'<text x="14" y="{(y0 + y1) / 2}" text-anchor="middle" transform="rotate(-90 14 {(y0 + y1) / 2})">{escape(ylabel)}</text>',
    ]
    for t in _ticks(*xr):
        px = _sx(t, xr)
        out.append(f'<text x="{px:.1f}" y="{y0 + 15}" text-anchor="middle">{t:.3g}</text>')
    for t in _ticks(*yr):
        py = _sy(t, yr)
        out.append(f'<text x="{x0 - 5}" y="{py + 4:.1f}" text-anchor="end">{t:.3g}</text>')
    return out


def _sx(x, xr):
    return LEFT + (x - xr[0]) / (xr[1] - xr[0]) * (W - LEFT - RIGHT)


def _sy(y, yr):
    return H - BOTTOM - (y - yr[0]) / (yr[1] - yr[0]) * (H - TOP - BOTTOM)


def _range(v, pad=0.05):
    lo, hi = float(np.min(v)), float(np.max(v))
    if hi == lo:
        lo, hi = lo - 0.5, hi + 0.5
    d = (hi - lo) * pad
    return lo - d, hi + d


def line_svg(x, y, title="", xlabel="x", ylabel="y", fit=None) -> str:
    """Markers at ``(x, y)`` and, if ``fit = (a, b)``, the line ``y = a x + b``."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.size == 0 or x.size != y.size:
        raise DomainError("line plot needs a nonempty series with matching x and y")
    ok = np.isfinite(y)
    if not np.any(ok):
        raise DomainError("line plot needs at least one finite value")
    xr = _range(x)
    ys = [y[ok]]
    if fit is not None and all(math.isfinite(v) for v in fit):
        ys.append(fit[0] * np.array(xr) + fit[1])
    yr = _range(np.concatenate(ys))
    out = _frame(title, xlabel, ylabel, xr, yr)
    for xi, yi in zip(x[ok], y[ok]):
        out.append(f'<circle class="marker" cx="{_sx(xi, xr):.2f}" cy="{_sy(yi, yr):.2f}" r="3.5" fill="steelblue"/>')
    if fit is not None and all(math.isfinite(v) for v in fit):
        a, b = fit
        pts = " ".join(f"{_sx(t, xr):.2f},{_sy(a * t + b, yr):.2f}" for t in xr)
        out.append(f'<polyline class="fit" points="{pts}" fill="none" stroke="firebrick" stroke-dasharray="5,3"/>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def histogram_svg(values, title="", xlabel="value", bins=None) -> str:
    """Histogram with at least 10 bins."""
    v = np.asarray(values, dtype=float).ravel()
    v = v[np.isfinite(v)]
    if v.size == 0:
        raise DomainError("histogram needs a nonempty series")
    bins = max(10, int(bins or math.ceil(math.sqrt(v.size))))
    lo, hi = float(v.min()), float(v.max())
    if hi == lo:
        lo, hi = lo - 0.5, hi + 0.5
    counts, edges = np.histogram(v, bins=bins, range=(lo, hi))
    xr = (edges[0], edges[-1])
    yr = (0.0, float(counts.max()) * 1.05)
    out = _frame(title, xlabel, "count", xr, yr)
    for c, e0, e1 in zip(counts, edges[:-1], edges[1:]):
        x0, x1 = _sx(e0, xr), _sx(e1, xr)
        y = _sy(c, yr)
        out.append(
            f'<rect class="bar" x="{x0:.2f}" y="{y:.2f}" width="{max(0.0, x1 - x0 - 1):.2f}" '
            f'height="{_sy(0, yr) - y:.2f}" fill="steelblue"/>'
        )
    out.append("</svg>")
    return "\n".join(out) + "\n"


def tail_curve_svg(curve) -> str:
    """``-log p_hat`` against ``r`` with the fitted envelope.

    Underpowered points (no hits) are drawn at the rule-of-three bound ``3/M``.
    """
    p = np.where(curve.underpowered, 3.0 / curve.trials, curve.p_hat)
    return line_svg(
        curve.r_values,
        -np.log(p),
        title=f"individual tail, c'={curve.c_prime:g}, z={curve.z_mode}",
        xlabel="r",
        ylabel="-log p_hat",
        fit=(curve.slope, curve.intercept),
    )


def emit_svg(data, title: str = "", xlabel: str = "value") -> str:
    """SVG for a tail curve (line plot) or a 1-D sample (histogram)."""
    if hasattr(data, "r_values") and hasattr(data, "p_hat"):
        if len(data.r_values) == 0:
            raise DomainError("tail curve is empty")
        return tail_curve_svg(data)
    return histogram_svg(data, title=title, xlabel=xlabel)
