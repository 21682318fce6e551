"""Minimal static SVG plotting (polylines and grid heatmaps).

Figures are offline artifacts, so this deliberately avoids any plotting
dependency: axes, ticks, and polylines are emitted as raw SVG.
"""

from __future__ import annotations

import numpy as np

_W, _H = 640, 400
_ML, _MR, _MT, _MB = 60, 20, 30, 45
_COLORS = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#8c564b", "#e377c2"]


def _scale(vals, lo, hi, out_lo, out_hi):
    span = hi - lo if hi > lo else 1.0
    return out_lo + (np.asarray(vals, dtype=float) - lo) / span * (out_hi - out_lo)


def _frame(title, xlabel, ylabel, xlo, xhi, ylo, yhi):
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_W}" height="{_H}" '
        f'viewBox="0 0 {_W} {_H}">',
        f'<rect width="{_W}" height="{_H}" fill="white"/>',
        f'<text x="{_W / 2}" y="18" text-anchor="middle" font-size="14">{title}</text>',
        f'<text x="{_W / 2}" y="{_H - 8}" text-anchor="middle" font-size="12">{xlabel}</text>',
        f'<text x="14" y="{_H / 2}" text-anchor="middle" font-size="12" '
        f'transform="rotate(-90 14 {_H / 2})">{ylabel}</text>',
        f'<rect x="{_ML}" y="{_MT}" width="{_W - _ML - _MR}" height="{_H - _MT - _MB}" '
        f'fill="none" stroke="black"/>',
    ]
    for i in range(5):
        fx = xlo + (xhi - xlo) * i / 4
        fy = ylo + (yhi - ylo) * i / 4
        px = _scale(fx, xlo, xhi, _ML, _W - _MR)
        py = _scale(fy, ylo, yhi, _H - _MB, _MT)
        parts.append(
            f'<text x="{px:.1f}" y="{_H - _MB + 15}" text-anchor="middle" '
            f'font-size="10">{fx:.3g}</text>'
        )
        parts.append(
            f'<text x="{_ML - 5}" y="{py:.1f}" text-anchor="end" '
            f'font-size="10">{fy:.3g}</text>'
        )
    return parts


def line_plot(path, x, series, title="", xlabel="t", ylabel="value") -> None:
    """Write a polyline plot; ``series`` is a list of (label, y-array)."""
    x = np.asarray(x, dtype=float)
    ys = np.concatenate([np.asarray(y, dtype=float).ravel() for _, y in series])
    ylo, yhi = float(ys.min()), float(ys.max())
    if yhi - ylo < 1e-12:
        ylo, yhi = ylo - 1.0, yhi + 1.0
    xlo, xhi = float(x.min()), float(x.max())
    parts = _frame(title, xlabel, ylabel, xlo, xhi, ylo, yhi)
    for i, (label, y) in enumerate(series):
        ya = np.atleast_2d(np.asarray(y, dtype=float))
        if ya.shape[0] != len(x):
            ya = ya.T if ya.shape[-1] == len(x) else ya
        color = _COLORS[i % len(_COLORS)]
        for col in np.atleast_2d(ya.T if ya.ndim > 1 and ya.shape[0] == len(x) else ya):
            px = _scale(x, xlo, xhi, _ML, _W - _MR)
            py = _scale(col, ylo, yhi, _H - _MB, _MT)
            pts = " ".join(f"{a:.2f},{b:.2f}" for a, b in zip(px, py))
            parts.append(
                f'<polyline points="{pts}" fill="none" stroke="{color}" stroke-width="1"/>'
            )
        if label:
            parts.append(
                f'<text x="{_W - _MR - 5}" y="{_MT + 14 + 13 * i}" text-anchor="end" '
                f'font-size="11" fill="{color}">{label}</text>'
            )
    parts.append("</svg>")
    with open(path, "w") as fh:
        fh.write("\n".join(parts))


def heatmap(path, Z, title="", xlabel="", ylabel="") -> None:
    """Write a grid heatmap of the 2-D array Z (blue = low, red = high)."""
    Z = np.asarray(Z, dtype=float)
    lo, hi = float(Z.min()), float(Z.max())
    span = hi - lo if hi > lo else 1.0
    ny, nx = Z.shape
    cw = (_W - _ML - _MR) / nx
    ch = (_H - _MT - _MB) / ny
    parts = _frame(title, xlabel, ylabel, 0, nx, 0, ny)
    for i in range(ny):
        for j in range(nx):
            f = (Z[i, j] - lo) / span
            r, b = int(255 * f), int(255 * (1 - f))
            parts.append(
                f'<rect x="{_ML + j * cw:.2f}" y="{_H - _MB - (i + 1) * ch:.2f}" '
                f'width="{cw:.2f}" height="{ch:.2f}" fill="rgb({r},60,{b})"/>'
            )
    parts.append(
        f'<text x="{_W - _MR}" y="{_MT - 8}" text-anchor="end" font-size="10">'
        f"range [{lo:.4g}, {hi:.4g}]</text>"
    )
    parts.append("</svg>")
    with open(path, "w") as fh:
        fh.write("\n".join(parts))
