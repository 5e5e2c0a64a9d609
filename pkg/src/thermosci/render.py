"""Minimal SVG heatmaps for sweep grids.

Diverging color map centered at zero (purple favors the second strategy,
yellow the first), zero contours overdrawn in black, and a dashed white
vertical rule at the regime-marker budget. Output is plain hand-assembled
SVG so identical grids render byte-identically.
"""

from __future__ import annotations

import math

import numpy as np

from .toy_model import SweepGrid

_NEG = (68, 1, 84)      # strong negative
_MID = (247, 247, 247)  # zero
_POS = (253, 231, 37)   # strong positive


def _blend(a, b, t: float) -> str:
    rgb = tuple(int(round(a[i] + (b[i] - a[i]) * t)) for i in range(3))
    return "#{:02x}{:02x}{:02x}".format(*rgb)


def _color(value: float, vmax: float) -> str:
    if vmax <= 0.0:
        return _blend(_MID, _MID, 0.0)
    t = max(-1.0, min(1.0, value / vmax))
    if t >= 0.0:
        return _blend(_MID, _POS, t)
    return _blend(_MID, _NEG, -t)


def render_heatmap_svg(grid: SweepGrid, path, width: int = 720, height: int = 480) -> None:
    """Render one grid to an SVG file."""
    left, right, top, bottom = 60.0, 20.0, 36.0, 48.0
    plot_w = width - left - right
    plot_h = height - top - bottom
    n_x = grid.omega.size
    n_y = grid.axis2.size
    cell_w = plot_w / n_x
    cell_h = plot_h / n_y
    vmax = float(np.max(np.abs(grid.delta)))

    log_x = grid.omega_scale == "log"
    if log_x:
        x_lo, x_hi = math.log(grid.omega[0]), math.log(grid.omega[-1])
    else:
        x_lo, x_hi = float(grid.omega[0]), float(grid.omega[-1])
    y_lo, y_hi = float(grid.axis2[0]), float(grid.axis2[-1])

    def x_px(omega: float) -> float:
        v = math.log(omega) if log_x else omega
        frac = (v - x_lo) / (x_hi - x_lo) if x_hi > x_lo else 0.0
        return left + cell_w / 2.0 + frac * (plot_w - cell_w)

    def y_px(a2: float) -> float:
        frac = (a2 - y_lo) / (y_hi - y_lo) if y_hi > y_lo else 0.0
        # axis2 grows upward on the plot
        return top + plot_h - cell_h / 2.0 - frac * (plot_h - cell_h)

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">',
        f'<rect x="0" y="0" width="{width}" height="{height}" fill="white"/>',
    ]
    title = grid.pair or "sweep"
    parts.append(
        f'<text x="{left:.1f}" y="20" font-family="monospace" font-size="13">'
        f'delta-eta heatmap: {title}</text>'
    )

    for j in range(n_y):
        cy = y_px(float(grid.axis2[j]))
        for i in range(n_x):
            cx = x_px(float(grid.omega[i]))
            color = _color(float(grid.delta[j, i]), vmax)
            parts.append(
                f'<rect x="{cx - cell_w / 2.0:.2f}" y="{cy - cell_h / 2.0:.2f}" '
                f'width="{cell_w:.2f}" height="{cell_h:.2f}" fill="{color}"/>'
            )

    if grid.omega[0] <= grid.regime_marker_omega <= grid.omega[-1]:
        xm = x_px(grid.regime_marker_omega)
        parts.append(
            f'<line x1="{xm:.2f}" y1="{top:.2f}" x2="{xm:.2f}" y2="{top + plot_h:.2f}" '
            f'stroke="white" stroke-width="1.5" stroke-dasharray="6,4"/>'
        )

    for line in grid.contours:
        pts = " ".join(f"{x_px(float(x)):.2f},{y_px(float(y)):.2f}" for x, y in line)
        parts.append(
            f'<polyline points="{pts}" fill="none" stroke="black" stroke-width="1.2"/>'
        )

    parts.append(
        f'<rect x="{left:.1f}" y="{top:.1f}" width="{plot_w:.1f}" height="{plot_h:.1f}" '
        f'fill="none" stroke="black" stroke-width="1"/>'
    )
    axis_label = grid.axis2_kind
    parts.append(
        f'<text x="{left:.1f}" y="{height - 14}" font-family="monospace" font-size="12">'
        f'omega: {grid.omega[0]:.3g} .. {grid.omega[-1]:.3g} ({grid.omega_scale})</text>'
    )
    parts.append(
        f'<text x="12" y="{top + 12:.1f}" font-family="monospace" font-size="12">'
        f'{axis_label}: {grid.axis2[0]:.3g} .. {grid.axis2[-1]:.3g}</text>'
    )
    parts.append("</svg>")

    with open(path, "w", newline="") as fh:
        fh.write("\n".join(parts))
        fh.write("\n")
