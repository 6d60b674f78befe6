"""Static SVG figures: specification chart and scatter-with-fit panels.

Charts are plain text built from already-emitted rows, so re-rendering from
the CSV reproduces the SVG byte for byte. No plotting library involved.
"""

from __future__ import annotations

from xml.sax.saxutils import escape

import numpy as np

__all__ = ["spec_chart_svg", "scatter_svg"]

_FONT = 'font-family="Helvetica, Arial, sans-serif"'


def _fmt(value: float) -> str:
    return f"{value:.2f}"


def _axis_ticks(low: float, high: float, count: int = 5):
    if not np.isfinite(low) or not np.isfinite(high) or low == high:
        low, high = low - 1.0, high + 1.0
    span = high - low
    step = 10 ** np.floor(np.log10(span / count))
    for mult in (1, 2, 5, 10):
        if span / (step * mult) <= count:
            step *= mult
            break
    first = np.ceil(low / step) * step
    ticks = []
    tick = first
    while tick <= high + 1e-12 * span:
        ticks.append(0.0 if abs(tick) < 1e-12 * span else float(tick))
        tick += step
    return ticks


def spec_chart_svg(rows, covariates) -> str:
    """Coefficient dots with CI whiskers over an inclusion grid, one column per spec."""
    covariates = list(covariates)
    n_rows = len(rows)
    left, right, top = 70, 20, 20
    col_width = max(26, min(48, 640 // max(n_rows, 1)))
    panel_h, grid_row_h, gap = 220, 18, 28
    width = left + right + col_width * n_rows
    grid_top = top + panel_h + gap
    height = grid_top + grid_row_h * len(covariates) + 30

    finite = [r for r in rows if not r.failed and np.isfinite(r.ci_low)]
    lo = min([r.ci_low for r in finite], default=-1.0)
    hi = max([r.ci_high for r in finite], default=1.0)
    lo, hi = min(lo, 0.0), max(hi, 0.0)
    pad = 0.08 * (hi - lo) or 1.0
    lo, hi = lo - pad, hi + pad

    def y_of(value):
        return top + panel_h * (hi - value) / (hi - lo)

    def x_of(idx):
        return left + col_width * (idx + 0.5)

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">',
        f'<rect width="{width}" height="{height}" fill="white"/>',
    ]
    for tick in _axis_ticks(lo, hi):
        y = y_of(tick)
        parts.append(
            f'<line x1="{left}" y1="{y:.1f}" x2="{width - right}" y2="{y:.1f}" '
            f'stroke="#dddddd" stroke-width="1"/>'
        )
        parts.append(
            f'<text x="{left - 6}" y="{y:.1f}" {_FONT} font-size="10" '
            f'text-anchor="end" dominant-baseline="middle">{_fmt(tick)}</text>'
        )
    zero_y = y_of(0.0)
    parts.append(
        f'<line x1="{left}" y1="{zero_y:.1f}" x2="{width - right}" y2="{zero_y:.1f}" '
        f'stroke="#888888" stroke-width="1" stroke-dasharray="4,3"/>'
    )

    for idx, row in enumerate(rows):
        x = x_of(idx)
        if row.failed or not np.isfinite(row.coefficient):
            parts.append(
                f'<text x="{x:.1f}" y="{top + panel_h / 2:.1f}" {_FONT} font-size="12" '
                f'text-anchor="middle" fill="#cc3333">x</text>'
            )
            continue
        parts.append(
            f'<line x1="{x:.1f}" y1="{y_of(row.ci_low):.1f}" x2="{x:.1f}" '
            f'y2="{y_of(row.ci_high):.1f}" stroke="#2c5aa0" stroke-width="1.5"/>'
        )
        parts.append(
            f'<circle cx="{x:.1f}" cy="{y_of(row.coefficient):.1f}" r="3.2" fill="#2c5aa0"/>'
        )
        parts.append(
            f'<text x="{x:.1f}" y="{top + panel_h + 12}" {_FONT} font-size="8" '
            f'text-anchor="middle" fill="#555555">{_fmt(row.r_squared)}</text>'
        )

    for row_idx, cov in enumerate(covariates):
        y = grid_top + grid_row_h * row_idx
        parts.append(
            f'<text x="{left - 6}" y="{y + grid_row_h / 2:.1f}" {_FONT} font-size="9" '
            f'text-anchor="end" dominant-baseline="middle">{escape(cov)}</text>'
        )
        for idx, row in enumerate(rows):
            x = x_of(idx)
            included = cov in row.included
            fill = "#2c5aa0" if included else "#eeeeee"
            parts.append(
                f'<rect x="{x - col_width * 0.32:.1f}" y="{y + 3:.1f}" '
                f'width="{col_width * 0.64:.1f}" height="{grid_row_h - 6:.1f}" '
                f'fill="{fill}" stroke="#bbbbbb" stroke-width="0.5"/>'
            )

    for idx, row in enumerate(rows):
        parts.append(
            f'<text x="{x_of(idx):.1f}" y="{height - 10}" {_FONT} font-size="8" '
            f'text-anchor="middle" fill="#555555">{idx + 1}</text>'
        )
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def scatter_svg(x, y, slope: float, intercept: float, caption: str, x_label: str, y_label: str) -> str:
    """Scatter panel with a fitted line and a stats caption in the corner."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    left, right, top, bottom = 60, 20, 16, 44
    panel_w, panel_h = 420, 280
    width, height = left + panel_w + right, top + panel_h + bottom

    x_lo, x_hi = float(np.min(x)), float(np.max(x))
    y_lo, y_hi = min(float(np.min(y)), 0.0), float(np.max(y))
    x_pad = 0.05 * (x_hi - x_lo) or 1.0
    y_pad = 0.07 * (y_hi - y_lo) or 1.0
    x_lo, x_hi = x_lo - x_pad, x_hi + x_pad
    y_lo, y_hi = y_lo - y_pad, y_hi + y_pad

    def px(value):
        return left + panel_w * (value - x_lo) / (x_hi - x_lo)

    def py(value):
        return top + panel_h * (y_hi - value) / (y_hi - y_lo)

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">',
        f'<rect width="{width}" height="{height}" fill="white"/>',
        f'<rect x="{left}" y="{top}" width="{panel_w}" height="{panel_h}" '
        f'fill="none" stroke="#999999"/>',
    ]
    for tick in _axis_ticks(x_lo, x_hi):
        parts.append(
            f'<text x="{px(tick):.1f}" y="{top + panel_h + 14}" {_FONT} font-size="9" '
            f'text-anchor="middle">{_fmt(tick)}</text>'
        )
    for tick in _axis_ticks(y_lo, y_hi):
        parts.append(
            f'<text x="{left - 5}" y="{py(tick):.1f}" {_FONT} font-size="9" '
            f'text-anchor="end" dominant-baseline="middle">{_fmt(tick)}</text>'
        )
    for xi, yi in zip(x, y):
        parts.append(
            f'<circle cx="{px(xi):.1f}" cy="{py(yi):.1f}" r="2.4" '
            f'fill="#2c5aa0" fill-opacity="0.65"/>'
        )
    y_at = lambda v: intercept + slope * v  # noqa: E731
    parts.append(
        f'<line x1="{px(x_lo):.1f}" y1="{py(y_at(x_lo)):.1f}" '
        f'x2="{px(x_hi):.1f}" y2="{py(y_at(x_hi)):.1f}" stroke="#777777" stroke-width="1.5"/>'
    )
    parts.append(
        f'<text x="{left + panel_w - 6}" y="{top + 14}" {_FONT} font-size="10" '
        f'text-anchor="end">{escape(caption)}</text>'
    )
    parts.append(
        f'<text x="{left + panel_w / 2:.1f}" y="{height - 8}" {_FONT} font-size="10" '
        f'text-anchor="middle">{escape(x_label)}</text>'
    )
    parts.append(
        f'<text x="14" y="{top + panel_h / 2:.1f}" {_FONT} font-size="10" '
        f'text-anchor="middle" transform="rotate(-90 14 {top + panel_h / 2:.1f})">'
        f"{escape(y_label)}</text>"
    )
    parts.append("</svg>")
    return "\n".join(parts) + "\n"
