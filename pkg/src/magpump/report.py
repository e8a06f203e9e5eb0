"""Deterministic CSV serialization and minimal SVG line plots.

CSV numbers are written with 17 significant digits so identical runs produce
byte-identical files and regression fixtures stay bit-stable.  The SVG writer
is a presentation nicety only: plain polylines over a fixed frame, no
external assets, never parsed back.
"""

from __future__ import annotations

import os

__all__ = ["fmt_float", "write_csv", "svg_line_plot"]

_PALETTE = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e",
            "#8c564b", "#17becf", "#7f7f7f")


def fmt_float(x) -> str:
    return "%.17g" % float(x)


def _cell(v) -> str:
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return fmt_float(v)
    if isinstance(v, int):
        return str(v)
    return str(v)


def write_csv(path: str, header: list, rows) -> None:
    """Write rows of mixed cells; floats at full precision, None as empty."""
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(_cell(v) for v in row))
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")


def _ticks(lo: float, hi: float, n: int = 5) -> list:
    if hi <= lo:
        return [lo]
    step = (hi - lo) / (n - 1)
    return [lo + k * step for k in range(n)]


def _f(x) -> str:
    return "%.6g" % x


def svg_line_plot(path: str, series: list, title: str, xlabel: str,
                  ylabel: str, width: int = 640, height: int = 440) -> None:
    """Plot series = [(label, xs, ys), ...] as colored polylines.

    Scales include every point with a 5% margin; degenerate (constant) axes
    get a unit half-width so flat lines stay visible.
    """
    ml, mr, mt, mb = 64, 16, 34, 46
    pw, ph = width - ml - mr, height - mt - mb
    xs_all = [x for _, xs, _ in series for x in xs]
    ys_all = [y for _, _, ys in series for y in ys]
    if not xs_all:
        raise ValueError("nothing to plot")
    x0, x1 = min(xs_all), max(xs_all)
    y0, y1 = min(ys_all), max(ys_all)
    if x1 == x0:
        x0, x1 = x0 - 0.5, x1 + 0.5
    if y1 == y0:
        y0, y1 = y0 - 0.5, y1 + 0.5
    dx, dy = 0.05 * (x1 - x0), 0.05 * (y1 - y0)
    x0, x1, y0, y1 = x0 - dx, x1 + dx, y0 - dy, y1 + dy

    def px(x):
        return ml + (x - x0) / (x1 - x0) * pw

    def py(y):
        return mt + (y1 - y) / (y1 - y0) * ph

    out = []
    out.append(f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" '
               f'height="{height}" viewBox="0 0 {width} {height}">')
    out.append(f'<rect width="{width}" height="{height}" fill="white"/>')
    out.append(f'<text x="{width / 2:.1f}" y="20" text-anchor="middle" '
               f'font-family="sans-serif" font-size="14">{title}</text>')
    # frame
    out.append(f'<rect x="{ml}" y="{mt}" width="{pw}" height="{ph}" '
               f'fill="none" stroke="#333" stroke-width="1"/>')
    for xv in _ticks(x0, x1):
        X = px(xv)
        out.append(f'<line x1="{X:.1f}" y1="{mt + ph}" x2="{X:.1f}" '
                   f'y2="{mt + ph + 4}" stroke="#333"/>')
        out.append(f'<text x="{X:.1f}" y="{mt + ph + 16}" text-anchor="middle" '
                   f'font-family="sans-serif" font-size="10">{_f(xv)}</text>')
    for yv in _ticks(y0, y1):
        Y = py(yv)
        out.append(f'<line x1="{ml - 4}" y1="{Y:.1f}" x2="{ml}" y2="{Y:.1f}" '
                   f'stroke="#333"/>')
        out.append(f'<text x="{ml - 6}" y="{Y + 3:.1f}" text-anchor="end" '
                   f'font-family="sans-serif" font-size="10">{_f(yv)}</text>')
    out.append(f'<text x="{ml + pw / 2:.1f}" y="{height - 8}" '
               f'text-anchor="middle" font-family="sans-serif" '
               f'font-size="12">{xlabel}</text>')
    out.append(f'<text x="16" y="{mt + ph / 2:.1f}" text-anchor="middle" '
               f'font-family="sans-serif" font-size="12" '
               f'transform="rotate(-90 16 {mt + ph / 2:.1f})">{ylabel}</text>')
    for k, (label, xs, ys) in enumerate(series):
        color = _PALETTE[k % len(_PALETTE)]
        pts = " ".join(f"{px(x):.2f},{py(y):.2f}" for x, y in zip(xs, ys))
        out.append(f'<polyline points="{pts}" fill="none" stroke="{color}" '
                   f'stroke-width="1.5"/>')
        if label:
            ly = mt + 14 + 14 * k
            out.append(f'<line x1="{ml + pw - 92}" y1="{ly - 4}" '
                       f'x2="{ml + pw - 74}" y2="{ly - 4}" stroke="{color}" '
                       f'stroke-width="2"/>')
            out.append(f'<text x="{ml + pw - 70}" y="{ly}" '
                       f'font-family="sans-serif" font-size="11">{label}</text>')
    out.append("</svg>")
    os.makedirs(os.path.dirname(path) or ".", exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(out) + "\n")
