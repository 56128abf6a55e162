"""Minimal standalone SVG line charts for experiment tables."""

from pathlib import Path

import numpy as np

WIDTH, HEIGHT = 640, 400
MARGIN = dict(left=70, right=150, top=20, bottom=50)
PALETTE = ("#d62728", "#1f77b4", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b")


def _ticks(lo, hi, n=5):
    if hi == lo:
        return [lo]
    return list(np.linspace(lo, hi, n))


def _fmt(v):
    return format(float(v), ".4g")


def render_svg(table, x_col: str, y_cols, title: str = "") -> str:
    """SVG document with one polyline per column in ``y_cols``."""
    if isinstance(y_cols, str):
        y_cols = [y_cols]
    for name in [x_col, *y_cols]:
        if name not in table.columns:
            raise KeyError(f"no column named {name!r}")
    if table.rows.shape[0] < 2:
        raise ValueError("need at least two rows to draw a line")
    x = table.column(x_col)
    ys = [table.column(c) for c in y_cols]
    x_lo, x_hi = float(x.min()), float(x.max())
    y_lo = float(min(y.min() for y in ys))
    y_hi = float(max(y.max() for y in ys))
    if y_hi == y_lo:
        y_lo, y_hi = y_lo - 0.5, y_hi + 0.5
    if x_hi == x_lo:
        x_lo, x_hi = x_lo - 0.5, x_hi + 0.5
    left, top = MARGIN["left"], MARGIN["top"]
    pw = WIDTH - MARGIN["left"] - MARGIN["right"]
    ph = HEIGHT - MARGIN["top"] - MARGIN["bottom"]

    def sx(v):
        return left + (v - x_lo) / (x_hi - x_lo) * pw

    def sy(v):
        return top + ph - (v - y_lo) / (y_hi - y_lo) * ph

    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{WIDTH}" height="{HEIGHT}" '
        f'viewBox="0 0 {WIDTH} {HEIGHT}">',
        f'<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="white"/>',
    ]
    if title:
        out.append(f'<title>{title}</title>')
    bottom = top + ph
    out.append(f'<line x1="{left}" y1="{bottom}" x2="{left + pw}" y2="{bottom}" stroke="black"/>')
    out.append(f'<line x1="{left}" y1="{top}" x2="{left}" y2="{bottom}" stroke="black"/>')
    for v in _ticks(x_lo, x_hi):
        px = sx(v)
        out.append(f'<line x1="{px:.2f}" y1="{bottom}" x2="{px:.2f}" y2="{bottom + 5}" stroke="black"/>')
        out.append(
            f'<text x="{px:.2f}" y="{bottom + 18}" font-size="11" text-anchor="middle">{_fmt(v)}</text>'
        )
    for v in _ticks(y_lo, y_hi):
        py = sy(v)
        out.append(f'<line x1="{left - 5}" y1="{py:.2f}" x2="{left}" y2="{py:.2f}" stroke="black"/>')
        out.append(f'<text x="{left - 8}" y="{py + 4:.2f}" font-size="11" text-anchor="end">{_fmt(v)}</text>')
    out.append(
        f'<text x="{left + pw / 2:.2f}" y="{HEIGHT - 10}" font-size="12" text-anchor="middle">{x_col}</text>'
    )
    for i, (name, y) in enumerate(zip(y_cols, ys)):
        color = PALETTE[i % len(PALETTE)]
        points = " ".join(f"{sx(a):.2f},{sy(b):.2f}" for a, b in zip(x, y))
        out.append(f'<polyline fill="none" stroke="{color}" stroke-width="1.5" points="{points}"/>')
        ly = top + 15 + 18 * i
        lx = left + pw + 15
        out.append(f'<line x1="{lx}" y1="{ly}" x2="{lx + 20}" y2="{ly}" stroke="{color}" stroke-width="2"/>')
        out.append(f'<text x="{lx + 26}" y="{ly + 4}" font-size="11">{name}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def emit_svg(table, x_col: str, y_cols, path, title: str = "") -> Path:
    path = Path(path)
    path.write_text(render_svg(table, x_col, y_cols, title), encoding="utf-8")
    return path
