"""Log-log chart of per-n sup error, written as plain SVG.

The SVG is assembled by hand with fixed number formatting so identical input
always produces identical bytes.
"""

from __future__ import annotations

import csv
import math
from pathlib import Path

import numpy as np

from .errors import ParseError

WIDTH, HEIGHT = 640, 420
MARGIN_L, MARGIN_R, MARGIN_T, MARGIN_B = 70, 130, 30, 50
COLORS = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#e377c2", "#17becf", "#7f7f7f", "#bcbd22")
REQUIRED = ("kind", "n", "abs_error")


def read_sup_errors(path: str | Path) -> dict[str, list[tuple[int, float]]]:
    """Per-kind sorted ``(n, sup abs_error)`` pairs from a study CSV."""
    try:
        with open(path, newline="") as fh:
            reader = csv.DictReader(fh)
            if reader.fieldnames is None or any(c not in reader.fieldnames for c in REQUIRED):
                raise ParseError(f"{path}: missing one of the columns {REQUIRED}")
            sup: dict[str, dict[int, float]] = {}
            for lineno, rec in enumerate(reader, 2):
                try:
                    kind, n, err = rec["kind"], int(rec["n"]), float(rec["abs_error"])
                except (TypeError, ValueError) as exc:
                    raise ParseError(f"{path}:{lineno}: malformed row {rec}") from exc
                if n <= 0:
                    continue
                per = sup.setdefault(kind, {})
                per[n] = max(per.get(n, 0.0), err)
    except OSError as exc:
        raise ParseError(str(exc)) from exc
    curves = {k: sorted(v.items()) for k, v in sup.items()}
    if not curves or max(len(v) for v in curves.values()) < 2:
        raise ParseError(f"{path}: need rows with at least two distinct n")
    return curves


def loglog_slope(ns, errors) -> float:
    """Least-squares slope of ``log(error)`` against ``log(n)``."""
    return float(np.polyfit(np.log(np.asarray(ns, float)), np.log(np.asarray(errors, float)), 1)[0])


def _fmt(v: float) -> str:
    return f"{v:.2f}"


def render_svg(curves: dict[str, list[tuple[int, float]]]) -> str:
    pts = [(n, e) for c in curves.values() for n, e in c if e > 0]
    if not pts:
        raise ParseError("no positive errors to plot")
    lx = [math.log10(n) for n, _ in pts]
    ly = [math.log10(e) for _, e in pts]
    x0, x1 = math.floor(min(lx)), math.ceil(max(lx))
    y0, y1 = math.floor(min(ly)), math.ceil(max(ly))
    x1 = max(x1, x0 + 1)
    y1 = max(y1, y0 + 1)
    pw = WIDTH - MARGIN_L - MARGIN_R
    ph = HEIGHT - MARGIN_T - MARGIN_B

    def px(n):
        return MARGIN_L + (math.log10(n) - x0) / (x1 - x0) * pw

    def py(e):
        return MARGIN_T + (y1 - math.log10(e)) / (y1 - y0) * ph

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">',
        '<rect width="100%" height="100%" fill="white"/>',
        f'<rect x="{MARGIN_L}" y="{MARGIN_T}" width="{pw}" height="{ph}" fill="none" stroke="black"/>',
    ]
    for d in range(x0, x1 + 1):
        x = _fmt(px(10.0**d))
        out.append(f'<line x1="{x}" y1="{MARGIN_T}" x2="{x}" y2="{MARGIN_T + ph}" stroke="#dddddd"/>')
        out.append(f'<text x="{x}" y="{MARGIN_T + ph + 18}" font-size="12" text-anchor="middle">1e{d}</text>')
    for d in range(y0, y1 + 1):
        y = _fmt(py(10.0**d))
        out.append(f'<line x1="{MARGIN_L}" y1="{y}" x2="{MARGIN_L + pw}" y2="{y}" stroke="#dddddd"/>')
        out.append(f'<text x="{MARGIN_L - 6}" y="{y}" font-size="12" text-anchor="end" dominant-baseline="middle">1e{d}</text>')
    out.append(f'<text x="{MARGIN_L + pw / 2:.1f}" y="{HEIGHT - 10}" font-size="13" text-anchor="middle">n</text>')
    out.append(
        f'<text x="16" y="{MARGIN_T + ph / 2:.1f}" font-size="13" text-anchor="middle" '
        f'transform="rotate(-90 16 {MARGIN_T + ph / 2:.1f})">sup error</text>'
    )
    for i, kind in enumerate(sorted(curves)):
        color = COLORS[i % len(COLORS)]
        good = [(n, e) for n, e in curves[kind] if e > 0]
        if not good:
            continue
        coords = " ".join(f"{_fmt(px(n))},{_fmt(py(e))}" for n, e in good)
        out.append(f'<polyline class="series" data-kind="{kind}" points="{coords}" fill="none" stroke="{color}" stroke-width="2"/>')
        for n, e in good:
            out.append(f'<circle cx="{_fmt(px(n))}" cy="{_fmt(py(e))}" r="3" fill="{color}"/>')
        ly_ = MARGIN_T + 16 + 18 * i
        label = kind
        if len(good) >= 2:
            label += f" ({loglog_slope(*zip(*good)):+.2f})"
        out.append(f'<line x1="{WIDTH - MARGIN_R + 10}" y1="{ly_}" x2="{WIDTH - MARGIN_R + 28}" y2="{ly_}" stroke="{color}" stroke-width="2"/>')
        out.append(f'<text x="{WIDTH - MARGIN_R + 32}" y="{ly_ + 4}" font-size="12">{label}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def emit_plot(rows_csv: str | Path, out_svg: str | Path) -> str:
    """Write the sup-error chart for a study CSV; returns the SVG text."""
    svg = render_svg(read_sup_errors(rows_csv))
    Path(out_svg).write_text(svg)
    return svg
