"""Deterministic CSV / JSON / SVG writers.

Floats are written with ``repr`` (shortest round-trip decimal), lines end
with LF, and files are replaced atomically so a failed run never leaves a
partial artifact behind.
"""

from __future__ import annotations

import json
import math
import os
import tempfile
from pathlib import Path
from typing import Iterable, Sequence


def format_value(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        if math.isnan(v):
            return "nan"
        return repr(v)
    return str(v)


def csv_text(header: Sequence[str], rows: Iterable[Sequence]) -> str:
    lines = [",".join(header)]
    lines += [",".join(format_value(v) for v in row) for row in rows]
    return "\n".join(lines) + "\n"


def _clean(obj):
    if isinstance(obj, float):
        return None if not math.isfinite(obj) else obj
    if isinstance(obj, dict):
        return {str(k): _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if hasattr(obj, "item"):  # numpy scalars
        return _clean(obj.item())
    return obj


def json_text(payload: dict) -> str:
    return json.dumps(_clean(payload), indent=2, sort_keys=True, allow_nan=False) + "\n"


def atomic_write(path: str | os.PathLike, text: str) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(prefix=f".{path.name}.", dir=path.parent)
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def svg_line_plot(xs: Sequence[float], ys: Sequence[float], xlabel: str = "x",
                  ylabel: str = "y", title: str = "", width: int = 640, height: int = 400) -> str:
    """Minimal standalone SVG line plot with axes and extreme-value tick labels."""
    pts = [(float(x), float(y)) for x, y in zip(xs, ys) if math.isfinite(x) and math.isfinite(y)]
    if not pts:
        raise ValueError("nothing to plot")
    left, right, top, bottom = 70, 20, 30, 50
    x_lo = min(p[0] for p in pts)
    x_hi = max(p[0] for p in pts)
    y_lo = min(p[1] for p in pts)
    y_hi = max(p[1] for p in pts)
    if x_hi == x_lo:
        x_hi = x_lo + 1.0
    if y_hi == y_lo:
        y_hi = y_lo + 1.0
    pw = width - left - right
    ph = height - top - bottom

    def sx(x):
        return left + (x - x_lo) / (x_hi - x_lo) * pw

    def sy(y):
        return top + (1.0 - (y - y_lo) / (y_hi - y_lo)) * ph

    poly = " ".join(f"{sx(x):.2f},{sy(y):.2f}" for x, y in pts)
    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">',
        f'<rect x="0" y="0" width="{width}" height="{height}" fill="white"/>',
        f'<line x1="{left}" y1="{top + ph}" x2="{left + pw}" y2="{top + ph}" stroke="black"/>',
        f'<line x1="{left}" y1="{top}" x2="{left}" y2="{top + ph}" stroke="black"/>',
        f'<polyline fill="none" stroke="#1f77b4" stroke-width="2" points="{poly}"/>',
        f'<text x="{left}" y="{top + ph + 18}" font-size="11">{x_lo:.4g}</text>',
        f'<text x="{left + pw}" y="{top + ph + 18}" font-size="11" text-anchor="end">{x_hi:.4g}</text>',
        f'<text x="{left - 6}" y="{top + ph}" font-size="11" text-anchor="end">{y_lo:.4g}</text>',
        f'<text x="{left - 6}" y="{top + 10}" font-size="11" text-anchor="end">{y_hi:.4g}</text>',
        f'<text x="{left + pw / 2:.1f}" y="{height - 12}" font-size="13" text-anchor="middle">{xlabel}</text>',
        f'<text x="16" y="{top + ph / 2:.1f}" font-size="13" text-anchor="middle" '
        f'transform="rotate(-90 16 {top + ph / 2:.1f})">{ylabel}</text>',
    ]
    if title:
        out.append(f'<text x="{width / 2:.1f}" y="18" font-size="14" text-anchor="middle">{title}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
