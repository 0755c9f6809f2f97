"""Deterministic CSV / JSON / SVG emission for the command-line tools.

CSV files carry their provenance in '#'-prefixed metadata lines so they
stay self-describing while remaining trivially parseable; numbers are
written with 17 significant digits so doubles round-trip exactly, and no
timestamps enter the data, which keeps repeated runs byte-identical.
"""

from __future__ import annotations

import json
from typing import Any, Iterable

from .version import __version__

_PALETTE = ("#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b")


def fmt(value: Any) -> str:
    """Serialize one cell: floats at 17 significant digits, the rest as str."""
    if isinstance(value, bool):
        return str(value).lower()
    if isinstance(value, float):
        return format(value, ".17g")
    return str(value)


def _meta_lines(meta: dict[str, Any]) -> list[str]:
    lines = [f"# qladder {__version__}"]
    for key, value in meta.items():
        lines.append(f"# {key} = {fmt(value)}")
    return lines


def write_csv(path: str, columns: list[str], rows: Iterable[Iterable[Any]], meta: dict[str, Any]) -> None:
    lines = _meta_lines(meta)
    lines.append(",".join(columns))
    for row in rows:
        lines.append(",".join(fmt(v) for v in row))
    with open(path, "w", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")


def write_json(path: str, columns: list[str], rows: Iterable[Iterable[Any]], meta: dict[str, Any]) -> None:
    payload = {
        "meta": {"tool": f"qladder {__version__}", **{k: _jsonable(v) for k, v in meta.items()}},
        "rows": [dict(zip(columns, (_jsonable(v) for v in row))) for row in rows],
    }
    with open(path, "w", newline="\n") as fh:
        json.dump(payload, fh, indent=1)
        fh.write("\n")


def _jsonable(value: Any) -> Any:
    if isinstance(value, (bool, int, float, str)) or value is None:
        return value
    return str(value)


def write_svg(
    path: str,
    x,
    series: list[tuple[str, Any]],
    title: str,
    xlabel: str = "t",
    ylabel: str = "P",
) -> None:
    """Minimal static line plot: fixed 800x500 viewbox, one polyline per series."""
    width, height = 800, 500
    ml, mr, mt, mb = 60, 20, 40, 45
    pw, ph = width - ml - mr, height - mt - mb
    x = list(map(float, x))
    ys = [(label, list(map(float, y))) for label, y in series]
    x_lo, x_hi = min(x), max(x)
    y_lo = min(min(y) for _, y in ys)
    y_hi = max(max(y) for _, y in ys)
    if x_hi == x_lo:
        x_hi = x_lo + 1.0
    if y_hi == y_lo:
        y_hi = y_lo + 1.0

    def px(v: float) -> float:
        return ml + pw * (v - x_lo) / (x_hi - x_lo)

    def py(v: float) -> float:
        return mt + ph * (1.0 - (v - y_lo) / (y_hi - y_lo))

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 {width} {height}">',
        f'<rect width="{width}" height="{height}" fill="white"/>',
        f'<text x="{width/2:.1f}" y="20" text-anchor="middle" font-size="15">{title}</text>',
        f'<line x1="{ml}" y1="{mt+ph}" x2="{ml+pw}" y2="{mt+ph}" stroke="black"/>',
        f'<line x1="{ml}" y1="{mt}" x2="{ml}" y2="{mt+ph}" stroke="black"/>',
        f'<text x="{ml+pw/2:.1f}" y="{height-8}" text-anchor="middle" font-size="12">{xlabel}</text>',
        f'<text x="15" y="{mt+ph/2:.1f}" font-size="12" transform="rotate(-90 15 {mt+ph/2:.1f})" text-anchor="middle">{ylabel}</text>',
        f'<text x="{ml-5}" y="{mt+ph+14}" text-anchor="end" font-size="10">{x_lo:.3g}</text>',
        f'<text x="{ml+pw}" y="{mt+ph+14}" text-anchor="end" font-size="10">{x_hi:.3g}</text>',
        f'<text x="{ml-8}" y="{mt+ph}" text-anchor="end" font-size="10">{y_lo:.3g}</text>',
        f'<text x="{ml-8}" y="{mt+10}" text-anchor="end" font-size="10">{y_hi:.3g}</text>',
    ]
    for i, (label, y) in enumerate(ys):
        color = _PALETTE[i % len(_PALETTE)]
        points = " ".join(f"{px(a):.2f},{py(b):.2f}" for a, b in zip(x, y))
        parts.append(f'<polyline fill="none" stroke="{color}" stroke-width="1.2" points="{points}"/>')
        parts.append(
            f'<text x="{ml+pw-6}" y="{mt+16+14*i}" text-anchor="end" font-size="11" fill="{color}">{label}</text>'
        )
    parts.append("</svg>")
    with open(path, "w", newline="\n") as fh:
        fh.write("\n".join(parts) + "\n")
