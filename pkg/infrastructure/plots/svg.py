"""
Built-in SVG rendering of `Chart` values.

Output is deterministic: the same chart always yields the same bytes, so
figures regenerated from CSV tables are identical to the originals.
"""

from __future__ import annotations

import math
from typing import List, Sequence, Tuple

from domain.models import Chart, Series


PALETTE = ("#4e79a7", "#e15759", "#59a14f", "#f28e2b", "#b07aa1", "#76b7b2", "#edc948", "#9c755f")
# Stops of a perceptual blue-to-yellow scale for heat series.
HEAT_STOPS = ((0.0, (68, 1, 84)), (0.25, (59, 82, 139)), (0.5, (33, 145, 140)), (0.75, (94, 201, 98)), (1.0, (253, 231, 37)))
TICKS = 5


def _esc(text: str) -> str:
    """Escape XML special characters for safe inclusion in SVG."""

    return (
        (text or "")
        .replace("&", "&amp;")
        .replace("<", "&lt;")
        .replace(">", "&gt;")
        .replace('"', "&quot;")
    )


def _header(title: str, width: int, height: int) -> List[str]:
    return [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" role="img" aria-label="{_esc(title)}">',
        f"<title>{_esc(title)}</title>",
        '<rect width="100%" height="100%" fill="white"/>',
        f'<text x="{width / 2:.1f}" y="20" text-anchor="middle" font-size="14">{_esc(title)}</text>',
    ]


def _empty_svg(title: str, width: int, height: int, message: str) -> str:
    return "\n".join(
        _header(title, width, height)
        + [
            f'<text x="{width / 2:.1f}" y="{height / 2:.1f}" text-anchor="middle" font-size="12" fill="#666">{_esc(message)}</text>',
            "</svg>",
        ]
    )


def _finite_points(series: Series) -> List[Tuple[float, float, float]]:
    values = series.values if series.style == "heat" else (0.0,) * len(series.x)
    return [
        (x, y, v)
        for x, y, v in zip(series.x, series.y, values)
        if math.isfinite(x) and math.isfinite(y) and math.isfinite(v)
    ]


def _span(values: Sequence[float]) -> Tuple[float, float]:
    low, high = min(values), max(values)
    if high - low < 1e-12:
        return low - 0.5, high + 0.5
    return low, high


def heat_color(t: float) -> str:
    """Colour of a normalized value t ∈ [0, 1] on the heat scale."""

    t = min(max(t, 0.0), 1.0)
    for (t0, c0), (t1, c1) in zip(HEAT_STOPS, HEAT_STOPS[1:]):
        if t <= t1:
            w = (t - t0) / (t1 - t0)
            r, g, b = (round(a + w * (c - a)) for a, c in zip(c0, c1))
            return f"#{r:02x}{g:02x}{b:02x}"
    return "#fde725"


def render_chart(chart: Chart, width: int = 720, height: int = 480) -> str:
    """
    Render line, scatter and heat series on shared linear axes with tick
    labels and a legend.
    """

    pad_left, pad_right, pad_top, pad_bottom = 60, 150, 36, 48
    points = [(s, _finite_points(s)) for s in chart.series]
    everything = [p for _, pts in points for p in pts]
    if not everything:
        return _empty_svg(chart.title, width, height, "No data available")

    min_x, max_x = _span([p[0] for p in everything])
    min_y, max_y = _span([p[1] for p in everything])
    plot_w = width - pad_left - pad_right
    plot_h = height - pad_top - pad_bottom

    def sx(x: float) -> float:
        return pad_left + (x - min_x) / (max_x - min_x) * plot_w

    def sy(y: float) -> float:
        return pad_top + plot_h - (y - min_y) / (max_y - min_y) * plot_h

    lines = _header(chart.title, width, height)
    lines.append(
        f'<rect x="{pad_left}" y="{pad_top}" width="{plot_w}" height="{plot_h}" fill="none" stroke="#333"/>'
    )
    for i in range(TICKS + 1):
        fx = min_x + (max_x - min_x) * i / TICKS
        fy = min_y + (max_y - min_y) * i / TICKS
        lines.append(
            f'<text x="{sx(fx):.1f}" y="{pad_top + plot_h + 16}" text-anchor="middle" font-size="10">{fx:.3g}</text>'
        )
        lines.append(
            f'<text x="{pad_left - 6}" y="{sy(fy) + 3:.1f}" text-anchor="end" font-size="10">{fy:.3g}</text>'
        )
    lines.append(
        f'<text x="{pad_left + plot_w / 2:.1f}" y="{height - 10}" text-anchor="middle" font-size="12">{_esc(chart.x_label)}</text>'
    )
    lines.append(
        f'<text x="16" y="{pad_top + plot_h / 2:.1f}" text-anchor="middle" font-size="12" '
        f'transform="rotate(-90 16 {pad_top + plot_h / 2:.1f})">{_esc(chart.y_label)}</text>'
    )

    for k, (series, pts) in enumerate(points):
        color = PALETTE[k % len(PALETTE)]
        if not pts:
            continue
        if series.style == "line":
            path = " ".join(f"{'M' if i == 0 else 'L'}{sx(x):.1f},{sy(y):.1f}" for i, (x, y, _) in enumerate(pts))
            lines.append(f'<path d="{path}" fill="none" stroke="{color}" stroke-width="1.5"/>')
        elif series.style == "points":
            lines.extend(
                f'<circle cx="{sx(x):.1f}" cy="{sy(y):.1f}" r="1.5" fill="{color}"/>' for x, y, _ in pts
            )
        else:
            low, high = _span([v for _, _, v in pts])
            lines.extend(
                f'<rect x="{sx(x) - 3:.1f}" y="{sy(y) - 3:.1f}" width="6" height="6" '
                f'fill="{heat_color((v - low) / (high - low))}"/>'
                for x, y, v in pts
            )
            color = heat_color(1.0)

        legend_y = pad_top + 14 * k + 8
        lines.append(
            f'<rect x="{width - pad_right + 10}" y="{legend_y - 8}" width="10" height="10" fill="{color}"/>'
        )
        lines.append(
            f'<text x="{width - pad_right + 26}" y="{legend_y + 1}" font-size="10">{_esc(series.label)}</text>'
        )

    lines.append("</svg>")
    return "\n".join(lines) + "\n"
