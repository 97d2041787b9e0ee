"""
Charts of every experiment, built only from the experiment's CSV tables.

Figures are a pure function of the tables: deleting the SVG files and
running `replot` reproduces them exactly.
"""

from __future__ import annotations

import math
from collections import OrderedDict
from typing import Callable, Dict, Iterable, List, Mapping, Sequence, Tuple

from domain.models import Chart, Series, SeriesStyle
from domain.repositories import ResultRepository


Table = List[Dict[str, str]]

MEASURE_LABELS = {"eof": "EoF (bits)", "ea": "EA (bits)", "discord": "discord (bits)", "concurrence": "concurrence"}
NOISE_LEVELS = 5
WERNER_THETA = math.pi / 4


def _column(rows: Iterable[Mapping[str, str]], name: str) -> Tuple[float, ...]:
    return tuple(float(row[name]) for row in rows)


def _series(label: str, rows: Sequence[Mapping[str, str]], x: str, y: str, style: SeriesStyle) -> Series:
    return Series(label=label, x=_column(rows, x), y=_column(rows, y), style=style)


def _group(rows: Iterable[Mapping[str, str]], key: Callable[[Mapping[str, str]], str]) -> "OrderedDict[str, List[Mapping[str, str]]]":
    groups: "OrderedDict[str, List[Mapping[str, str]]]" = OrderedDict()
    for row in rows:
        groups.setdefault(key(row), []).append(row)
    return groups


def _parametric(title: str, groups: Mapping[str, Sequence[Mapping[str, str]]], x: str, y: str, style: SeriesStyle) -> Chart:
    return Chart(
        title=title,
        x_label=MEASURE_LABELS[x],
        y_label=MEASURE_LABELS[y],
        series=tuple(_series(label, rows, x, y, style) for label, rows in groups.items()),
    )


def pure_upper_bound_charts(tables: Mapping[str, Table]) -> Dict[str, Chart]:
    rows = tables["pure_upper_bound"]
    return {
        "pure_upper_bound": Chart(
            title="Pure states: mutual information against Schmidt angle",
            x_label="θ (rad)",
            y_label="bits",
            series=(
                _series("entropy of entanglement", rows, "theta", "eq9_value", "line"),
                _series("σx strategy", rows, "theta", "eq11_value", "line"),
                _series("EA (numeric)", rows, "theta", "ea_numeric", "points"),
            ),
        )
    }


def _theta_label(row: Mapping[str, str]) -> str:
    theta = float(row["param_1"])
    if abs(theta - WERNER_THETA) < 1e-9:
        return "Werner (θ=π/4)"
    return "pure + noise"


def pure_noise_sweep_charts(tables: Mapping[str, Table]) -> Dict[str, Chart]:
    rows = tables["measures"]
    by_kind = _group(rows, _theta_label)
    charts = {
        "ea_vs_eof": _parametric("EA against EoF, pure states with white noise", by_kind, "eof", "ea", "points"),
        "ea_vs_discord": _parametric("EA against discord, pure states with white noise", by_kind, "discord", "ea", "points"),
        "discord_vs_eof": _parametric("Discord against EoF, pure states with white noise", by_kind, "eof", "discord", "points"),
    }

    by_noise = _group(rows, lambda row: row["param_2"])
    levels = list(by_noise)
    if levels:
        picks = sorted({round(i * (len(levels) - 1) / (NOISE_LEVELS - 1)) for i in range(NOISE_LEVELS)})
        charts["noise_curves"] = Chart(
            title="EA against Schmidt angle at fixed noise",
            x_label="θ (rad)",
            y_label=MEASURE_LABELS["ea"],
            series=tuple(
                _series(f"e={float(levels[i]):.3g}", by_noise[levels[i]], "param_1", "ea", "line") for i in picks
            ),
        )
    return charts


def _family_kind(row: Mapping[str, str]) -> str:
    family = row["family"]
    for prefix in ("noisy-", "edge-", "line-"):
        if family.startswith(prefix):
            return prefix.rstrip("-")
    return family


def bell_slices_charts(tables: Mapping[str, Table]) -> Dict[str, Chart]:
    groups = _group(tables["measures"], _family_kind)
    return {
        "ea_vs_eof": _parametric("Bell-diagonal slices: EA against EoF", groups, "eof", "ea", "points"),
        "ea_vs_discord": _parametric("Bell-diagonal slices: EA against discord", groups, "discord", "ea", "points"),
    }


def _triangle_xy(row: Mapping[str, str]) -> Tuple[float, float]:
    # param_1 = weight of φ+, param_2 = weight of ψ−; corners A (0,0), φ+ (1,0), ψ− (½, √3/2)
    b, c = float(row["param_1"]), float(row["param_2"])
    return b + c / 2, c * math.sqrt(3) / 2


def bell_face_plane_charts(tables: Mapping[str, Table]) -> Dict[str, Chart]:
    rows = tables["measures"]
    xy = [_triangle_xy(row) for row in rows]
    x = tuple(p[0] for p in xy)
    y = tuple(p[1] for p in xy)
    charts = {}
    for measure in ("eof", "ea", "discord"):
        charts[f"face_plane_{measure}"] = Chart(
            title=f"{MEASURE_LABELS[measure]} on the plane through A=(φ−+ψ+)/2, φ+ and ψ−",
            x_label="x",
            y_label="y",
            series=(Series(label=measure, x=x, y=y, style="heat", values=_column(rows, measure)),),
        )
    return charts


def bell_lines_charts(tables: Mapping[str, Table]) -> Dict[str, Chart]:
    charts = {}
    for family, rows in _group(tables["measures"], lambda row: row["family"]).items():
        charts[family.replace("+", "p").replace("-", "_")] = Chart(
            title=f"Measures along {family}",
            x_label="p (distance from start)",
            y_label="bits",
            series=tuple(
                _series(MEASURE_LABELS[m], rows, "param_1", m, "line") for m in ("eof", "ea", "discord")
            ),
        )
    return charts


def random_scatter_charts(tables: Mapping[str, Table]) -> Dict[str, Chart]:
    envelopes = _group(tables["envelopes"], lambda row: row["family"])
    scatter = {"random states": tables["measures"]}
    charts = {}
    for x in ("eof", "discord"):
        dots = _parametric("", scatter, x, "ea", "points").series
        curves = _parametric("", envelopes, x, "ea", "line").series
        charts[f"ea_vs_{x}"] = Chart(
            title=f"EA against {x} for random states",
            x_label=MEASURE_LABELS[x],
            y_label=MEASURE_LABELS["ea"],
            series=dots + curves,
        )
    return charts


def hierarchy_audit_charts(tables: Mapping[str, Table]) -> Dict[str, Chart]:
    groups = _group(tables["measures"], lambda row: row["family"])
    return {
        "audit_ea_vs_discord": _parametric("Audited states: EA against discord", groups, "discord", "ea", "points"),
    }


CHARTS: Dict[str, Callable[[Mapping[str, Table]], Dict[str, Chart]]] = {
    "pure-upper-bound": pure_upper_bound_charts,
    "pure-noise-sweep": pure_noise_sweep_charts,
    "bell-slices": bell_slices_charts,
    "bell-face-plane": bell_face_plane_charts,
    "bell-lines": bell_lines_charts,
    "random-scatter": random_scatter_charts,
    "hierarchy-audit": hierarchy_audit_charts,
}


def write_figures(repo: ResultRepository, experiment: str) -> List[str]:
    """Read the experiment's tables back from `repo` and write its charts."""

    build = CHARTS.get(experiment)
    if build is None:
        return []
    tables = {name: repo.read_table(name) for name in repo.list_tables()}
    charts = build(tables)
    for name, chart in charts.items():
        repo.write_figure(name, chart)
    return list(charts)
