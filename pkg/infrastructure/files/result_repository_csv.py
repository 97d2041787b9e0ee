from __future__ import annotations

import csv
import json
import logging
import math
import numbers
from pathlib import Path
from typing import Any, Dict, List, Sequence

from domain.models import Chart
from infrastructure.plots.svg import render_chart


logger = logging.getLogger(__name__)

MANIFEST_NAME = "manifest.json"
SIGNIFICANT_DIGITS = 12


def format_cell(value: Any) -> str:
    """Numbers with 12 significant digits (and no negative zero); text as-is."""

    if isinstance(value, str):
        return value
    if isinstance(value, numbers.Integral):
        return str(int(value))
    if isinstance(value, numbers.Real):
        value = float(value)
        if math.isnan(value):
            return "nan"
        return f"{value + 0.0:.{SIGNIFICANT_DIGITS}g}"
    return str(value)


class CsvResultRepository:
    """
    Experiment artefacts in one run directory.

    - `<name>.csv` tables with a header row and fixed column order.
    - `manifest.json` with everything needed to rerun the experiment.
    - `<name>.svg` figures rendered from the tables.
    """

    def __init__(self, directory: str) -> None:
        self._directory = Path(directory)
        self._ensure_directory()

    @property
    def directory(self) -> Path:
        return self._directory

    @property
    def location(self) -> str:
        return str(self._directory)

    def _ensure_directory(self) -> None:
        self._directory.mkdir(parents=True, exist_ok=True)

    def _path(self, name: str, suffix: str) -> Path:
        return self._directory / f"{name}{suffix}"

    def write_table(self, name: str, header: Sequence[str], rows: Sequence[Sequence[Any]]) -> None:
        path = self._path(name, ".csv")
        with path.open("w", newline="", encoding="utf-8") as handle:
            writer = csv.writer(handle, lineterminator="\n")
            writer.writerow(header)
            for row in rows:
                if len(row) != len(header):
                    raise ValueError(f"row has {len(row)} cells, header has {len(header)}")
                writer.writerow([format_cell(cell) for cell in row])
        logger.info("wrote %d rows to %s", len(rows), path)

    def read_table(self, name: str) -> List[Dict[str, str]]:
        with self._path(name, ".csv").open(newline="", encoding="utf-8") as handle:
            return list(csv.DictReader(handle))

    def list_tables(self) -> List[str]:
        return sorted(p.stem for p in self._directory.glob("*.csv"))

    def write_manifest(self, manifest: Dict[str, Any]) -> None:
        path = self._directory / MANIFEST_NAME
        path.write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n", encoding="utf-8")
        logger.info("wrote manifest %s", path)

    def read_manifest(self) -> Dict[str, Any]:
        return json.loads((self._directory / MANIFEST_NAME).read_text(encoding="utf-8"))

    def write_figure(self, name: str, chart: Chart) -> None:
        path = self._path(name, ".svg")
        path.write_text(render_chart(chart), encoding="utf-8")
        logger.info("wrote figure %s", path)
