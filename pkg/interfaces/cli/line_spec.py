from __future__ import annotations

from typing import Tuple

from domain.errors import OutOfRange
from domain.models import BellDiagonalCoords


def _parse_point(text: str, data: str) -> BellDiagonalCoords:
    parts = text.split(",")
    if len(parts) != 3:
        raise ValueError(f"Invalid line endpoint {text!r} in {data!r}: expected c1,c2,c3")
    try:
        return BellDiagonalCoords(*(float(p) for p in parts))
    except OutOfRange as exc:
        raise ValueError(f"Invalid line endpoint {text!r}: {exc}") from None


def parse_line(data: str) -> Tuple[BellDiagonalCoords, BellDiagonalCoords]:
    """
    Parse a `--line` transect.

    Format: c1,c2,c3:c1,c2,c3
    """

    parts = data.split(":")
    if len(parts) != 2:
        raise ValueError(f"Invalid line {data!r}: expected c1,c2,c3:c1,c2,c3")
    return _parse_point(parts[0], data), _parse_point(parts[1], data)
