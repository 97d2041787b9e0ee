from __future__ import annotations

from typing import Any, Dict, List, Protocol, Sequence

from .models import Chart


class ResultRepository(Protocol):
    """
    Abstraction over where an experiment's artefacts end up.

    Implementations are responsible for:
    - Writing tables with a fixed header and a stable number format.
    - Writing the run manifest next to the tables.
    - Rendering charts into figure files.
    - Hiding any file-system details from the application layer.
    """

    @property
    def location(self) -> str:
        """Human-readable description of where artefacts are stored."""

        ...

    def write_table(self, name: str, header: Sequence[str], rows: Sequence[Sequence[Any]]) -> None:
        """Persist a table; `rows` are written in the given order."""

        ...

    def read_table(self, name: str) -> List[Dict[str, str]]:
        """Return a previously written table as a list of column→text dicts."""

        ...

    def list_tables(self) -> List[str]:
        ...

    def write_manifest(self, manifest: Dict[str, Any]) -> None:
        """
        Persist the run manifest.

        The manifest must be sufficient to rerun the experiment.
        """

        ...

    def read_manifest(self) -> Dict[str, Any]:
        ...

    def write_figure(self, name: str, chart: Chart) -> None:
        ...
