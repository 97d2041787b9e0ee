import json
import tempfile
import unittest
from pathlib import Path

import numpy as np

from domain.models import Chart, Series
from infrastructure.files.result_repository_csv import CsvResultRepository, format_cell


class FormatCellTests(unittest.TestCase):
    def test_numbers(self):
        self.assertEqual(format_cell(0.1 + 0.2), "0.3")
        self.assertEqual(format_cell(1.0), "1")
        self.assertEqual(format_cell(-0.0), "0")
        self.assertEqual(format_cell(np.float64(1 / 3)), "0.333333333333")
        self.assertEqual(format_cell(np.int64(7)), "7")
        self.assertEqual(format_cell(float("nan")), "nan")
        self.assertEqual(format_cell("werner"), "werner")


class CsvResultRepositoryTests(unittest.TestCase):
    def setUp(self) -> None:
        self._tmp = tempfile.TemporaryDirectory()
        self.directory = Path(self._tmp.name) / "run"
        self.repo = CsvResultRepository(str(self.directory))

    def tearDown(self) -> None:
        self._tmp.cleanup()

    def test_creates_directory(self):
        self.assertTrue(self.directory.is_dir())
        self.assertEqual(self.repo.location, str(self.directory))

    def test_table_round_trip(self):
        self.repo.write_table("measures", ("family", "ea"), [["werner", 0.25], ["pure", 1.0]])

        text = (self.directory / "measures.csv").read_text(encoding="utf-8")
        self.assertEqual(text, "family,ea\nwerner,0.25\npure,1\n")
        self.assertEqual(self.repo.read_table("measures"), [{"family": "werner", "ea": "0.25"}, {"family": "pure", "ea": "1"}])
        self.assertEqual(self.repo.list_tables(), ["measures"])

    def test_ragged_row_is_rejected(self):
        with self.assertRaises(ValueError):
            self.repo.write_table("bad", ("a", "b"), [[1]])

    def test_manifest(self):
        self.repo.write_manifest({"seed": 3, "experiment": "random-scatter"})

        raw = (self.directory / "manifest.json").read_text(encoding="utf-8")
        self.assertEqual(list(json.loads(raw)), ["experiment", "seed"])
        self.assertEqual(self.repo.read_manifest()["seed"], 3)

    def test_figure(self):
        chart = Chart("t", "x", "y", (Series("s", (0.0, 1.0), (1.0, 0.0)),))

        self.repo.write_figure("curve", chart)

        self.assertTrue((self.directory / "curve.svg").read_text(encoding="utf-8").startswith("<svg "))


if __name__ == "__main__":
    unittest.main()
