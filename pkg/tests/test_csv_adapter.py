"""
Tests for the CSV result adapter
"""
import os
import tempfile
import unittest

import pandas as pd

from pasm.adapters.csv_result_adapter import CSVResultAdapter, rows_to_frame
from pasm.types.reports import RESULT_COLUMNS, ResultRow


def _row(alpha, oracle=10.0):
    return ResultRow(
        instance_id="desk",
        policy="pa-greedy",
        alpha=alpha,
        constraint="k=2",
        method="exact",
        expected_utility=8.0,
        stderr=0.0,
        mean_batches=1.0 + alpha,
        max_batches=2,
        oracle_value=oracle,
        ratio=None if oracle is None else 8.0 / oracle,
        theorem_bound=0.5,
        bound_satisfied=True,
    )


class TestCSVResultAdapter(unittest.TestCase):
    """Test cases for CSVResultAdapter"""

    def setUp(self):
        self.directory = tempfile.TemporaryDirectory()
        self.addCleanup(self.directory.cleanup)
        self.adapter = CSVResultAdapter()

    def test_columns_in_fixed_order(self):
        frame = rows_to_frame([_row(0.0), _row(1.0)])
        self.assertEqual(tuple(frame.columns), RESULT_COLUMNS)

    def test_written_file_reads_back(self):
        path = self.adapter.write_rows([_row(0.0), _row(0.5)], os.path.join(self.directory.name, "out", "rows.csv"))
        frame = pd.read_csv(path)
        self.assertEqual(len(frame), 2)
        self.assertEqual(list(frame["alpha"]), [0.0, 0.5])
        self.assertAlmostEqual(frame["ratio"][0], 0.8)

    def test_same_rows_same_bytes(self):
        rows = [_row(0.0), _row(0.25, oracle=None)]
        first = self.adapter.write_rows(rows, os.path.join(self.directory.name, "a.csv"))
        second = self.adapter.write_rows(rows, os.path.join(self.directory.name, "b.csv"))
        with open(first, "rb") as a, open(second, "rb") as b:
            self.assertEqual(a.read(), b.read())


if __name__ == "__main__":
    unittest.main()
