"""
CSV Result Adapter - writes experiment rows through pandas

Column order and float formatting are fixed so that a given configuration
and seed always produce the same bytes.
"""
from pathlib import Path
from typing import Sequence

import pandas as pd

from pasm.domain.ports import ResultSinkPort
from pasm.types.reports import RESULT_COLUMNS, ResultRow
from pasm.util.logging import setup_logging

_LOGGER = setup_logging(__name__)

FLOAT_FORMAT = "%.10g"


def rows_to_frame(rows: Sequence[ResultRow]) -> pd.DataFrame:
    return pd.DataFrame([row.as_record() for row in rows], columns=list(RESULT_COLUMNS))


class CSVResultAdapter(ResultSinkPort):
    """Result sink backed by a CSV file"""

    def __init__(self, float_format: str = FLOAT_FORMAT):
        self.float_format = float_format

    def write_rows(self, rows: Sequence[ResultRow], destination: str) -> str:
        path = Path(destination)
        path.parent.mkdir(parents=True, exist_ok=True)
        rows_to_frame(rows).to_csv(path, index=False, float_format=self.float_format, lineterminator="\n")
        _LOGGER.info(f"wrote {len(rows)} rows to {path}")
        return str(path)
