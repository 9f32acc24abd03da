"""CSV output helpers"""

import os
from pathlib import Path
from typing import Any, Dict, List, Sequence, Union

import pandas as pd

from src.util.errors import WriteError

PathLike = Union[str, os.PathLike]

FLOAT_FORMAT = "%.10g"


def rows_to_frame(rows: List[Dict[str, Any]], columns: Sequence[str]) -> pd.DataFrame:
    return pd.DataFrame(rows, columns=list(columns))


def write_csv(frame: pd.DataFrame, path: PathLike) -> Path:
    """Write a table as UTF-8 CSV with a header row and fixed float formatting"""
    path = Path(path)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        frame.to_csv(path, index=False, encoding="utf-8", lineterminator="\n", float_format=FLOAT_FORMAT)
    except OSError as e:
        raise WriteError(str(path), e.strerror or str(e))
    return path


def write_rows(rows: List[Dict[str, Any]], columns: Sequence[str], path: PathLike) -> Path:
    return write_csv(rows_to_frame(rows, columns), path)
