# reprosamples/command/data.py
import csv
from pathlib import Path
import re
from typing import Optional, Tuple, Union

from loguru import logger
import numpy as np
import pandas as pd

from reprosamples.core.types import Dataset
from reprosamples.utils.constants import DATA_DIR
from reprosamples.utils.errors import CsvParseError, DimensionMismatch, InvalidConfig

TOY_X = DATA_DIR / "toy_x.csv"
TOY_Y = DATA_DIR / "toy_y.csv"

_RAGGED = re.compile(r"Expected (\d+) fields in line (\d+), saw (\d+)")


def _is_number(text: str) -> bool:
    try:
        float(text)
    except ValueError:
        return False
    return True


def has_header(path: Union[str, Path]) -> bool:
    """A first line with any non-numeric field is taken as a header"""
    with open(path, "r", newline="") as handle:
        first = next(csv.reader(handle), None)
    if not first:
        raise CsvParseError(f"{path} is empty", row=1)
    return not all(_is_number(field.strip()) for field in first)


def read_matrix(path: Union[str, Path]) -> np.ndarray:
    """
    Read a comma-separated numeric matrix

    Rows and columns in error messages are 1-based file positions.

    Raises:
        CsvParseError: on ragged rows, missing cells or non-numeric cells
    """
    path = Path(path)
    if not path.exists():
        raise CsvParseError(f"{path} does not exist")
    header = has_header(path)
    offset = 2 if header else 1
    try:
        frame = pd.read_csv(
            path,
            header=0 if header else None,
            dtype=str,
            keep_default_na=False,
            skip_blank_lines=True,
        )
    except pd.errors.ParserError as e:
        match = _RAGGED.search(str(e))
        if match:
            expected, line, seen = match.groups()
            raise CsvParseError(f"{path}: expected {expected} fields, saw {seen}", row=int(line)) from e
        raise CsvParseError(f"{path}: {e}") from e
    except pd.errors.EmptyDataError as e:
        raise CsvParseError(f"{path} holds no data") from e

    if frame.empty:
        raise CsvParseError(f"{path} holds no data rows")
    cells = frame.to_numpy(dtype=object)
    values = np.empty(cells.shape, dtype=float)
    for r, row in enumerate(cells):
        for c, cell in enumerate(row):
            text = "" if cell is None or (isinstance(cell, float) and np.isnan(cell)) else str(cell).strip()
            if text == "":
                raise CsvParseError(f"{path}: missing value", row=r + offset, column=c + 1)
            try:
                values[r, c] = float(text)
            except ValueError:
                raise CsvParseError(f"{path}: non-numeric value {text!r}", row=r + offset, column=c + 1) from None
    logger.debug(f"Read {values.shape[0]}x{values.shape[1]} matrix from {path} (header={header})")
    return values


def read_dataset(x_path: Union[str, Path], y_path: Union[str, Path]) -> Dataset:
    X = read_matrix(x_path)
    y = read_matrix(y_path)
    if y.shape[1] != 1:
        raise CsvParseError(f"{y_path} must have exactly one column, found {y.shape[1]}")
    if y.shape[0] != X.shape[0]:
        raise DimensionMismatch(f"{y_path} has {y.shape[0]} rows but {x_path} has {X.shape[0]}")
    return Dataset(y=y[:, 0], X=X)


def resolve_inputs(x: Optional[str], y: Optional[str], toy: bool) -> Tuple[Path, Path]:
    """The --x/--y pair, or the bundled toy files with --toy"""
    if toy:
        if x or y:
            raise InvalidConfig("--toy cannot be combined with --x/--y")
        return TOY_X, TOY_Y
    if not x or not y:
        raise InvalidConfig("both --x and --y are required unless --toy is given")
    return Path(x), Path(y)
