import os
from typing import Dict, Optional, Sequence, Tuple

import numpy as np
import pandas as pd

from shadowban.helpers.exceptions import ParseException, StorageException


def format_floats(values) -> np.ndarray:
    # numpy prints the shortest repr that round-trips, so files reload bit-exactly
    return np.asarray(values, dtype=np.float64).astype(str)


def read_table(path: str,
               schema: Sequence[str],
               required: Optional[Sequence[str]] = None) -> Tuple[pd.DataFrame, np.ndarray]:
    """Read a headerless-or-headed CSV as strings.

    Returns the rows labelled with `schema` and the 1-based file line of each row.
    A first row equal to `schema` is treated as the header and skipped. Columns in
    `required` (all of them by default) may not hold empty cells.
    """
    try:
        frame = pd.read_csv(path, header=None, dtype=str, keep_default_na=False,
                            skip_blank_lines=False, skipinitialspace=True, encoding='utf-8')
    except FileNotFoundError:
        raise StorageException('file not found', path)
    except pd.errors.EmptyDataError:
        frame = pd.DataFrame(columns=range(len(schema)), dtype=str)
    except pd.errors.ParserError as e:
        raise ParseException(f'malformed CSV ({e})', path)
    except (OSError, UnicodeDecodeError) as e:
        raise StorageException(str(e), path)

    lines = np.arange(1, len(frame) + 1)
    if frame.shape[1] != len(schema):
        raise ParseException(f'expected {len(schema)} columns {",".join(schema)}, got {frame.shape[1]}', path, 1)
    frame.columns = list(schema)
    frame = frame.fillna('')
    if len(frame):
        frame = frame.apply(lambda column: column.str.strip())
    if len(frame) and list(frame.iloc[0]) == list(schema):
        frame = frame.iloc[1:]
        lines = lines[1:]
    blank = (frame == '').all(axis=1).to_numpy()
    frame = frame[~blank].reset_index(drop=True)
    lines = lines[~blank]
    for column in (schema if required is None else required):
        empty = np.flatnonzero((frame[column] == '').to_numpy())
        if len(empty):
            raise ParseException(f'missing value for "{column}"', path, int(lines[empty[0]]))
    return frame, lines


def parse_floats(frame: pd.DataFrame, column: str, path: str, lines: np.ndarray) -> np.ndarray:
    values = frame[column].to_numpy()
    try:
        return values.astype(np.float64)
    except ValueError:
        for value, line in zip(values, lines):
            try:
                float(value)
            except ValueError:
                raise ParseException(f'"{column}" is not a number: {value!r}', path, int(line))
        raise


def write_table(columns: Dict[str, Sequence], path: str) -> None:
    try:
        directory = os.path.dirname(path)
        if directory:
            os.makedirs(directory, exist_ok=True)
        pd.DataFrame(columns).to_csv(path, index=False, encoding='utf-8', lineterminator='\n')
    except OSError as e:
        raise StorageException(str(e), path)
