#!/usr/bin/env python3
"""
Point CSV Format
Header ``x,y`` then one point per row, written with 17 significant digits
"""

import logging
import re
from pathlib import Path

import numpy as np
import pandas as pd

from ..errors import PointFormatError
from ..sequence import SampleSequence

logger = logging.getLogger(__name__)

HEADER = ['x', 'y']
FLOAT_FORMAT = '%.17g'


def write_points(seq: SampleSequence, path) -> int:
    """Write the sequence in rank order; returns bytes written"""
    text = seq.to_frame().to_csv(index=False, float_format=FLOAT_FORMAT, lineterminator='\n')
    data = text.encode('utf-8')
    Path(path).write_bytes(data)
    logger.debug("Wrote %d points to %s", len(seq), path)
    return len(data)


def _line_from_parser_error(message: str) -> int:
    match = re.search(r'line (\d+)', message)
    return int(match.group(1)) if match else 0


def read_points(path, strategy: str = 'file', seed: int = 0) -> SampleSequence:
    """
    Read a points CSV

    Raises:
        PointFormatError: bad header, wrong field count, or a value that is not a finite number
    """
    try:
        frame = pd.read_csv(path, dtype=str, keep_default_na=False, skip_blank_lines=True)
    except pd.errors.EmptyDataError:
        raise PointFormatError("Points file is empty", 1)
    except pd.errors.ParserError as e:
        raise PointFormatError(f"Malformed points file: {e}", _line_from_parser_error(str(e)))

    columns = [c.strip() for c in frame.columns]
    if columns != HEADER:
        raise PointFormatError(f"Expected header 'x,y', got '{','.join(columns)}'", 1)

    values = np.zeros((len(frame), 2), dtype=float)
    for col, name in enumerate(frame.columns):
        cells = frame[name].str.strip()
        for row, cell in enumerate(cells):
            try:
                v = float(cell)
            except ValueError:
                raise PointFormatError(f"Value '{cell}' in column {HEADER[col]} is not a number", row + 2)
            if not np.isfinite(v):
                raise PointFormatError(f"Value '{cell}' in column {HEADER[col]} is not finite", row + 2)
            values[row, col] = v
    logger.debug("Read %d points from %s", len(values), path)
    return SampleSequence(strategy, seed, values, {'source': str(path)})
