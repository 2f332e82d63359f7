"""
Line-count table of the coded bus.
"""

from typing import Sequence

import pandas as pd

from codec.geometry import bus_width
from utils.errors import IncompatibleGeometry

CODE_LENGTHS = (4, 8, 16, 32)
WORD_WIDTHS = (8, 16, 64, 128, 256)
DASH = '-'


def table1_report(
    code_lengths: Sequence[int] = CODE_LENGTHS,
    word_widths: Sequence[int] = WORD_WIDTHS
) -> pd.DataFrame:
    """
    Coded line count for every (S, n) pair.

    Args:
        code_lengths: Row labels S
        word_widths: Column labels n

    Returns:
        DataFrame indexed by S with one column per n, holding the line
        count or '-' where S and n cannot form a coded bus
    """
    rows = {}
    for S in code_lengths:
        cells = []
        for n in word_widths:
            try:
                cells.append(bus_width(n, S))
            except IncompatibleGeometry:
                cells.append(DASH)
        rows[S] = cells

    table = pd.DataFrame.from_dict(rows, orient='index', columns=list(word_widths), dtype=object)
    table.index.name = 'S'
    table.columns.name = 'n'
    return table


def format_table(table: pd.DataFrame) -> str:
    """Plain-text rendering, one row per S."""
    header = ['S\\n'] + [str(n) for n in table.columns]
    lines = ['\t'.join(header)]
    for S, row in table.iterrows():
        lines.append('\t'.join([str(S)] + [str(cell) for cell in row]))
    return '\n'.join(lines) + '\n'
