"""
Word-level coding.

An n-bit word is split into n/S contiguous batches (bits 0..S-1 form the
first batch, bit 0 first). Every batch is encoded with the same book and
the batches travel in parallel on their own line groups, each group
serial over S chip cycles.
"""

from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import numpy as np

from codebook.codes import CodeBook
from codec.geometry import group_count
from codec.group import SumFrame, correlate_batch, encode_batch, threshold_correlations
from utils.config import get_codec_params
from utils.errors import DecodeError, GeometryError, RangeError
from utils.logger import get_codec_logger

logger = get_codec_logger()


@dataclass(frozen=True)
class WordFrame:
    """One sum frame per batch of a word."""

    groups: Tuple[SumFrame, ...]

    def __post_init__(self):
        object.__setattr__(self, 'groups', tuple(self.groups))
        if not self.groups:
            raise GeometryError("word frame without groups")
        sizes = {g.group_size for g in self.groups}
        if len(sizes) != 1:
            raise GeometryError(f"groups of mixed sizes {sorted(sizes)}")

    @property
    def group_size(self) -> int:
        return self.groups[0].group_size

    @property
    def word_width(self) -> int:
        return self.group_size * len(self.groups)

    def as_array(self) -> np.ndarray:
        """G x S array of sums."""
        return np.array([g.sums for g in self.groups], dtype=np.int64)

    @classmethod
    def from_array(cls, sums: np.ndarray) -> "WordFrame":
        return cls(tuple(SumFrame(tuple(row)) for row in np.asarray(sums).tolist()))


def word_to_batches(word: int, word_width: int, code_length: int) -> np.ndarray:
    """
    Split a word into its data batches.

    Returns:
        (n/S) x S array, entry [b, k] = bit b*S + k of the word
    """
    groups = group_count(word_width, code_length)
    if not 0 <= word < (1 << word_width):
        raise RangeError(f"word 0x{word:X} does not fit in {word_width} bits")
    bits = [(word >> i) & 1 for i in range(word_width)]
    return np.array(bits, dtype=np.int64).reshape(groups, code_length)


def batches_to_word(bits: Sequence[Sequence[int]]) -> int:
    """Reassemble a word from its batches in batch order."""
    word = 0
    position = 0
    for batch in bits:
        for bit in batch:
            word |= int(bit) << position
            position += 1
    return word


def encode_word(word: int, book: CodeBook, word_width: Optional[int] = None) -> WordFrame:
    """
    Encode an n-bit word batch by batch.

    Args:
        word: Word value
        book: Code book of length S
        word_width: n in bits (config if None)

    Returns:
        WordFrame with n/S groups

    Raises:
        IncompatibleGeometry: If S and n cannot form a coded bus
    """
    if word_width is None:
        word_width = int(get_codec_params().get('word_width', 32))
    batches = word_to_batches(word, word_width, book.length)
    sums = encode_batch(batches, book)
    return WordFrame.from_array(sums)


def decode_word(frame: WordFrame, book: CodeBook, strict: Optional[bool] = None) -> int:
    """
    Decode every batch and reassemble the word.

    Args:
        frame: Word frame
        book: Code book used for encoding
        strict: Strict integrity checking (config if None)

    Returns:
        Word value

    Raises:
        GeometryError: If the frame's group size differs from the book
        DecodeError: First failing batch, tagged with its batch index
    """
    if strict is None:
        strict = bool(get_codec_params().get('strict', False))
    if frame.group_size != book.length:
        raise GeometryError(
            f"frame groups of {frame.group_size} sums for a code book of length {book.length}"
        )
    correlations = correlate_batch(frame.as_array(), book)

    batches: List[Tuple[int, ...]] = []
    for index, row in enumerate(correlations):
        try:
            batches.append(threshold_correlations(row, book.length, strict))
        except DecodeError as e:
            logger.debug(f"Batch {index} failed: {e}")
            raise e.located(batch=index) from e
    return batches_to_word(batches)


def format_word_frame(frame: WordFrame) -> str:
    """One batch per line, sums as comma-separated decimals."""
    return '\n'.join(str(group) for group in frame.groups) + '\n'


def parse_word_frame(text: str) -> WordFrame:
    """
    Parse the text written by format_word_frame.

    Lines may also be separated by ';'. Blank lines are ignored.

    Raises:
        RangeError: If a value is not an integer in [0, S]
    """
    lines = [
        part.strip()
        for line in text.splitlines()
        for part in line.split(';')
        if part.strip()
    ]
    if not lines:
        raise GeometryError("empty frame text")
    try:
        rows = [tuple(int(v) for v in line.split(',')) for line in lines]
    except ValueError as e:
        raise RangeError(f"frame values must be integers: {e}") from e
    return WordFrame(tuple(SumFrame(row) for row in rows))
