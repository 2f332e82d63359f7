"""
Spreading codes and code books.

A code book holds S binary codes of S chips each. Chips map to bipolar
values 0 -> +1, 1 -> -1, so XOR of chips becomes multiplication, and the
Gram matrix of bipolar inner products tells whether the codes can be
separated after summation.
"""

from dataclasses import dataclass
from functools import cached_property
from typing import Optional, Sequence, Tuple

import numpy as np
from scipy.linalg import hadamard

from codebook.lfsr import LfsrConfig, lfsr_states
from utils.config import get_codebook_params
from utils.errors import GeometryError, InsufficientWidth, UnsupportedLength
from utils.logger import get_codebook_logger

logger = get_codebook_logger()

KINDS = ('walsh', 'lfsr-window', 'custom')


@dataclass(frozen=True)
class SpreadingCode:
    """An S-chip binary code and its position in its book."""

    chips: Tuple[int, ...]
    index: int

    def __post_init__(self):
        if any(c not in (0, 1) for c in self.chips):
            raise GeometryError(f"chips must be 0/1, got {self.chips}")

    @property
    def length(self) -> int:
        return len(self.chips)

    @property
    def bipolar(self) -> np.ndarray:
        return 1 - 2 * np.asarray(self.chips, dtype=np.int64)

    def __str__(self) -> str:
        return ''.join(str(c) for c in self.chips)


@dataclass(frozen=True)
class CodeBook:
    """
    Family of S spreading codes of S chips.

    Attributes:
        length: Chips per code (S)
        codes: Exactly S codes
        kind: walsh, lfsr-window or custom
    """

    length: int
    codes: Tuple[SpreadingCode, ...]
    kind: str = 'custom'

    def __post_init__(self):
        if self.kind not in KINDS:
            raise GeometryError(f"unknown code book kind '{self.kind}'")
        if len(self.codes) != self.length:
            raise GeometryError(
                f"code book of length {self.length} holds {len(self.codes)} codes"
            )
        for code in self.codes:
            if code.length != self.length:
                raise GeometryError(
                    f"code {code.index} has {code.length} chips, book length is {self.length}"
                )

    @cached_property
    def chip_matrix(self) -> np.ndarray:
        """S x S array, row k = chips of code k."""
        matrix = np.array([code.chips for code in self.codes], dtype=np.int64)
        matrix.setflags(write=False)
        return matrix

    @cached_property
    def bipolar_matrix(self) -> np.ndarray:
        """S x S array of +1/-1 chip values."""
        matrix = 1 - 2 * self.chip_matrix
        matrix.setflags(write=False)
        return matrix

    @cached_property
    def gram(self) -> np.ndarray:
        """S x S bipolar inner products."""
        matrix = self.bipolar_matrix @ self.bipolar_matrix.T
        matrix.setflags(write=False)
        return matrix

    def rows(self) -> Tuple[str, ...]:
        return tuple(str(code) for code in self.codes)


def custom_codebook(rows: Sequence[Sequence[int]], kind: str = 'custom') -> CodeBook:
    """
    Build a code book from explicit chip rows.

    Args:
        rows: S rows of S chips (sequences of 0/1 or '0'/'1' strings)
        kind: Book kind label

    Returns:
        CodeBook
    """
    codes = tuple(
        SpreadingCode(tuple(int(c) for c in row), index)
        for index, row in enumerate(rows)
    )
    return CodeBook(length=len(codes), codes=codes, kind=kind)


def walsh_codebook(length: Optional[int] = None) -> CodeBook:
    """
    Walsh-Hadamard code book.

    Rows of the Sylvester Hadamard matrix of order S, with +1 -> chip 0
    and -1 -> chip 1.

    Args:
        length: Code length S, a power of two >= 2 (config if None)

    Returns:
        CodeBook with gram == S * I

    Raises:
        UnsupportedLength: If S is not a power of two >= 2
    """
    if length is None:
        length = int(get_codebook_params().get('length', 8))
    if length < 2 or length & (length - 1):
        raise UnsupportedLength(f"Walsh codes need a power-of-two length >= 2, got {length}")

    chips = (1 - hadamard(length)) // 2
    book = custom_codebook(chips.tolist(), kind='walsh')
    logger.debug(f"Walsh code book built: S={length}")
    return book


def lfsr_parallel_codebook(config: LfsrConfig, length: Optional[int] = None) -> CodeBook:
    """
    Code book read in parallel from the LFSR registers.

    The register is clocked S times from the seed. Code k is the time
    series of register R_k over those S clocks, as with a SIPO register.

    Args:
        config: LFSR configuration
        length: Code length S (config if None)

    Returns:
        CodeBook of kind lfsr-window

    Raises:
        InsufficientWidth: If the register has fewer than S stages
    """
    if length is None:
        length = int(get_codebook_params().get('length', 8))
    if config.width < length:
        raise InsufficientWidth(
            f"LFSR width {config.width} cannot feed {length} parallel codes"
        )

    states = lfsr_states(config)
    window = np.array([next(states) for _ in range(length)], dtype=np.int64)
    # window[t, k] = R_{k+1} after step t+1; codes are the register columns
    book = custom_codebook(window[:, :length].T.tolist(), kind='lfsr-window')
    logger.debug(
        f"LFSR code book built: S={length}, width={config.width}, taps={sorted(config.taps)}"
    )
    return book


def gram_matrix(book: CodeBook) -> np.ndarray:
    """
    Bipolar inner products of every pair of codes.

    Args:
        book: Code book

    Returns:
        Symmetric S x S integer matrix with S on the diagonal
    """
    return np.array(book.gram)
