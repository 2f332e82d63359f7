"""
CDMA encoding and decoding of one S-bit group.

Encoding: every data bit k is XORed with the chips of code k and the S
results are counted per chip, giving the sum P(t) in [0, S] that travels
on the bus.

Decoding: each code is correlated with the received sums,

    corr_k = sum_t (N - 2 P(t))  where code k has chip 1
           + sum_t (2 P(t) - N)  where code k has chip 0

For an orthogonal book corr_k == (2 d_k - 1) * S, so a positive
correlation is bit 1 and a negative one bit 0.
"""

from dataclasses import dataclass
from typing import Optional, Sequence, Tuple, Union

import numpy as np

from codebook.codes import CodeBook, SpreadingCode
from utils.config import get_codec_params
from utils.errors import AmbiguousBit, GeometryError, IntegrityViolation, RangeError
from utils.logger import get_codec_logger

logger = get_codec_logger()

Bits = Tuple[int, ...]


@dataclass(frozen=True)
class SumFrame:
    """Per-chip sums P(t) of one S-bit group."""

    sums: Tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, 'sums', tuple(int(p) for p in self.sums))
        size = len(self.sums)
        bad = [p for p in self.sums if not 0 <= p <= size]
        if bad:
            raise RangeError(f"sums {bad} outside [0, {size}]")

    @property
    def group_size(self) -> int:
        return len(self.sums)

    def __str__(self) -> str:
        return ','.join(str(p) for p in self.sums)


def encode_batch(bits: np.ndarray, book: CodeBook) -> np.ndarray:
    """
    Encode many data vectors at once.

    Args:
        bits: V x S array of 0/1 data bits
        book: Code book of length S

    Returns:
        V x S array of chip sums
    """
    bits = np.atleast_2d(np.asarray(bits, dtype=np.int64))
    if bits.shape[1] != book.length:
        raise GeometryError(f"{bits.shape[1]} data bits for a code book of length {book.length}")
    chips = book.chip_matrix
    # d XOR c == d + c - 2dc, summed over k
    sums = bits.sum(axis=1, keepdims=True) + chips.sum(axis=0) - 2 * (bits @ chips)
    # Unipolar sums are never negative, so there is nothing to clamp
    assert (sums >= 0).all()
    return sums


def correlate_batch(sums: np.ndarray, book: CodeBook, n_users: Optional[int] = None) -> np.ndarray:
    """
    Correlate many sum frames against every code of a book.

    Args:
        sums: V x S array of chip sums
        book: Code book of length S
        n_users: Transmitting user count N (S if None)

    Returns:
        V x S array, entry [v, k] = correlation of frame v with code k
    """
    sums = np.atleast_2d(np.asarray(sums, dtype=np.int64))
    if sums.shape[1] != book.length:
        raise GeometryError(f"{sums.shape[1]} sums for a code book of length {book.length}")
    if n_users is None:
        n_users = book.length
    return (2 * sums - n_users) @ book.bipolar_matrix.T


def threshold_correlations(
    correlations: Sequence[int],
    magnitude: int,
    strict: bool
) -> Bits:
    """
    Turn correlations into bits.

    Args:
        correlations: One correlation per code
        magnitude: Expected |corr| of a clean frame (S)
        strict: Raise when any |corr| differs from magnitude

    Returns:
        Bits, 1 where the correlation is positive

    Raises:
        IntegrityViolation: Strict mode and |corr_k| != magnitude
        AmbiguousBit: corr_k == 0
    """
    correlations = [int(c) for c in correlations]
    if strict:
        for k, corr in enumerate(correlations):
            if abs(corr) != magnitude:
                raise IntegrityViolation(k, corr)
    for k, corr in enumerate(correlations):
        if corr == 0:
            raise AmbiguousBit(k, corr)
    return tuple(1 if corr > 0 else 0 for corr in correlations)


def _check_bits(bits: Sequence[int], length: int) -> np.ndarray:
    if len(bits) != length:
        raise GeometryError(f"{len(bits)} data bits for a code book of length {length}")
    array = np.asarray(bits, dtype=np.int64)
    if ((array != 0) & (array != 1)).any():
        raise RangeError(f"data bits must be 0/1, got {tuple(bits)}")
    return array


def encode_group(bits: Sequence[int], book: CodeBook) -> SumFrame:
    """
    Spread S data bits and sum them per chip.

    Args:
        bits: S data bits, bit k is spread with code k
        book: Code book of length S

    Returns:
        SumFrame with sums[t] = sum_k bits[k] XOR codes[k].chips[t]

    Raises:
        GeometryError: If bit count and book length differ
    """
    array = _check_bits(bits, book.length)
    return SumFrame(tuple(encode_batch(array, book)[0].tolist()))


def decode_group(frame: SumFrame, book: CodeBook, strict: Optional[bool] = None) -> Bits:
    """
    Recover S data bits from a sum frame.

    Args:
        frame: Received sums
        book: Code book used for encoding
        strict: Check every |corr| == S (config if None)

    Returns:
        S decoded bits

    Raises:
        GeometryError: If frame and book lengths differ
        IntegrityViolation: Strict mode and a correlation magnitude is off
        AmbiguousBit: A correlation is zero
    """
    if strict is None:
        strict = bool(get_codec_params().get('strict', False))
    if frame.group_size != book.length:
        raise GeometryError(f"frame of {frame.group_size} sums for a code book of length {book.length}")
    correlations = correlate_batch(frame.sums, book)[0]
    return threshold_correlations(correlations, book.length, strict)


def correlate(
    frame: Union[SumFrame, Sequence[int]],
    code: SpreadingCode,
    n_users: int
) -> int:
    """
    Correlate a frame against one code.

    Args:
        frame: Sum frame (anything with .sums, or a plain sequence)
        code: Spreading code
        n_users: Number of users N that drove the frame

    Returns:
        Signed correlation
    """
    sums = getattr(frame, 'sums', frame)
    if len(sums) != code.length:
        raise GeometryError(f"frame of {len(sums)} sums for a code of {code.length} chips")
    centred = 2 * np.asarray(sums, dtype=np.int64) - n_users
    return int(centred @ code.bipolar)


def reconstruct_bipolar(p: int, n_users: int) -> int:
    """
    Bipolar value 2P - N of a received sum P from N users.

    Args:
        p: Received sum
        n_users: Number of users N

    Returns:
        2P - N

    Raises:
        RangeError: If P is outside [0, N]
    """
    if not 0 <= p <= n_users:
        raise RangeError(f"sum {p} outside [0, {n_users}]")
    return 2 * p - n_users
