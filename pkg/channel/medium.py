"""
Shared summing medium.

Every transmitting user drives one chip per clock; the parallel counter
on the bus outputs how many of them are 1. The receiver needs the number
of users N that drove a frame, so it travels with the frame.
"""

from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import numpy as np

from codebook.codes import CodeBook, SpreadingCode
from codec.group import threshold_correlations
from utils.config import get_channel_params
from utils.errors import CodeCollision, ConfigError, GeometryError, RangeError
from utils.logger import get_channel_logger

logger = get_channel_logger()

Bits = Tuple[int, ...]


@dataclass(frozen=True)
class ChannelConfig:
    """
    Medium parameters.

    Attributes:
        max_users: M, at most S when codes come from one book
        code_length: S
        error_rate: Probability that a transmitted sum value is replaced
        rng_seed: Seed of the fault generator
        skip_zero_code: Leave the all-zero Walsh code unused when M < S
    """

    max_users: int
    code_length: int
    error_rate: float = 0.0
    rng_seed: int = 0
    skip_zero_code: bool = True

    def __post_init__(self):
        if not 1 <= self.max_users <= self.code_length:
            raise ConfigError(
                'max_users', f"{self.max_users} users need 1 <= M <= S={self.code_length}"
            )
        if not 0.0 <= self.error_rate <= 1.0:
            raise ConfigError('error_rate', f"{self.error_rate} outside [0, 1]")

    @classmethod
    def from_params(cls, max_users: int, code_length: int, **overrides) -> "ChannelConfig":
        """Fill unset fields from the `channel` config section."""
        params = {**get_channel_params(), **overrides}
        return cls(
            max_users=max_users,
            code_length=code_length,
            error_rate=float(params.get('error_rate', 0.0)),
            rng_seed=int(params.get('rng_seed', 0)),
            skip_zero_code=bool(params.get('skip_zero_code', True)),
        )


@dataclass(frozen=True)
class ChannelFrame:
    """Per-chip counts of asserted chips and the number of users that drove them."""

    sums: Tuple[int, ...]
    active_count: int

    def __post_init__(self):
        object.__setattr__(self, 'sums', tuple(int(p) for p in self.sums))
        bad = [p for p in self.sums if not 0 <= p <= self.active_count]
        if bad:
            raise RangeError(f"sums {bad} outside [0, {self.active_count}]")

    @property
    def length(self) -> int:
        return len(self.sums)


def superpose(
    chips_per_user: Sequence[Sequence[int]],
    length: Optional[int] = None
) -> ChannelFrame:
    """
    Sum the chips of all users per clock (parallel counter).

    Args:
        chips_per_user: One S-chip vector per user
        length: S, required when no user transmits

    Returns:
        ChannelFrame with sums[t] = number of users with chip[t] == 1

    Raises:
        GeometryError: If vector lengths differ
    """
    if not chips_per_user:
        if length is None:
            raise GeometryError("frame length unknown without users")
        return ChannelFrame((0,) * length, 0)

    lengths = {len(chips) for chips in chips_per_user}
    if len(lengths) != 1 or (length is not None and lengths != {length}):
        raise GeometryError(f"chip vectors of mismatched length: {sorted(lengths)}")
    chips = np.asarray(chips_per_user, dtype=np.int64)
    return ChannelFrame(tuple(chips.sum(axis=0).tolist()), len(chips_per_user))


def spread(bit: int, code: SpreadingCode) -> Bits:
    """XOR a data bit onto every chip of a code."""
    return tuple(bit ^ chip for chip in code.chips)


def assign_codes(
    book: CodeBook,
    users: int,
    skip_zero_code: Optional[bool] = None
) -> Tuple[SpreadingCode, ...]:
    """
    Pick one code per user from a book.

    With fewer users than codes the all-zero code (Walsh row 0) is left
    out by default, since it is the only code whose correlation depends
    on the user count.

    Args:
        book: Code book
        users: Number of users M <= S
        skip_zero_code: Skip the all-zero code when M < S (config if None)

    Returns:
        M distinct codes
    """
    if skip_zero_code is None:
        skip_zero_code = bool(get_channel_params().get('skip_zero_code', True))
    if not 1 <= users <= book.length:
        raise ConfigError('masters', f"{users} users for a book of {book.length} codes")

    codes: List[SpreadingCode] = list(book.codes)
    if skip_zero_code and users < book.length:
        codes = [c for c in codes if any(c.chips)] + [c for c in codes if not any(c.chips)]
    return tuple(codes[:users])


def multi_access_round(
    bits: Sequence[int],
    codes: Sequence[SpreadingCode],
    strict: bool = False,
    frame: Optional[ChannelFrame] = None
) -> Bits:
    """
    One concurrent transmission: spread, superpose, despread per user.

    Args:
        bits: One data bit per active user
        codes: One distinct code per user
        strict: Raise IntegrityViolation when |corr| != S
        frame: Received frame to decode instead of the clean superposition

    Returns:
        Decoded bit of every user

    Raises:
        CodeCollision: If two users share a code
        AmbiguousBit: If a correlation is zero
    """
    if len(bits) != len(codes):
        raise GeometryError(f"{len(bits)} bits for {len(codes)} codes")
    if not codes:
        return ()
    chip_sets = [code.chips for code in codes]
    if len(set(chip_sets)) != len(chip_sets):
        raise CodeCollision(f"duplicate spreading codes among {len(codes)} users")

    if frame is None:
        frame = superpose([spread(b, c) for b, c in zip(bits, codes)], length=codes[0].length)
    return threshold_correlations(despread(frame, codes), codes[0].length, strict)


def despread(frame: ChannelFrame, codes: Sequence[SpreadingCode]) -> Tuple[int, ...]:
    """
    Correlate a channel frame with each user's code, N = active_count.

    Args:
        frame: Received frame
        codes: Codes of the users to recover

    Returns:
        One correlation per code
    """
    centred = 2 * np.asarray(frame.sums, dtype=np.int64) - frame.active_count
    bipolar = 1 - 2 * np.asarray([code.chips for code in codes], dtype=np.int64)
    return tuple((bipolar @ centred).tolist())


def inject_errors(
    frame: ChannelFrame,
    config: ChannelConfig,
    round_index: int = 0
) -> ChannelFrame:
    """
    Replace sum values at random.

    Each value is replaced, with probability error_rate, by a uniform
    value in [0, active_count]. The generator is derived from
    (rng_seed, round_index), so a round is reproducible on its own.

    Args:
        frame: Transmitted frame
        config: Channel configuration
        round_index: Position of this frame in the run

    Returns:
        Possibly corrupted frame
    """
    if config.error_rate == 0.0:
        return frame
    rng = np.random.default_rng([config.rng_seed, round_index])
    hit = rng.random(frame.length) < config.error_rate
    values = rng.integers(0, frame.active_count + 1, size=frame.length)
    sums = np.where(hit, values, np.asarray(frame.sums, dtype=np.int64))
    if hit.any():
        logger.debug(f"Round {round_index}: {int(hit.sum())} sum values replaced")
    return ChannelFrame(tuple(sums.tolist()), frame.active_count)
