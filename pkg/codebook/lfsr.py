"""
Linear Feedback Shift Register.

Registers are indexed R1..Rwidth. Each clock the XOR of the tapped
registers enters R1 and every other register takes the value of its
predecessor (R_{i+1} <- R_i), so the content of Rwidth is dropped.

With taps that include Rwidth the step is a bijection on non-zero states
and the sequence repeats every (2^width - 1) clocks for a primitive tap
set. Taps that leave out Rwidth make the map lossy: the seed itself may
be off-cycle, which lfsr_orbit reports as a transient.
"""

from dataclasses import dataclass, field
from typing import Dict, FrozenSet, Iterable, Iterator, Optional, Tuple

from utils.config import get_codebook_params
from utils.errors import InvalidState, ConfigError
from utils.logger import get_codebook_logger

logger = get_codebook_logger()

Bits = Tuple[int, ...]


@dataclass(frozen=True)
class LfsrState:
    """Register contents R1..Rwidth."""

    registers: Bits

    def __post_init__(self):
        if any(bit not in (0, 1) for bit in self.registers):
            raise InvalidState(f"register bits must be 0/1, got {self.registers}")
        if not any(self.registers):
            raise InvalidState("all-zero LFSR state is a fixed point")

    @property
    def width(self) -> int:
        return len(self.registers)

    @classmethod
    def from_string(cls, bits: str) -> "LfsrState":
        """Build a state from 'R1R2...' written as 0/1 characters."""
        return cls(tuple(int(c) for c in bits))

    def __str__(self) -> str:
        return ''.join(str(b) for b in self.registers)


@dataclass(frozen=True)
class LfsrConfig:
    """
    Register count, tap set and seed.

    Attributes:
        width: Number of registers (>= 2)
        taps: 1-based register indices XORed into the feedback
        seed: Initial register contents (all-ones when omitted)
        mirrored: Count taps from the far end, tap i -> R_{width+1-i}
    """

    width: int
    taps: FrozenSet[int]
    seed: Optional[Bits] = None
    mirrored: bool = False
    feedback_registers: Tuple[int, ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.width < 2:
            raise ConfigError('lfsr.width', f"need at least 2 registers, got {self.width}")
        taps = frozenset(int(t) for t in self.taps)
        if not taps:
            raise ConfigError('lfsr.taps', "tap set is empty")
        bad = sorted(t for t in taps if not 1 <= t <= self.width)
        if bad:
            raise ConfigError('lfsr.taps', f"taps {bad} outside [1, {self.width}]")
        object.__setattr__(self, 'taps', taps)

        seed = self.seed
        if seed is None:
            seed = (1,) * self.width
        seed = tuple(int(b) for b in seed)
        if len(seed) != self.width:
            raise ConfigError('lfsr.seed', f"seed has {len(seed)} bits, width is {self.width}")
        if not any(seed):
            raise InvalidState("LFSR seed must be non-zero")
        object.__setattr__(self, 'seed', seed)

        if self.mirrored:
            regs = sorted(self.width + 1 - t for t in taps)
        else:
            regs = sorted(taps)
        object.__setattr__(self, 'feedback_registers', tuple(r - 1 for r in regs))

    @property
    def seed_state(self) -> LfsrState:
        return LfsrState(self.seed)

    @classmethod
    def from_params(cls, params: Optional[Dict] = None) -> "LfsrConfig":
        """
        Build a config from a dict shaped like the `codebook.lfsr` section.

        Args:
            params: Dictionary with width, taps, seed, mirrored (config if None)

        Returns:
            LfsrConfig instance
        """
        if params is None:
            params = get_codebook_params().get('lfsr', {})
        seed = params.get('seed')
        if isinstance(seed, str):
            seed = tuple(int(c) for c in seed)
        return cls(
            width=int(params.get('width', 8)),
            taps=frozenset(params.get('taps', (1, 2, 3, 7))),
            seed=seed,
            mirrored=bool(params.get('mirrored', False)),
        )


@dataclass(frozen=True)
class LfsrOrbit:
    """Transient length before the orbit enters its cycle, and the cycle length."""

    transient: int
    period: int

    @property
    def seed_on_cycle(self) -> bool:
        return self.transient == 0


def _advance(registers: Bits, feedback_registers: Iterable[int]) -> Bits:
    feedback = 0
    for index in feedback_registers:
        feedback ^= registers[index]
    return (feedback,) + registers[:-1]


def lfsr_step(state: LfsrState, config: LfsrConfig) -> LfsrState:
    """
    Advance the register by one clock.

    Args:
        state: Current register contents
        config: Tap configuration

    Returns:
        Next state (R1 <- feedback, R_{i+1} <- R_i)

    Raises:
        InvalidState: If the state is all-zero or the next state would be
    """
    if state.width != config.width:
        raise InvalidState(f"state width {state.width} != config width {config.width}")
    return LfsrState(_advance(state.registers, config.feedback_registers))


def lfsr_states(config: LfsrConfig) -> Iterator[Bits]:
    """Yield the states after step 1, 2, ... starting from the seed (zero included)."""
    registers = config.seed
    while True:
        registers = _advance(registers, config.feedback_registers)
        yield registers


def lfsr_orbit(config: LfsrConfig) -> LfsrOrbit:
    """
    Measure where the seed's orbit becomes periodic.

    Iterates until a state repeats. For a bijective step the first repeat
    is the seed itself and the transient is zero.

    Args:
        config: LFSR configuration

    Returns:
        LfsrOrbit with transient and period
    """
    first_seen = {config.seed: 0}
    for step, registers in enumerate(lfsr_states(config), start=1):
        if registers in first_seen:
            orbit = LfsrOrbit(
                transient=first_seen[registers],
                period=step - first_seen[registers]
            )
            break
        first_seen[registers] = step

    if not orbit.seed_on_cycle:
        logger.warning(
            f"⚠️  Seed {''.join(map(str, config.seed))} is off-cycle for taps "
            f"{sorted(config.taps)} on {config.width} registers: transient "
            f"{orbit.transient}, cycle {orbit.period}"
        )
    return orbit


def lfsr_period(config: LfsrConfig) -> int:
    """
    Number of clocks after which the register sequence repeats.

    When the seed lies on its cycle this is the smallest k >= 1 with the
    state after k steps equal to the seed. Otherwise it is the length of
    the cycle the orbit falls into (see lfsr_orbit).

    Args:
        config: LFSR configuration

    Returns:
        Period, at most 2^width - 1
    """
    period = lfsr_orbit(config).period
    maximal = 2 ** config.width - 1
    logger.debug(
        f"LFSR width={config.width} taps={sorted(config.taps)}: period {period} "
        f"(maximal {maximal})"
    )
    return period
