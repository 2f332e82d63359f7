"""
Register-file slave and the uncoded reference bus.
"""

from dataclasses import dataclass, field, replace
from typing import Optional, Tuple

from bus_interface.signals import BusTransaction
from utils.errors import AddressOutOfRange, ConfigError


@dataclass(frozen=True)
class SlaveModel:
    """
    Word-addressed storage behind the slave wrapper.

    Attributes:
        base: First byte address
        span: Number of 4-byte words
        storage: Word values, zero-initialised
    """

    base: int
    span: int
    storage: Tuple[int, ...] = field(default=(), repr=False)

    def __post_init__(self):
        if self.span < 1:
            raise ConfigError('slave.span', f"span must be >= 1, got {self.span}")
        if self.base % 4:
            raise ConfigError('slave.base', f"base 0x{self.base:X} is not word-aligned")
        if self.base + 4 * self.span > (1 << 32):
            raise ConfigError('slave.span', "window exceeds the 32-bit address space")
        if not self.storage:
            object.__setattr__(self, 'storage', (0,) * self.span)
        elif len(self.storage) != self.span:
            raise ConfigError('slave.storage', f"{len(self.storage)} words for span {self.span}")

    @property
    def limit(self) -> int:
        return self.base + 4 * self.span

    def contains(self, address: int) -> bool:
        return self.base <= address < self.limit

    def index(self, address: int, cycle: Optional[int] = None) -> int:
        if not self.contains(address):
            raise AddressOutOfRange(address, self.base, self.span, cycle=cycle)
        return (address - self.base) // 4

    def read(self, address: int, cycle: Optional[int] = None) -> int:
        return self.storage[self.index(address, cycle)]

    def write(self, address: int, value: int, cycle: Optional[int] = None) -> "SlaveModel":
        i = self.index(address, cycle)
        storage = self.storage[:i] + (value,) + self.storage[i + 1:]
        return replace(self, storage=storage)


def reference_execute(
    txn: BusTransaction,
    slave: SlaveModel
) -> Tuple[SlaveModel, Optional[int]]:
    """
    Execute a transaction on an uncoded bus, address and data wired directly.

    Args:
        txn: Transaction
        slave: Reference slave

    Returns:
        (updated slave, readdata or None for a write)
    """
    if txn.is_write:
        return slave.write(txn.address, txn.writedata), None
    return slave, slave.read(txn.address)


def storage_mismatch(coded: SlaveModel, reference: SlaveModel) -> int:
    """Number of words in which two slaves differ."""
    return sum(a != b for a, b in zip(coded.storage, reference.storage))


class ReferenceBus:
    """Uncoded bus in front of its own slave, the oracle of a coded run."""

    def __init__(self, base: int, span: int):
        self.slave = SlaveModel(base, span)

    def execute(self, txn: BusTransaction) -> Optional[int]:
        """Run one transaction; readdata for a read, None for a write."""
        self.slave, readdata = reference_execute(txn, self.slave)
        return readdata
