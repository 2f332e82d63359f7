"""
Memory-mapped port signals.

Ports are named <prefix>_<interface>_<signal>, e.g. avs_s1_waitrequest.
Only address, writedata and readdata are CDMA coded; read, write and
waitrequest pass through raw.
"""

from dataclasses import dataclass
from enum import Enum
from typing import Optional, Sequence, Tuple

from codec.geometry import lines_per_group
from utils.errors import GeometryError, RangeError, UnknownPrefix

PREFIXES = {
    'avs': 'Avalon MM Slave',
    'avm': 'Avalon MM Master',
    'ats': 'Avalon MM Tristate Slave',
    'atm': 'Avalon MM Tristate Master',
    'cso': 'Clock output',
    'csi': 'Clock input',
}

CONTROL_SIGNALS = ('read', 'write', 'waitrequest')
CODED_SIGNALS = ('address', 'writedata', 'readdata')

ADDRESS_WIDTH = 32


def signal_name(prefix: str, interface: str, signal: str) -> str:
    """
    Port name in <prefix>_<interface>_<signal> form.

    Args:
        prefix: One of avs, avm, ats, atm, cso, csi
        interface: Interface name, e.g. s1
        signal: Avalon signal, e.g. waitrequest

    Returns:
        Joined name

    Raises:
        UnknownPrefix: If the prefix is not listed in PREFIXES
    """
    if prefix not in PREFIXES:
        raise UnknownPrefix(f"unknown port prefix '{prefix}' (expected one of {sorted(PREFIXES)})")
    return f"{prefix}_{interface}_{signal}"


class TransactionKind(str, Enum):
    READ = 'read'
    WRITE = 'write'


@dataclass(frozen=True)
class BusTransaction:
    """
    A memory-mapped request.

    Attributes:
        kind: read or write
        address: 32-bit byte address
        writedata: Data of a write, None for a read
        readdata: Data returned to a read once it completes
        master: Index of the issuing master
    """

    kind: TransactionKind
    address: int
    writedata: Optional[int] = None
    readdata: Optional[int] = None
    master: int = 0

    def __post_init__(self):
        object.__setattr__(self, 'kind', TransactionKind(self.kind))
        if (self.writedata is not None) != (self.kind is TransactionKind.WRITE):
            raise GeometryError("writedata must be present exactly for writes")
        if not 0 <= self.address < (1 << ADDRESS_WIDTH):
            raise RangeError(f"address 0x{self.address:X} is not a 32-bit value")

    @classmethod
    def read(cls, address: int, master: int = 0) -> "BusTransaction":
        return cls(TransactionKind.READ, address, master=master)

    @classmethod
    def write(cls, address: int, data: int, master: int = 0) -> "BusTransaction":
        return cls(TransactionKind.WRITE, address, writedata=data, master=master)

    @property
    def is_write(self) -> bool:
        return self.kind is TransactionKind.WRITE


@dataclass(frozen=True)
class PortSignals:
    """
    Port values during one chip cycle.

    The *_lines fields hold the packed binary value of all coded line
    groups: group g's sum occupies bits [g*w, (g+1)*w) with
    w = ceil(log2(S + 1)).
    """

    read: int = 0
    write: int = 0
    waitrequest: int = 0
    address_lines: int = 0
    writedata_lines: int = 0
    readdata_lines: int = 0

    def __post_init__(self):
        if self.read and self.write:
            raise GeometryError("read and write asserted in the same cycle")

    def value(self, signal: str) -> int:
        if signal in CODED_SIGNALS:
            return getattr(self, f"{signal}_lines")
        return getattr(self, signal)


def pack_lines(sums: Sequence[int], code_length: int) -> int:
    """Pack one sum per group into a line value."""
    width = lines_per_group(code_length)
    value = 0
    for group, p in enumerate(sums):
        value |= int(p) << (group * width)
    return value


def unpack_lines(value: int, groups: int, code_length: int) -> Tuple[int, ...]:
    """Split a line value into one sum per group."""
    width = lines_per_group(code_length)
    mask = (1 << width) - 1
    return tuple((value >> (group * width)) & mask for group in range(groups))
