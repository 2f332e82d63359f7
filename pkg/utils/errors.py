"""
Exception hierarchy for CdmaBus.

Every error derives from CdmaBusError (a ValueError) and carries the exit
status the command line reports for it: 1 for domain failures, 2 for
usage and configuration failures.
"""

from typing import Optional


class CdmaBusError(ValueError):
    """Base class for all CdmaBus errors."""

    exit_status = 1


# ===== CODEBOOK =====

class InvalidState(CdmaBusError):
    """LFSR state or seed is all-zero."""


class InsufficientWidth(CdmaBusError):
    """LFSR has fewer registers than the requested code length."""


class UnsupportedLength(CdmaBusError):
    """Code length cannot be built for the requested code family."""


class CodebookFormatError(CdmaBusError):
    """Codebook file does not follow the text format."""

    exit_status = 2


# ===== CODEC =====

class GeometryError(CdmaBusError):
    """Lengths of bits, frames and codes disagree."""


class IncompatibleGeometry(GeometryError):
    """Word width and code length cannot form a coded bus."""

    exit_status = 2

    def __init__(self, word_width: int, code_length: int, reason: str = ""):
        self.word_width = word_width
        self.code_length = code_length
        detail = f": {reason}" if reason else ""
        super().__init__(
            f"incompatible geometry n={word_width}, S={code_length}{detail}"
        )


class RangeError(CdmaBusError):
    """Value outside its admissible range."""


class DecodeError(CdmaBusError):
    """Correlator could not recover a bit."""

    def __init__(
        self,
        bit: int,
        correlation: int,
        batch: Optional[int] = None,
        cycle: Optional[int] = None
    ):
        self.bit = bit
        self.correlation = correlation
        self.batch = batch
        self.cycle = cycle
        super().__init__(self._describe())

    def _describe(self) -> str:
        where = f"bit {self.bit}"
        if self.batch is not None:
            where += f" of batch {self.batch}"
        if self.cycle is not None:
            where += f" at cycle {self.cycle}"
        return f"{self.label} on {where} (correlation {self.correlation})"

    label = "decode error"

    def located(self, batch: Optional[int] = None, cycle: Optional[int] = None) -> "DecodeError":
        """Return a copy of this error tagged with batch and/or cycle."""
        return type(self)(
            self.bit,
            self.correlation,
            batch=self.batch if batch is None else batch,
            cycle=self.cycle if cycle is None else cycle,
        )


class AmbiguousBit(DecodeError):
    """Correlation is exactly zero."""

    label = "ambiguous bit"


class IntegrityViolation(DecodeError):
    """Strict decoding saw a correlation magnitude other than the code length."""

    label = "integrity violation"


# ===== CHANNEL =====

class CodeCollision(CdmaBusError):
    """Two users were given the same spreading code."""


# ===== BUS INTERFACE =====

class UnknownPrefix(CdmaBusError):
    """Port prefix is not an Avalon prefix."""


class AddressOutOfRange(CdmaBusError):
    """Decoded address falls outside the slave window."""

    def __init__(self, address: int, base: int, span: int, cycle: Optional[int] = None):
        self.address = address
        self.cycle = cycle
        limit = base + 4 * span
        at = f" at cycle {cycle}" if cycle is not None else ""
        super().__init__(
            f"address 0x{address:08X} outside [0x{base:08X}, 0x{limit:08X}){at}"
        )


# ===== SIMULATOR / CLI =====

class DifferentialMismatch(CdmaBusError):
    """Coded bus and reference bus disagree."""

    def __init__(self, index: int, detail: str):
        self.index = index
        super().__init__(f"transaction {index}: {detail}")


class ConfigError(CdmaBusError):
    """Scenario or option is missing or invalid."""

    exit_status = 2

    def __init__(self, field: str, message: str = ""):
        self.field = field
        super().__init__(f"{field}: {message}" if message else field)
