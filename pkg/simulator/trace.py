"""
Signal traces.

One record per signal per chip cycle, written as JSON lines with the
fixed key order cycle, signal, value:

    {"cycle":0,"signal":"avm_m0_write","value":"0x1"}

Signal names follow <prefix>_<interface>_<signal>; coded signals carry
the packed line value, control signals 0x0/0x1.
"""

from dataclasses import dataclass
from pathlib import Path
from typing import List, Union

import pandas as pd

from bus_interface.signals import CODED_SIGNALS, CONTROL_SIGNALS, signal_name
from utils.config import get_bus_params

COLUMNS = ['cycle', 'signal', 'value']
SIGNALS = CONTROL_SIGNALS + CODED_SIGNALS


class PortNames:
    """Trace names of the master and slave ports."""

    def __init__(self):
        params = get_bus_params()
        self.master_prefix = params.get('master_prefix', 'avm')
        self.slave_prefix = params.get('slave_prefix', 'avs')
        self.slave_interface = params.get('slave_interface', 's0')

    def master(self, index: int, signal: str) -> str:
        return signal_name(self.master_prefix, f"m{index}", signal)

    def slave(self, signal: str) -> str:
        return signal_name(self.slave_prefix, self.slave_interface, signal)


@dataclass(frozen=True)
class TraceRecord:
    cycle: int
    signal: str
    value: str


class TraceRecorder:
    """In-memory trace of one run."""

    enabled = True

    def __init__(self):
        self.records: List[TraceRecord] = []

    def emit(self, cycle: int, signal: str, value: int) -> None:
        self.records.append(TraceRecord(cycle, signal, f"0x{value:x}"))

    def __len__(self) -> int:
        return len(self.records)

    def to_frame(self) -> pd.DataFrame:
        """Records as a DataFrame with columns cycle, signal, value."""
        return pd.DataFrame(
            [(r.cycle, r.signal, r.value) for r in self.records], columns=COLUMNS
        )

    def signal(self, name: str) -> List[int]:
        """Values of one signal in cycle order, as integers."""
        return [int(r.value, 16) for r in self.records if r.signal == name]

    def write(self, path: Union[str, Path]) -> Path:
        return write_trace(self, path)


class NullTrace(TraceRecorder):
    """Discards every record."""

    enabled = False

    def emit(self, cycle: int, signal: str, value: int) -> None:
        pass


def write_trace(trace: TraceRecorder, path: Union[str, Path]) -> Path:
    """Write a trace as JSON lines."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    frame = trace.to_frame()
    if frame.empty:
        path.write_text('')
    else:
        frame.to_json(path, orient='records', lines=True)
    return path


def read_trace(path: Union[str, Path]) -> pd.DataFrame:
    """Read a JSON-lines trace back into a DataFrame."""
    path = Path(path)
    if not path.read_text().strip():
        return pd.DataFrame(columns=COLUMNS)
    return pd.read_json(path, orient='records', lines=True, dtype={'value': str})[COLUMNS]
