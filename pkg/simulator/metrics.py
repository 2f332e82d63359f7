"""
Simulation metrics.
"""

from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, Union

import yaml


@dataclass
class SimMetrics:
    """
    Measured output of one scenario run.

    Attributes:
        total_chip_cycles: Simulated chip cycles
        transactions_completed: Transactions decoded and executed
        bits_transferred: Address plus data bits of completed transactions
        lines_used: Lines of one coded data bus
        lines_baseline: Lines of the uncoded bus (n)
        latency_histogram: Window length in cycles -> completed transactions
        integrity_violations: Transactions dropped on IntegrityViolation
        decode_errors: Transactions dropped on any other decode failure
        differential_mismatches: Completed transactions that disagreed with the
            reference bus (only counted when mismatches are not fatal)
    """

    total_chip_cycles: int = 0
    transactions_completed: int = 0
    bits_transferred: int = 0
    lines_used: int = 0
    lines_baseline: int = 0
    latency_histogram: Dict[int, int] = field(default_factory=dict)
    integrity_violations: int = 0
    decode_errors: int = 0
    differential_mismatches: int = 0

    @property
    def reduction_percent(self) -> float:
        if not self.lines_baseline:
            return 0.0
        return 100.0 * (1 - self.lines_used / self.lines_baseline)

    def record_latency(self, cycles: int) -> None:
        self.latency_histogram[cycles] = self.latency_histogram.get(cycles, 0) + 1

    def to_dict(self) -> dict:
        return {
            'total_chip_cycles': self.total_chip_cycles,
            'transactions_completed': self.transactions_completed,
            'bits_transferred': self.bits_transferred,
            'lines_used': self.lines_used,
            'lines_baseline': self.lines_baseline,
            'reduction_percent': self.reduction_percent,
            'latency_histogram': dict(sorted(self.latency_histogram.items())),
            'integrity_violations': self.integrity_violations,
            'decode_errors': self.decode_errors,
            'differential_mismatches': self.differential_mismatches,
        }


def write_metrics(metrics: SimMetrics, path: Union[str, Path]) -> Path:
    """Write metrics as a YAML document with SimMetrics field names."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, 'w') as f:
        yaml.safe_dump(metrics.to_dict(), f, sort_keys=False)
    return path
