"""
Cycle-driven simulation engine.

One tick is one chip cycle. In sequential mode the masters take turns at
transaction granularity (transaction i belongs to master i mod M) and
every transaction runs through master_issue, the channel and
slave_execute, while an uncoded reference bus executes the same
transaction for comparison. Concurrent mode lives in simulator.concurrent.
"""

from dataclasses import replace
from typing import List, Optional, Tuple

from bus_interface.signals import ADDRESS_WIDTH, BusTransaction, PortSignals
from bus_interface.slave import ReferenceBus, SlaveModel, storage_mismatch
from bus_interface.wrappers import (
    frame_to_lines, lines_to_frame, master_issue, master_receive, slave_execute
)
from channel.medium import ChannelConfig, ChannelFrame, inject_errors
from codebook.codes import CodeBook
from codec.geometry import bus_width
from codec.word import WordFrame
from simulator.concurrent import FIELDS, ConcurrentBus
from simulator.metrics import SimMetrics
from simulator.scenario import ScenarioConfig, check_scenario
from simulator.trace import SIGNALS, PortNames, TraceRecorder
from simulator.traffic import generate_traffic
from utils.errors import AddressOutOfRange, DecodeError, DifferentialMismatch, IntegrityViolation
from utils.logger import get_simulator_logger

logger = get_simulator_logger()


def corrupt_lines(
    lines: List[int],
    width: int,
    book: CodeBook,
    channel: ChannelConfig,
    stream: int
) -> List[int]:
    """
    Pass S cycles of coded lines through the faulty medium.

    Every group is one channel frame driven by all S code slots; group g
    of stream k uses fault round k * groups + g.
    """
    if channel.error_rate == 0.0:
        return lines
    frame = lines_to_frame(lines, width, book.length)
    groups = len(frame.groups)
    received = [
        inject_errors(ChannelFrame(group.sums, book.length), channel, stream * groups + g).sums
        for g, group in enumerate(frame.groups)
    ]
    return frame_to_lines(WordFrame.from_array(received))


class SequentialBus:
    """Coded bus with one outstanding transaction, plus its reference bus."""

    def __init__(self, config: ScenarioConfig, book: CodeBook, trace: TraceRecorder):
        self.config = config
        self.book = book
        self.trace = trace
        self.names = PortNames()
        self.channel = ChannelConfig(
            max_users=book.length,
            code_length=book.length,
            error_rate=config.error_rate,
            rng_seed=config.rng_seed,
        )
        self.slave = SlaveModel(config.slave.base, config.slave.span)
        self.reference = ReferenceBus(config.slave.base, config.slave.span)
        self.metrics = SimMetrics(
            lines_used=bus_width(config.word_width, book.length),
            lines_baseline=config.word_width,
        )
        self.cycle = 0

    def _through_channel(
        self,
        signals: List[PortSignals],
        field: str,
        width: int,
        index: int
    ) -> List[PortSignals]:
        attr = f"{field}_lines"
        lines = corrupt_lines(
            [getattr(s, attr) for s in signals], width, self.book, self.channel,
            stream=index * len(FIELDS) + FIELDS.index(field)
        )
        return [replace(s, **{attr: v}) for s, v in zip(signals, lines)]

    def _emit(self, master: int, at_master: List[PortSignals], at_slave: List[PortSignals]) -> None:
        if not self.trace.enabled:
            return
        idle = PortSignals()
        for offset, (m, s) in enumerate(zip(at_master, at_slave)):
            cycle = self.cycle + offset
            for index in range(self.config.masters):
                port = m if index == master else idle
                for signal in SIGNALS:
                    self.trace.emit(cycle, self.names.master(index, signal), port.value(signal))
            for signal in SIGNALS:
                self.trace.emit(cycle, self.names.slave(signal), s.value(signal))

    def _stall(self, request: List[PortSignals]) -> List[PortSignals]:
        held = {'read': request[0].read, 'write': request[0].write, 'waitrequest': 1}
        return [PortSignals(**held) for _ in range(self.config.extra_latency)]

    def execute(self, index: int, txn: BusTransaction) -> None:
        """Run one transaction on the coded bus and the reference bus."""
        config = self.config
        n = config.word_width
        start = self.cycle

        request = master_issue(txn, self.book, n)
        received = self._through_channel(request, 'address', ADDRESS_WIDTH, index)
        if txn.is_write:
            received = self._through_channel(received, 'writedata', n, index)

        if [(s.read, s.write) for s in received] != [(s.read, s.write) for s in request]:
            raise DifferentialMismatch(index, "control lines changed between master and slave")

        response: List[PortSignals] = []
        seen_response: List[PortSignals] = []
        try:
            self.slave, response = slave_execute(
                received, self.book, self.slave, n, config.extra_latency,
                config.strict_decode, start_cycle=start
            )
            seen_response = response
            if not txn.is_write:
                seen_response = response[:config.extra_latency] + self._through_channel(
                    response[config.extra_latency:], 'readdata', n, index
                )
            done = master_receive(
                txn, seen_response, self.book, n, config.strict_decode,
                start_cycle=start + len(request)
            )
        except (DecodeError, AddressOutOfRange) as e:
            if isinstance(e, IntegrityViolation):
                self.metrics.integrity_violations += 1
            else:
                self.metrics.decode_errors += 1
            logger.debug(f"Transaction {index} dropped: {e}")
            if not response:
                response = seen_response = self._stall(request)
            self._emit(txn.master, request + seen_response, received + response)
            self.cycle += len(request) + len(response)
            return

        self._emit(txn.master, request + seen_response, received + response)
        window = len(request) + len(response)
        self.cycle += window

        expected = self.reference.execute(txn)
        detail = self._mismatch(txn, done.readdata, expected)
        if detail:
            if config.fail_on_mismatch:
                raise DifferentialMismatch(index, detail)
            self.metrics.differential_mismatches += 1
            logger.warning(f"⚠️  Transaction {index}: {detail}")

        self.metrics.transactions_completed += 1
        self.metrics.bits_transferred += ADDRESS_WIDTH + n
        self.metrics.record_latency(window)

    def _mismatch(
        self,
        txn: BusTransaction,
        readdata: Optional[int],
        expected: Optional[int]
    ) -> Optional[str]:
        """Describe how a completed transaction differs from the reference, None if it does not."""
        where = f"at 0x{txn.address:08X}"
        if not txn.is_write:
            if readdata == expected:
                return None
            shown = 'none' if expected is None else f"0x{expected:X}"
            return f"readdata 0x{readdata:X} != reference {shown} {where}"

        if expected is not None:
            return f"reference answered a write with 0x{expected:X} {where}"
        stored = self.slave.read(txn.address)
        reference = self.reference.slave.read(txn.address)
        if stored != reference:
            return f"stored 0x{stored:X} != reference 0x{reference:X} {where}"
        return None

    def run(self, traffic: List[BusTransaction]) -> None:
        for index, txn in enumerate(traffic):
            self.execute(index, txn)

    def finish(self, count: int) -> SimMetrics:
        """Compare final storage with the reference and close the metrics."""
        differing = storage_mismatch(self.slave, self.reference.slave)
        if differing:
            detail = f"final storage differs in {differing} words"
            if self.config.fail_on_mismatch:
                raise DifferentialMismatch(count, detail)
            logger.warning(f"⚠️  {detail}")
        self.metrics.total_chip_cycles = self.cycle
        return self.metrics


def run_scenario(
    config: ScenarioConfig,
    trace: Optional[TraceRecorder] = None
) -> Tuple[SimMetrics, TraceRecorder]:
    """
    Simulate a scenario on the coded bus and the uncoded reference bus.

    Args:
        config: Scenario
        trace: Trace sink (a fresh in-memory TraceRecorder if None)

    Returns:
        (metrics, trace)

    Raises:
        DifferentialMismatch: If coded and reference bus disagree and
            fail_on_mismatch is set
    """
    book = check_scenario(config)
    if trace is None:
        trace = TraceRecorder()
    traffic = generate_traffic(config)

    logger.info(
        f"🚀 Running {config.mode} scenario: {len(traffic)} transactions, "
        f"{config.masters} master(s), n={config.word_width}, S={book.length}"
    )

    if config.mode == 'concurrent':
        bus = ConcurrentBus(config, book, trace)
    else:
        bus = SequentialBus(config, book, trace)
    bus.run(traffic)
    metrics = bus.finish(len(traffic))

    logger.info(
        f"✅ Scenario done: {metrics.transactions_completed}/{len(traffic)} completed in "
        f"{metrics.total_chip_cycles} cycles, {metrics.lines_used}/{metrics.lines_baseline} lines "
        f"({metrics.reduction_percent:.1f}% reduction)"
    )
    return metrics, trace
