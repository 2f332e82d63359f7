"""
Concurrent multi-master mode.

Every master owns one code of the book. In a round up to M masters
transmit at once: each bit position of a word is its own summing channel
that carries the superposition of every active master's spread bit, and
the slave wrapper despreads each master's bits with that master's code
and N = number of masters driving the channel. Reads are answered the
same way, the slave spreading each reader's data with the reader's code.

A round lasts S request cycles, extra_latency stall cycles and, when a
read completed decoding, S response cycles.
"""

from typing import Dict, List, Tuple

from bus_interface.signals import ADDRESS_WIDTH, CONTROL_SIGNALS, BusTransaction, pack_lines
from bus_interface.slave import ReferenceBus, SlaveModel, storage_mismatch
from channel.medium import ChannelConfig, assign_codes, despread, inject_errors, spread, superpose
from codebook.codes import CodeBook
from codec.geometry import lines_per_group
from codec.group import threshold_correlations
from simulator.metrics import SimMetrics
from simulator.scenario import ScenarioConfig
from simulator.trace import PortNames, TraceRecorder
from utils.errors import AddressOutOfRange, DecodeError, DifferentialMismatch, IntegrityViolation
from utils.logger import get_simulator_logger

logger = get_simulator_logger()

# Coded fields in the order their fault streams are numbered
FIELDS = ('address', 'writedata', 'readdata')


class ConcurrentBus:
    """M masters sharing one summing medium, one code each."""

    def __init__(self, config: ScenarioConfig, book: CodeBook, trace: TraceRecorder):
        self.config = config
        self.book = book
        self.trace = trace
        self.names = PortNames()
        self.codes = assign_codes(book, config.masters)
        self.channel = ChannelConfig(
            max_users=config.masters,
            code_length=book.length,
            error_rate=config.error_rate,
            rng_seed=config.rng_seed,
        )
        self.slave = SlaveModel(config.slave.base, config.slave.span)
        self.reference = ReferenceBus(config.slave.base, config.slave.span)
        self.metrics = SimMetrics(
            lines_used=config.word_width * lines_per_group(config.masters),
            lines_baseline=config.word_width,
        )
        self.cycle = 0
        self.stream_stride = max(ADDRESS_WIDTH, config.word_width)

    def transmit(
        self,
        round_index: int,
        field: str,
        words: Dict[int, int],
        width: int
    ) -> Tuple[Dict[int, object], List[int]]:
        """
        Send one word per user over `width` summing channels.

        Args:
            round_index: Round number, selects the fault streams
            field: address, writedata or readdata
            words: User index -> word
            width: Bits per word

        Returns:
            (user -> decoded word or DecodeError, packed line value per chip cycle)
        """
        S = self.book.length
        if not words:
            return {}, [0] * S

        users = sorted(words)
        codes = [self.codes[u] for u in users]
        base = (round_index * len(FIELDS) + FIELDS.index(field)) * self.stream_stride

        frames = []
        for position in range(width):
            chips = [spread((words[u] >> position) & 1, code) for u, code in zip(users, codes)]
            frame = inject_errors(superpose(chips, length=S), self.channel, base + position)
            frames.append(frame)

        correlations = [despread(frame, codes) for frame in frames]
        decoded: Dict[int, object] = {}
        for j, user in enumerate(users):
            try:
                bits = threshold_correlations(
                    [row[j] for row in correlations], S, self.config.strict_decode
                )
                decoded[user] = sum(bit << position for position, bit in enumerate(bits))
            except DecodeError as e:
                decoded[user] = e

        lines = [
            pack_lines([frame.sums[t] for frame in frames], self.config.masters)
            for t in range(S)
        ]
        return decoded, lines

    def _fail(self, error: Exception) -> None:
        if isinstance(error, IntegrityViolation):
            self.metrics.integrity_violations += 1
        else:
            self.metrics.decode_errors += 1

    def execute_round(self, round_index: int, first_index: int, txns: List[BusTransaction]) -> None:
        """Run one round of up to M simultaneous transactions."""
        config = self.config
        S = self.book.length
        n = config.word_width

        addresses, address_lines = self.transmit(
            round_index, 'address', {t.master: t.address for t in txns}, ADDRESS_WIDTH
        )
        data, writedata_lines = self.transmit(
            round_index, 'writedata', {t.master: t.writedata for t in txns if t.is_write}, n
        )

        stall = S + config.extra_latency - 1
        executed: List[Tuple[int, BusTransaction]] = []
        read_values: Dict[int, int] = {}
        for offset, txn in enumerate(txns):
            address = addresses[txn.master]
            value = data.get(txn.master) if txn.is_write else None
            failure = next((x for x in (address, value) if isinstance(x, DecodeError)), None)
            if failure is not None:
                self._fail(failure)
                logger.debug(f"Transaction {first_index + offset} dropped: {failure}")
                continue
            try:
                if txn.is_write:
                    self.slave = self.slave.write(address, value, cycle=self.cycle + stall)
                else:
                    read_values[txn.master] = self.slave.read(address, cycle=self.cycle + stall)
            except AddressOutOfRange as e:
                self._fail(e)
                continue
            executed.append((first_index + offset, txn))

        readdata, readdata_lines = self.transmit(round_index, 'readdata', read_values, n)

        request_window = S + config.extra_latency
        window = request_window + (S if read_values else 0)
        self._emit(txns, address_lines, writedata_lines, readdata_lines, request_window, window)

        for index, txn in executed:
            received = None
            if not txn.is_write:
                received = readdata[txn.master]
                if isinstance(received, DecodeError):
                    self._fail(received)
                    continue
            expected = self.reference.execute(txn)
            if not txn.is_write and received != expected:
                detail = f"readdata 0x{received:X} != reference 0x{expected:X} at 0x{txn.address:08X}"
                if config.fail_on_mismatch:
                    raise DifferentialMismatch(index, detail)
                self.metrics.differential_mismatches += 1
                logger.warning(f"⚠️  Transaction {index}: {detail}")
            self.metrics.transactions_completed += 1
            self.metrics.bits_transferred += ADDRESS_WIDTH + n
            self.metrics.record_latency(request_window if txn.is_write else request_window + S)

        self.cycle += window

    def _emit(
        self,
        txns: List[BusTransaction],
        address_lines: List[int],
        writedata_lines: List[int],
        readdata_lines: List[int],
        request_window: int,
        window: int
    ) -> None:
        if not self.trace.enabled:
            return
        S = self.book.length
        active = {txn.master: txn for txn in txns}
        for offset in range(window):
            cycle = self.cycle + offset
            for master in range(self.config.masters):
                txn = active.get(master)
                if txn is None:
                    values = dict.fromkeys(CONTROL_SIGNALS, 0)
                else:
                    # Readers hold their request until the response is through
                    held = offset < (request_window if txn.is_write else window)
                    values = {
                        'read': int(held and not txn.is_write),
                        'write': int(held and txn.is_write),
                        'waitrequest': int(held),
                    }
                for signal in CONTROL_SIGNALS:
                    self.trace.emit(cycle, self.names.master(master, signal), values[signal])
            response = offset - request_window
            shared = {
                'address': address_lines[offset] if offset < S else 0,
                'writedata': writedata_lines[offset] if offset < S else 0,
                'readdata': readdata_lines[response] if 0 <= response < S else 0,
            }
            for signal, value in shared.items():
                self.trace.emit(cycle, self.names.slave(signal), value)

    def run(self, traffic: List[BusTransaction]) -> None:
        M = self.config.masters
        for round_index, first in enumerate(range(0, len(traffic), M)):
            self.execute_round(round_index, first, traffic[first:first + M])

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
