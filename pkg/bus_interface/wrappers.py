"""
CDMA master and slave wrappers.

The master wrapper encodes address and writedata and serialises the sum
frames over S chip cycles, holding waitrequest for the whole window. The
slave wrapper decodes them, performs the access and, for a read, encodes
readdata back over a further S cycles. Control bits are never coded.

Window of one transaction, extra_latency = L:

    write:  S request cycles + L stall cycles
    read:   S request cycles + L stall cycles + S readdata cycles
"""

from dataclasses import replace
from typing import List, Optional, Sequence, Tuple

import numpy as np

from bus_interface.signals import (
    ADDRESS_WIDTH, BusTransaction, PortSignals, TransactionKind, pack_lines, unpack_lines
)
from bus_interface.slave import SlaveModel
from codebook.codes import CodeBook
from codec.geometry import group_count
from codec.word import WordFrame, decode_word, encode_word
from utils.config import get_bus_params, get_codec_params
from utils.errors import DecodeError, GeometryError
from utils.logger import get_bus_logger

logger = get_bus_logger()


def frame_to_lines(frame: WordFrame) -> List[int]:
    """Line value of every chip cycle of a word frame."""
    sums = frame.as_array()
    return [pack_lines(sums[:, t], frame.group_size) for t in range(frame.group_size)]


def lines_to_frame(lines: Sequence[int], word_width: int, code_length: int) -> WordFrame:
    """Collect S cycles of line values back into a word frame."""
    if len(lines) != code_length:
        raise GeometryError(f"{len(lines)} cycles of lines for S={code_length}")
    groups = group_count(word_width, code_length)
    columns = [unpack_lines(value, groups, code_length) for value in lines]
    return WordFrame.from_array(np.array(columns, dtype=np.int64).T)


def _control(txn: BusTransaction) -> dict:
    return {
        'read': int(txn.kind is TransactionKind.READ),
        'write': int(txn.kind is TransactionKind.WRITE),
        'waitrequest': 1,
    }


def master_issue(
    txn: BusTransaction,
    book: CodeBook,
    word_width: Optional[int] = None
) -> List[PortSignals]:
    """
    Serialise a transaction onto the coded request lines.

    Args:
        txn: Transaction
        book: Code book shared by both wrappers
        word_width: Data width n (config if None)

    Returns:
        S PortSignals, one per chip cycle, read/write raw and waitrequest held

    Raises:
        IncompatibleGeometry: If S does not fit the 32-bit address or n-bit data
    """
    if word_width is None:
        word_width = int(get_codec_params().get('word_width', 32))
    address = frame_to_lines(encode_word(txn.address, book, ADDRESS_WIDTH))
    if txn.is_write:
        writedata = frame_to_lines(encode_word(txn.writedata, book, word_width))
    else:
        # Keep the geometry check for reads too
        group_count(word_width, book.length)
        writedata = [0] * book.length

    control = _control(txn)
    return [
        PortSignals(address_lines=a, writedata_lines=w, **control)
        for a, w in zip(address, writedata)
    ]


def slave_execute(
    signals: Sequence[PortSignals],
    book: CodeBook,
    slave: SlaveModel,
    word_width: Optional[int] = None,
    extra_latency: Optional[int] = None,
    strict: Optional[bool] = None,
    start_cycle: int = 0
) -> Tuple[SlaveModel, List[PortSignals]]:
    """
    Decode a request window, access the slave and build the response.

    Args:
        signals: The S request cycles issued by master_issue
        book: Code book shared by both wrappers
        slave: Target slave
        word_width: Data width n (config if None)
        extra_latency: Stall cycles before the access completes (config if None)
        strict: Strict decoding (codec config if None)
        start_cycle: Absolute cycle of the first request cycle, used in errors

    Returns:
        (updated slave, response cycles following the request window)

    Raises:
        DecodeError: Decoding failed, tagged with the cycle decoding completed
        AddressOutOfRange: Decoded address outside the slave window
    """
    if word_width is None:
        word_width = int(get_codec_params().get('word_width', 32))
    if extra_latency is None:
        extra_latency = int(get_bus_params().get('extra_latency', 0))

    signals = list(signals)
    if len(signals) != book.length:
        raise GeometryError(f"request window of {len(signals)} cycles for S={book.length}")
    first = signals[0]
    if any((s.read, s.write) != (first.read, first.write) for s in signals):
        raise GeometryError("control bits changed inside a request window")

    decoded_at = start_cycle + book.length - 1 + extra_latency
    try:
        address = decode_word(
            lines_to_frame([s.address_lines for s in signals], ADDRESS_WIDTH, book.length),
            book, strict
        )
        if first.write:
            data = decode_word(
                lines_to_frame([s.writedata_lines for s in signals], word_width, book.length),
                book, strict
            )
    except DecodeError as e:
        logger.debug(f"Slave decode failed: {e}")
        raise e.located(cycle=decoded_at) from e

    held = {'read': first.read, 'write': first.write, 'waitrequest': 1}
    response = [PortSignals(**held) for _ in range(extra_latency)]

    if first.write:
        slave = slave.write(address, data, cycle=decoded_at)
        logger.debug(f"Write 0x{data:X} -> 0x{address:08X}")
    else:
        value = slave.read(address, cycle=decoded_at)
        lines = frame_to_lines(encode_word(value, book, word_width))
        response.extend(PortSignals(readdata_lines=r, **held) for r in lines)
        logger.debug(f"Read 0x{address:08X} -> 0x{value:X}")

    return slave, response


def master_receive(
    txn: BusTransaction,
    response: Sequence[PortSignals],
    book: CodeBook,
    word_width: Optional[int] = None,
    strict: Optional[bool] = None,
    start_cycle: int = 0
) -> BusTransaction:
    """
    Decode the readdata cycles of a response on the master side.

    Args:
        txn: The issued transaction
        response: Cycles returned by slave_execute
        book: Code book
        word_width: Data width n (config if None)
        strict: Strict decoding (codec config if None)
        start_cycle: Absolute cycle of the first response cycle, used in errors

    Returns:
        The transaction, with readdata filled for a read
    """
    if txn.is_write:
        return txn
    if word_width is None:
        word_width = int(get_codec_params().get('word_width', 32))
    lines = [s.readdata_lines for s in response[-book.length:]]
    try:
        value = decode_word(lines_to_frame(lines, word_width, book.length), book, strict)
    except DecodeError as e:
        raise e.located(cycle=start_cycle + len(response) - 1) from e
    return replace(txn, readdata=value)
