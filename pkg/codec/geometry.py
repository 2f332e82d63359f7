"""
Coded bus geometry.

An n-bit bus split into n/S batches needs, per batch, enough lines to
carry a chip sum in [0, S] in binary: ceil(log2(S + 1)) lines.
"""

from utils.errors import IncompatibleGeometry


def lines_per_group(code_length: int) -> int:
    """Lines needed to carry one sum in [0, S]: ceil(log2(S + 1))."""
    return int(code_length).bit_length()


def group_count(word_width: int, code_length: int) -> int:
    """
    Number of S-bit batches in an n-bit word.

    Raises:
        IncompatibleGeometry: If S < 2, S > n or S does not divide n
    """
    if code_length < 2:
        raise IncompatibleGeometry(word_width, code_length, "code length below 2")
    if code_length > word_width:
        raise IncompatibleGeometry(word_width, code_length, "code longer than the word")
    if word_width % code_length:
        raise IncompatibleGeometry(word_width, code_length, "code length does not divide the word")
    return word_width // code_length


def bus_width(word_width: int, code_length: int) -> int:
    """
    Line count of a CDMA coded bus.

    (n/S) * ceil(log2(S + 1)), which is (n/S) * (log2 S + 1) for a
    power-of-two S. An 8-chip code halves a 32-bit bus.

    Args:
        word_width: Uncoded bus width n in bits
        code_length: Code length S

    Returns:
        Number of lines

    Raises:
        IncompatibleGeometry: If S < 2, S > n or S does not divide n
    """
    return group_count(word_width, code_length) * lines_per_group(code_length)


def reduction_percent(word_width: int, code_length: int) -> float:
    """Share of lines saved against the uncoded n-line bus, in percent."""
    return 100.0 * (1 - bus_width(word_width, code_length) / word_width)
