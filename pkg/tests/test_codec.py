import numpy as np
import pytest
from hypothesis import given
import hypothesis.strategies as st

from codebook.codes import walsh_codebook
from codebook.validation import all_bit_vectors
from codec.geometry import bus_width, group_count, lines_per_group, reduction_percent
from codec.group import (
    SumFrame, correlate, correlate_batch, decode_group, encode_batch, encode_group,
    reconstruct_bipolar
)
from codec.word import (
    WordFrame, decode_word, encode_word, format_word_frame, parse_word_frame
)
from utils.errors import (
    AmbiguousBit, DecodeError, GeometryError, IncompatibleGeometry, IntegrityViolation, RangeError
)

WALSH8 = walsh_codebook(8)
WALSH16 = walsh_codebook(16)

LINE_COUNTS = {
    4: {8: 6, 16: 12, 64: 48, 128: 96, 256: 192},
    8: {8: 4, 16: 8, 64: 32, 128: 64, 256: 128},
    16: {8: None, 16: 5, 64: 20, 128: 40, 256: 80},
    32: {8: None, 16: None, 64: 12, 128: 24, 256: 48},
}


@pytest.mark.parametrize('S, n, lines', [
    (S, n, lines) for S, row in LINE_COUNTS.items() for n, lines in row.items()
])
def test_bus_width_table(S, n, lines):
    if lines is None:
        with pytest.raises(IncompatibleGeometry):
            bus_width(n, S)
    else:
        assert bus_width(n, S) == lines


def test_geometry_helpers():
    assert lines_per_group(8) == 4
    assert lines_per_group(7) == 3
    assert group_count(32, 8) == 4
    assert reduction_percent(32, 8) == 50.0


@pytest.mark.parametrize('n, S', [(32, 12), (32, 1), (8, 16)])
def test_incompatible_geometry_echoes_values(n, S):
    with pytest.raises(IncompatibleGeometry) as info:
        bus_width(n, S)
    assert (info.value.word_width, info.value.code_length) == (n, S)
    assert info.value.exit_status == 2


@pytest.mark.parametrize('bits, sums', [
    ((0, 0, 0, 0), (0, 2, 2, 2)),
    ((1, 0, 0, 0), (1, 3, 3, 3)),
    ((1, 1, 1, 1), (4, 2, 2, 2)),
])
def test_encode_group_examples(walsh4, bits, sums):
    frame = encode_group(bits, walsh4)
    assert frame.sums == sums
    assert decode_group(frame, walsh4) == bits


@pytest.mark.parametrize('S', [4, 8])
def test_round_trip_exhaustive(S):
    book = walsh_codebook(S)
    for bits in all_bit_vectors(S).tolist():
        assert decode_group(encode_group(bits, book), book, strict=True) == tuple(bits)


@pytest.mark.parametrize('S', [16, 32])
def test_correlation_law_random(S):
    book = walsh_codebook(S)
    bits = np.random.default_rng(S).integers(0, 2, size=(10_000, S))
    sums = encode_batch(bits, book)
    assert sums.min() >= 0 and sums.max() <= S
    np.testing.assert_array_equal(correlate_batch(sums, book), (2 * bits - 1) * S)


def test_batch_matches_single(walsh8):
    bits = (1, 0, 1, 1, 0, 0, 1, 0)
    assert tuple(encode_batch(np.array([bits]), walsh8)[0].tolist()) == encode_group(bits, walsh8).sums


@given(st.lists(st.integers(0, 1), min_size=16, max_size=16))
def test_correlate_each_code(bits):
    frame = encode_group(bits, WALSH16)
    for k, code in enumerate(WALSH16.codes):
        assert correlate(frame, code, 16) == (2 * bits[k] - 1) * 16


def test_flat_frame_is_ambiguous(walsh4):
    frame = SumFrame((2, 2, 2, 2))
    with pytest.raises(AmbiguousBit) as info:
        decode_group(frame, walsh4, strict=False)
    assert info.value.correlation == 0
    # Integrity is checked before ambiguity
    with pytest.raises(IntegrityViolation):
        decode_group(frame, walsh4, strict=True)


def test_single_corruption_only_caught_when_strict(walsh4):
    frame = SumFrame((1, 2, 2, 2))
    assert decode_group(frame, walsh4, strict=False) == (0, 0, 0, 0)
    with pytest.raises(IntegrityViolation) as info:
        decode_group(frame, walsh4, strict=True)
    assert abs(info.value.correlation) != 4


def test_sum_frame_range():
    with pytest.raises(RangeError):
        SumFrame((5, 0, 0, 0))
    with pytest.raises(RangeError):
        SumFrame((-1, 0, 0, 0))


def test_group_geometry(walsh4):
    with pytest.raises(GeometryError):
        encode_group((0, 1), walsh4)
    with pytest.raises(RangeError):
        encode_group((0, 1, 2, 0), walsh4)
    with pytest.raises(GeometryError):
        decode_group(SumFrame((0, 1)), walsh4)


def test_reconstruct_bipolar():
    assert reconstruct_bipolar(3, 8) == -2
    assert reconstruct_bipolar(8, 8) == 8
    assert reconstruct_bipolar(0, 5) == -5
    with pytest.raises(RangeError):
        reconstruct_bipolar(9, 8)


@given(st.integers(0, 2 ** 32 - 1))
def test_word_round_trip(word):
    frame = encode_word(word, WALSH8, 32)
    assert len(frame.groups) == 4
    assert decode_word(frame, WALSH8, strict=True) == word


@given(st.integers(0, 2 ** 64 - 1))
def test_wide_word_round_trip(word):
    assert decode_word(encode_word(word, WALSH16, 64), WALSH16) == word


def test_deadbeef(walsh8):
    frame = encode_word(0xDEADBEEF, walsh8, 32)
    assert frame.word_width == 32
    assert decode_word(frame, walsh8) == 0xDEADBEEF


def test_batch_order(walsh4):
    frame = encode_word(0x10, walsh4, 8)
    assert frame.groups[0].sums == (0, 2, 2, 2)
    assert frame.groups[1].sums == (1, 3, 3, 3)


def test_decode_error_names_batch(walsh8):
    sums = encode_word(0x12345678, walsh8, 32).as_array()
    sums[2, 0] = 4 if sums[2, 0] != 4 else 3
    with pytest.raises(DecodeError) as info:
        decode_word(WordFrame.from_array(sums), walsh8, strict=True)
    assert info.value.batch == 2


def test_word_range(walsh8):
    with pytest.raises(RangeError):
        encode_word(1 << 32, walsh8, 32)
    with pytest.raises(IncompatibleGeometry):
        encode_word(1, walsh8, 12)


def test_frame_text(walsh4):
    frame = encode_word(0, walsh4, 8)
    text = format_word_frame(frame)
    assert text == "0,2,2,2\n0,2,2,2\n"
    assert parse_word_frame(text) == frame
    assert parse_word_frame("0,2,2,2; 0,2,2,2") == frame


def test_frame_text_rejects_garbage():
    with pytest.raises(RangeError):
        parse_word_frame("0,a,2,2")
    with pytest.raises(GeometryError):
        parse_word_frame("\n")
    with pytest.raises(GeometryError):
        parse_word_frame("0,2,2,2\n0,2")
