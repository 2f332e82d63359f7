import itertools

import numpy as np
import pytest
from hypothesis import given
import hypothesis.strategies as st

from codebook.codes import walsh_codebook
from channel.medium import (
    ChannelConfig, ChannelFrame, assign_codes, despread, inject_errors, multi_access_round,
    spread, superpose
)
from codec.group import encode_batch
from utils.errors import (
    AmbiguousBit, CodeCollision, ConfigError, GeometryError, IntegrityViolation, RangeError
)

WALSH8 = walsh_codebook(8)

chip_vectors = st.integers(1, 8).flatmap(
    lambda users: st.lists(
        st.lists(st.integers(0, 1), min_size=8, max_size=8), min_size=users, max_size=users
    )
)


@given(chip_vectors)
def test_superpose_counts_ones(chips):
    frame = superpose(chips, length=8)
    assert frame.active_count == len(chips)
    assert list(frame.sums) == [sum(column) for column in zip(*chips)]
    assert all(0 <= p <= len(chips) for p in frame.sums)


@given(chip_vectors, st.randoms())
def test_superpose_ignores_user_order(chips, random):
    shuffled = list(chips)
    random.shuffle(shuffled)
    assert superpose(shuffled) == superpose(chips)


def test_superpose_without_users():
    assert superpose([], length=4) == ChannelFrame((0, 0, 0, 0), 0)
    with pytest.raises(GeometryError):
        superpose([])
    with pytest.raises(GeometryError):
        superpose([(0, 1, 0, 1), (1, 1)])


@pytest.mark.parametrize('chips, length', [
    ([(1, 1), (0, 1, 0, 1)], None),
    ([(0, 1, 0, 1), (1, 0, 1, 0, 1)], None),
    ([(0, 1, 0, 1), (1, 0, 1, 0)], 8),
])
def test_superpose_rejects_mismatched_lengths(chips, length):
    with pytest.raises(GeometryError):
        superpose(chips, length=length)


def test_multi_access_round_without_users():
    assert multi_access_round((), ()) == ()
    with pytest.raises(GeometryError):
        multi_access_round((1,), ())


def test_frame_range():
    with pytest.raises(RangeError):
        ChannelFrame((0, 3), 2)


def test_spread_xors_code(walsh4):
    assert spread(0, walsh4.codes[1]) == (0, 1, 0, 1)
    assert spread(1, walsh4.codes[1]) == (1, 0, 1, 0)


def test_all_users_every_pattern():
    codes = assign_codes(WALSH8, 8)
    assert len(codes) == 8
    for bits in itertools.product((0, 1), repeat=8):
        assert multi_access_round(bits, codes, strict=True) == bits


@pytest.mark.parametrize('users', range(2, 8))
def test_partial_load_skips_zero_code(users):
    codes = assign_codes(WALSH8, users)
    assert all(any(code.chips) for code in codes)
    assert len({code.index for code in codes}) == users
    for bits in itertools.product((0, 1), repeat=users):
        assert multi_access_round(bits, codes, strict=True) == bits


def test_assign_codes_keeps_zero_code_when_asked():
    codes = assign_codes(WALSH8, 3, skip_zero_code=False)
    assert [code.index for code in codes] == [0, 1, 2]
    with pytest.raises(ConfigError):
        assign_codes(WALSH8, 9)


def test_despread_law():
    codes = assign_codes(WALSH8, 5)
    bits = (1, 0, 0, 1, 1)
    frame = superpose([spread(b, c) for b, c in zip(bits, codes)])
    assert despread(frame, codes) == tuple((2 * b - 1) * 8 for b in bits)


def test_code_collision():
    code = WALSH8.codes[3]
    with pytest.raises(CodeCollision):
        multi_access_round((0, 1), (code, code))


def test_inject_errors_is_reproducible():
    config = ChannelConfig(max_users=8, code_length=8, error_rate=0.3, rng_seed=5)
    frame = superpose([spread(1, c) for c in WALSH8.codes])
    first = inject_errors(frame, config, round_index=4)
    assert inject_errors(frame, config, round_index=4) == first
    assert all(0 <= p <= 8 for p in first.sums)
    rounds = {inject_errors(frame, config, round_index=r).sums for r in range(20)}
    assert len(rounds) > 1


def test_no_errors_at_zero_rate():
    config = ChannelConfig(max_users=8, code_length=8)
    frame = superpose([spread(0, c) for c in WALSH8.codes])
    assert inject_errors(frame, config, 0) is frame


def test_channel_config_checks():
    with pytest.raises(ConfigError):
        ChannelConfig(max_users=9, code_length=8)
    with pytest.raises(ConfigError):
        ChannelConfig(max_users=2, code_length=8, error_rate=1.5)


def _oracle(sums, bits_count, strict):
    """Textbook despreading with plain loops."""
    S = len(sums)
    correlations = []
    for k in range(bits_count):
        chips = WALSH8.codes[k].chips
        correlations.append(sum(
            (S - 2 * p) if chip else (2 * p - S) for p, chip in zip(sums, chips)
        ))
    if strict and any(abs(c) != S for c in correlations):
        return IntegrityViolation
    if any(c == 0 for c in correlations):
        return AmbiguousBit
    return tuple(int(c > 0) for c in correlations)


@pytest.mark.parametrize('strict', [False, True])
def test_corrupted_frames_match_oracle(strict):
    config = ChannelConfig(max_users=8, code_length=8, error_rate=0.2, rng_seed=9)
    codes = WALSH8.codes
    rng = np.random.default_rng(21)
    for round_index in range(1000):
        bits = tuple(rng.integers(0, 2, size=8).tolist())
        frame = inject_errors(superpose([spread(b, c) for b, c in zip(bits, codes)]), config, round_index)
        expected = _oracle(frame.sums, 8, strict)
        if isinstance(expected, tuple):
            decoded = multi_access_round(bits, codes, strict=strict, frame=frame)
            assert decoded == expected
            if strict:
                # A frame that passes strict decoding is a valid codeword
                resent = encode_batch(np.array([decoded]), WALSH8)[0]
                assert tuple(resent.tolist()) == frame.sums
        else:
            with pytest.raises(expected):
                multi_access_round(bits, codes, strict=strict, frame=frame)


def test_four_users_on_walsh4(walsh4):
    codes = walsh4.codes
    frame = superpose([spread(b, c) for b, c in zip((1, 0, 0, 0), codes)])
    assert frame.sums == (1, 3, 3, 3)
    assert multi_access_round((1, 0, 0, 0), codes) == (1, 0, 0, 0)


def test_two_users_without_zero_code(walsh4):
    codes = walsh4.codes[1:3]
    for bits in itertools.product((0, 1), repeat=2):
        assert multi_access_round(bits, codes, strict=True) == bits


@given(chip_vectors, chip_vectors)
def test_superpose_is_additive(a, b):
    joined = superpose(a + b)
    assert joined.sums == tuple(x + y for x, y in zip(superpose(a).sums, superpose(b).sums))
    assert joined.active_count == len(a) + len(b)


def test_full_error_rate_resamples_reproducibly():
    config = ChannelConfig(max_users=8, code_length=8, error_rate=1.0, rng_seed=2)
    frame = superpose([spread(1, c) for c in WALSH8.codes])
    assert inject_errors(frame, config, 7) == inject_errors(frame, config, 7)
    other = ChannelConfig(max_users=8, code_length=8, error_rate=1.0, rng_seed=3)
    assert inject_errors(frame, config, 7) != inject_errors(frame, other, 7)
