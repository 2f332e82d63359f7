import textwrap

import pytest

from codebook.codes import walsh_codebook
from codebook.storage import save_codebook
from simulator.scenario import parse_config, scenario_from_dict
from utils.config import Config
from utils.errors import (
    AddressOutOfRange, AmbiguousBit, CdmaBusError, CodebookFormatError, ConfigError,
    DifferentialMismatch, IncompatibleGeometry, IntegrityViolation
)

MINIMAL = """\
masters: 1
word_width: 32
code_length: 8
codebook: {kind: walsh}
transactions: 10
slave: {base: 0, span: 64}
rng_seed: 1
"""


def write(tmp_path, text, name='scenario.yaml'):
    path = tmp_path / name
    path.write_text(textwrap.dedent(text))
    return path


def test_minimal_scenario(tmp_path):
    config = parse_config(write(tmp_path, MINIMAL))
    assert config.version == 1
    assert config.masters == 1 and config.code_length == 8
    assert config.write_fraction == 0.5
    assert config.mode == 'sequential'
    assert config.strict_decode and config.fail_on_mismatch


def test_missing_field_is_named(tmp_path):
    text = MINIMAL.replace("masters: 1\n", "")
    with pytest.raises(ConfigError) as info:
        parse_config(write(tmp_path, text))
    assert info.value.field == 'masters'
    assert info.value.exit_status == 2


def test_incompatible_geometry(tmp_path):
    text = MINIMAL.replace("code_length: 8", "code_length: 12")
    with pytest.raises(IncompatibleGeometry) as info:
        parse_config(write(tmp_path, text))
    assert (info.value.word_width, info.value.code_length) == (32, 12)


def test_address_bus_limits_code_length(tmp_path):
    text = MINIMAL.replace("word_width: 32", "word_width: 64").replace("code_length: 8", "code_length: 64")
    with pytest.raises(IncompatibleGeometry) as info:
        parse_config(write(tmp_path, text))
    assert info.value.word_width == 32


def test_unknown_codebook_kind(tmp_path):
    text = MINIMAL.replace("{kind: walsh}", "{kind: gold}")
    with pytest.raises(ConfigError) as info:
        parse_config(write(tmp_path, text))
    assert info.value.field == 'codebook.kind'


@pytest.mark.parametrize('extra, field', [
    ("colour: blue\n", 'colour'),
    ("version: 2\n", 'version'),
    ("mode: burst\n", 'mode'),
    ("error_rate: 2\n", 'error_rate'),
])
def test_invalid_fields(tmp_path, extra, field):
    with pytest.raises(ConfigError) as info:
        parse_config(write(tmp_path, MINIMAL + extra))
    assert info.value.field == field


def test_unaligned_slave(tmp_path):
    text = MINIMAL.replace("base: 0", "base: 2")
    with pytest.raises(ConfigError) as info:
        parse_config(write(tmp_path, text))
    assert info.value.field == 'slave.base'


def test_walsh_length_must_be_power_of_two(tmp_path):
    text = MINIMAL.replace("word_width: 32", "word_width: 24").replace("code_length: 8", "code_length: 6")
    with pytest.raises(IncompatibleGeometry):
        parse_config(write(tmp_path, text))
    data = scenario_from_dict({
        'masters': 1, 'word_width': 36, 'code_length': 6, 'codebook': {'kind': 'walsh'},
        'transactions': 1, 'slave': {'base': 0, 'span': 1}, 'rng_seed': 0,
    })
    assert data.code_length == 6


def test_custom_book_relative_path(tmp_path):
    save_codebook(walsh_codebook(8), tmp_path / 'books' / 'w8.txt')
    text = MINIMAL.replace("{kind: walsh}", "{kind: custom, path: books/w8.txt}")
    config = parse_config(write(tmp_path, text))
    assert config.codebook.path == str(tmp_path / 'books' / 'w8.txt')


def test_custom_book_length_must_match(tmp_path):
    save_codebook(walsh_codebook(4), tmp_path / 'w4.txt')
    text = MINIMAL.replace("{kind: walsh}", "{kind: custom, path: w4.txt}")
    with pytest.raises(ConfigError) as info:
        parse_config(write(tmp_path, text))
    assert info.value.field == 'codebook.path'


def test_lfsr_book_settings(tmp_path):
    text = MINIMAL.replace("{kind: walsh}", "{kind: lfsr-window, width: 4, taps: [3, 4]}")
    with pytest.raises(ConfigError) as info:
        parse_config(write(tmp_path, text))
    assert info.value.field == 'codebook.width'


def test_unreadable_scenario(tmp_path):
    with pytest.raises(ConfigError):
        parse_config(tmp_path / 'missing.yaml')
    with pytest.raises(ConfigError):
        parse_config(write(tmp_path, "masters: [1\n"))
    with pytest.raises(ConfigError):
        parse_config(write(tmp_path, "- 1\n- 2\n"))


def test_config_loader(tmp_path):
    (tmp_path / 'config.yaml').write_text("codec:\n  word_width: 64\n")
    config = Config(config_dir=str(tmp_path))
    assert config.get_codec_params() == {'word_width': 64}
    assert config.get_channel_params() == {}
    assert Config(config_dir=str(tmp_path / 'none')).load_config() == {}


def test_repository_defaults():
    config = Config()
    assert config.get_codebook_params()['lfsr']['taps'] == [1, 2, 3, 7]
    assert config.get_simulator_params()['mode'] == 'sequential'


@pytest.mark.parametrize('error, status', [
    (ConfigError('masters'), 2),
    (IncompatibleGeometry(32, 12), 2),
    (CodebookFormatError('bad'), 2),
    (AmbiguousBit(0, 0), 1),
    (IntegrityViolation(0, 2), 1),
    (AddressOutOfRange(0x10, 0, 4), 1),
    (DifferentialMismatch(3, 'readdata'), 1),
])
def test_exit_statuses(error, status):
    assert isinstance(error, CdmaBusError)
    assert error.exit_status == status


def test_decode_error_location():
    error = IntegrityViolation(3, 6).located(batch=1).located(cycle=40)
    assert (error.bit, error.batch, error.cycle) == (3, 1, 40)
    assert 'integrity violation' in str(error)
    assert 'cycle 40' in str(error)
