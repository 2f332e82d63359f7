import logging

import pandas as pd
import pytest
import yaml

from cli import Invocation, dispatch, main, parse_args
from utils.errors import ConfigError

SCENARIO = """\
masters: 1
word_width: 32
code_length: 8
codebook: {kind: walsh}
transactions: 10
slave: {base: 0, span: 64}
rng_seed: 1
"""


@pytest.fixture
def book(tmp_path):
    path = tmp_path / 'walsh8.txt'
    assert main(['codebook', 'gen', '--kind', 'walsh', '--length', '8', '--out', str(path)]) == 0
    return path


def test_table1(capsys):
    assert main(['table1']) == 0
    out = capsys.readouterr().out.splitlines()
    assert out[0].split('\t')[1:] == ['8', '16', '64', '128', '256']
    assert out[1:] == [
        '4\t6\t12\t48\t96\t192',
        '8\t4\t8\t32\t64\t128',
        '16\t-\t5\t20\t40\t80',
        '32\t-\t-\t12\t24\t48',
    ]


def test_codebook_gen_writes_file(book):
    assert book.read_text().splitlines()[0] == 'S=8 kind=walsh'


def test_codebook_gen_to_stdout(capsys):
    assert main(['codebook', 'gen', '--kind', 'lfsr-window', '--length', '8']) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[0] == 'S=8 kind=lfsr-window'
    assert lines[1] == '01110110'


def test_codebook_validate(book, capsys):
    assert main(['codebook', 'validate', str(book)]) == 0
    report = yaml.safe_load(capsys.readouterr().out)
    assert report['orthogonal'] and report['decodable']


def test_codebook_validate_duplicate_codes(tmp_path, capsys):
    path = tmp_path / 'dup.txt'
    path.write_text("S=4 kind=custom\n0101\n0101\n0011\n0110\n")
    assert main(['codebook', 'validate', str(path)]) == 1
    captured = capsys.readouterr()
    assert 'not orthogonal' in captured.err
    assert yaml.safe_load(captured.out)['orthogonal'] is False


def test_codebook_show(book, capsys):
    assert main(['codebook', 'show', str(book)]) == 0
    assert 'gram:' in capsys.readouterr().out


def test_malformed_book_is_usage_error(tmp_path, capsys):
    path = tmp_path / 'bad.txt'
    path.write_text("S=4 kind=walsh\n0000\n")
    assert main(['codebook', 'show', str(path)]) == 2
    assert capsys.readouterr().err.startswith('error:')


def test_encode_decode_round_trip(book, tmp_path, capsys):
    frame = tmp_path / 'frame.txt'
    assert main(['encode', '--word', '0xDEADBEEF', '--book', str(book), '--out', str(frame)]) == 0
    assert len(frame.read_text().splitlines()) == 4
    capsys.readouterr()

    assert main(['decode', '--book', str(book), '--input', str(frame)]) == 0
    captured = capsys.readouterr()
    assert captured.out == 'DEADBEEF\n'
    assert captured.err == ''


def test_encode_prints_frame(book, capsys):
    assert main(['encode', '--word', '0', '--book', str(book)]) == 0
    assert capsys.readouterr().out == '0,4,4,4,4,4,4,4\n' * 4


def test_decode_inline_frame(book, capsys):
    frame = ';'.join(['0,4,4,4,4,4,4,4'] * 4)
    assert main(['decode', '--book', str(book), '--frame', frame]) == 0
    assert capsys.readouterr().out == '00000000\n'


def test_decode_failure_is_domain_error(book, capsys):
    frame = ';'.join(['4,4,4,4,4,4,4,4'] * 4)
    assert main(['decode', '--book', str(book), '--frame', frame]) == 1
    captured = capsys.readouterr()
    assert 'ambiguous bit' in captured.err
    assert captured.out == ''


def test_encode_word_too_wide(book, capsys):
    assert main(['encode', '--word', '0x1FFFFFFFF', '--book', str(book)]) == 1
    assert capsys.readouterr().out == ''


def test_simulate(tmp_path, capsys):
    config = tmp_path / 'scenario.yaml'
    config.write_text(SCENARIO)
    metrics = tmp_path / 'out' / 'metrics.yaml'
    trace = tmp_path / 'out' / 'trace.jsonl'
    status = main(['simulate', str(config), '--metrics', str(metrics), '--trace', str(trace)])
    assert status == 0
    document = yaml.safe_load(metrics.read_text())
    assert document['transactions_completed'] == 10
    assert document['lines_used'] == 16
    assert len(trace.read_text().splitlines()) == 12 * document['total_chip_cycles']
    assert yaml.safe_load(capsys.readouterr().out) == document


def test_simulate_sweep(tmp_path):
    config = tmp_path / 'scenario.yaml'
    config.write_text(SCENARIO)
    summary = tmp_path / 'sweep.csv'
    assert main(['simulate', str(config), '--sweep', '1-3', '--summary', str(summary)]) == 0
    table = pd.read_csv(summary)
    assert table['rng_seed'].tolist() == [1, 2, 3]
    assert (table['transactions_completed'] == 10).all()


def test_simulate_bad_config(tmp_path, capsys):
    config = tmp_path / 'scenario.yaml'
    config.write_text(SCENARIO.replace('code_length: 8', 'code_length: 12'))
    assert main(['simulate', str(config)]) == 2
    assert 'incompatible geometry' in capsys.readouterr().err


def test_usage_errors(capsys):
    assert main([]) == 2
    assert main(['encode', '--word', 'xyz', '--book', 'b.txt']) == 2
    assert main(['--log-level', 'LOUD', 'table1']) == 2


def test_invocation():
    invocation = parse_args(['decode', '--book', 'b.txt', '--frame', '0,4'])
    assert invocation.subcommand == 'decode'
    assert [str(p) for p in invocation.inputs] == ['b.txt']
    assert invocation.options['frame'] == '0,4'
    with pytest.raises(ConfigError):
        Invocation('plot')


def test_dispatch_reports_missing_file(tmp_path, capsys):
    invocation = parse_args(['codebook', 'show', str(tmp_path / 'missing.txt')])
    assert dispatch(invocation) == 2


def test_dispatch_logs_failure(book, caplog):
    frame = ';'.join(['4,4,4,4,4,4,4,4'] * 4)
    with caplog.at_level(logging.ERROR, logger='CdmaBus'):
        assert main(['decode', '--book', str(book), '--frame', frame]) == 1
    errors = [r for r in caplog.records if r.levelno == logging.ERROR]
    assert errors and errors[0].name == 'CdmaBus.cli'
    assert 'AmbiguousBit' in errors[0].getMessage()
