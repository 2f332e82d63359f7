"""
Command-line entry point.

    python -m cli codebook gen --kind walsh --length 8 --out walsh8.txt
    python -m cli codebook validate walsh8.txt
    python -m cli codebook show walsh8.txt
    python -m cli encode --word 0xDEADBEEF --book walsh8.txt > frame.txt
    python -m cli decode --book walsh8.txt --input frame.txt
    python -m cli simulate config/scenarios/minimal_walsh.yaml --metrics m.yaml --trace t.jsonl
    python -m cli simulate config/scenarios/minimal_walsh.yaml --sweep 1,2,3 --summary sweep.csv
    python -m cli table1

Machine output goes to stdout or files, diagnostics to stderr. Exit
status is 0 on success, 1 on domain failures and 2 on usage or
configuration errors.
"""

import argparse
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Dict, List, Optional, Sequence

import pandas as pd
import yaml
from joblib import Parallel, delayed

from codebook.codes import CodeBook, gram_matrix, lfsr_parallel_codebook, walsh_codebook
from codebook.lfsr import LfsrConfig
from codebook.storage import format_codebook, load_codebook, save_codebook
from codebook.validation import validate
from codec.word import decode_word, encode_word, format_word_frame, parse_word_frame
from simulator.engine import run_scenario
from simulator.metrics import write_metrics
from simulator.report import format_table, table1_report
from simulator.scenario import ScenarioConfig, parse_config
from simulator.trace import NullTrace, TraceRecorder, write_trace
from utils.config import get_codebook_params, get_codec_params
from utils.errors import CdmaBusError, ConfigError
from utils.logger import get_cli_logger, set_level

logger = get_cli_logger()

SUBCOMMANDS = ('codebook', 'encode', 'decode', 'simulate', 'table1')


@dataclass(frozen=True)
class Invocation:
    """
    One parsed command line.

    Attributes:
        subcommand: codebook, encode, decode, simulate or table1
        options: Remaining options by name
        inputs: Input file paths
        outputs: Output file paths by role
    """

    subcommand: str
    options: Dict[str, object] = field(default_factory=dict)
    inputs: List[Path] = field(default_factory=list)
    outputs: Dict[str, Path] = field(default_factory=dict)

    def __post_init__(self):
        if self.subcommand not in SUBCOMMANDS:
            raise ConfigError('subcommand', f"unknown subcommand '{self.subcommand}'")


def _hex_word(text: str) -> int:
    try:
        return int(text, 16)
    except ValueError:
        raise argparse.ArgumentTypeError(f"'{text}' is not a hex word")


def _seed_list(text: str) -> List[int]:
    """Seeds as '1,2,3' or a range '1-8'."""
    try:
        if '-' in text:
            first, last = (int(v) for v in text.split('-', 1))
            return list(range(first, last + 1))
        return [int(v) for v in text.split(',') if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"'{text}' is not a seed list")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog='cdmabus', description="CDMA coded shared-bus interconnect simulator"
    )
    parser.add_argument('--log-level', default=None, help="DEBUG, INFO, WARNING or ERROR")
    commands = parser.add_subparsers(dest='subcommand', required=True)

    codebook = commands.add_parser('codebook', help="Generate, validate or show a code book")
    actions = codebook.add_subparsers(dest='action', required=True)

    gen = actions.add_parser('gen', help="Write a code book file")
    gen.add_argument('--kind', choices=('walsh', 'lfsr-window'), default='walsh')
    gen.add_argument('--length', type=int, default=None, help="Code length S")
    gen.add_argument('--width', type=int, default=None, help="LFSR register count")
    gen.add_argument('--taps', type=int, nargs='+', default=None, help="LFSR taps, 1-based")
    gen.add_argument('--seed', default=None, help="LFSR seed R1..Rwidth as 0/1 characters")
    gen.add_argument('--mirrored', action='store_true')
    gen.add_argument('--out', type=Path, default=None, help="Output file (stdout if omitted)")

    check = actions.add_parser('validate', help="Check orthogonality and decodability")
    check.add_argument('book', type=Path)

    show = actions.add_parser('show', help="Print codes and Gram matrix")
    show.add_argument('book', type=Path)

    encode = commands.add_parser('encode', help="Encode a hex word into sum frames")
    encode.add_argument('--word', type=_hex_word, required=True)
    encode.add_argument('--book', type=Path, required=True)
    encode.add_argument('--width', type=int, default=None, help="Word width n")
    encode.add_argument('--out', type=Path, default=None)

    decode = commands.add_parser('decode', help="Decode sum frames into a hex word")
    decode.add_argument('--book', type=Path, required=True)
    source = decode.add_mutually_exclusive_group(required=True)
    source.add_argument('--frame', default=None, help="Batches separated by ';'")
    source.add_argument('--input', type=Path, default=None, help="Frame file")
    decode.add_argument('--strict', action='store_true')

    simulate = commands.add_parser('simulate', help="Run a scenario file")
    simulate.add_argument('config', type=Path)
    simulate.add_argument('--metrics', type=Path, default=Path('metrics.yaml'))
    simulate.add_argument('--trace', type=Path, default=Path('trace.jsonl'))
    simulate.add_argument('--sweep', type=_seed_list, default=None, help="Seeds, e.g. 1,2,3 or 1-8")
    simulate.add_argument('--summary', type=Path, default=Path('sweep.csv'))
    simulate.add_argument('--jobs', type=int, default=1, help="Parallel sweep runs")

    commands.add_parser('table1', help="Print coded line counts for S x n")

    return parser


def parse_args(argv: Optional[Sequence[str]] = None) -> Invocation:
    """Parse a command line into an Invocation."""
    args = vars(build_parser().parse_args(argv))
    subcommand = args.pop('subcommand')
    if args.get('log_level'):
        try:
            set_level(args['log_level'])
        except AttributeError:
            raise ConfigError('log-level', f"unknown level '{args['log_level']}'")

    inputs = [args.pop(key) for key in ('book', 'input', 'config') if args.get(key) is not None]
    outputs = {
        key: args.pop(key)
        for key in ('out', 'metrics', 'trace', 'summary')
        if args.get(key) is not None
    }
    return Invocation(subcommand, options=args, inputs=inputs, outputs=outputs)


def _emit(text: str, out: Optional[Path] = None) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        out.parent.mkdir(parents=True, exist_ok=True)
        out.write_text(text, newline='\n')
        logger.info(f"💾 Wrote {out}")


# ===== CODEBOOK =====

def _generate_book(options: Dict) -> CodeBook:
    length = options.get('length')
    if length is None:
        length = int(get_codebook_params().get('length', 8))
    if options['kind'] == 'walsh':
        return walsh_codebook(length)

    defaults = get_codebook_params().get('lfsr', {})
    params = {
        'width': options['width'] if options.get('width') is not None else defaults.get('width', 8),
        'taps': options['taps'] if options.get('taps') is not None else defaults.get('taps', [1, 2, 3, 7]),
        'seed': options['seed'] if options.get('seed') is not None else defaults.get('seed'),
        'mirrored': options.get('mirrored', False),
    }
    return lfsr_parallel_codebook(LfsrConfig.from_params(params), length)


def run_codebook(invocation: Invocation) -> int:
    options = invocation.options
    action = options['action']

    if action == 'gen':
        book = _generate_book(options)
        out = invocation.outputs.get('out')
        if out is None:
            _emit(format_codebook(book))
        else:
            save_codebook(book, out)
        return 0

    book = load_codebook(invocation.inputs[0])
    if action == 'show':
        gram = pd.DataFrame(gram_matrix(book))
        _emit(format_codebook(book) + '\ngram:\n' + gram.to_string() + '\n')
        return 0

    report = validate(book)
    _emit(yaml.safe_dump(report.to_dict(), sort_keys=False))
    if not report.orthogonal:
        print(f"error: code book is not orthogonal (worst off-diagonal {report.worst_offdiag})",
              file=sys.stderr)
        return 1
    if not report.decodable:
        print("error: code book does not round-trip data", file=sys.stderr)
        return 1
    return 0


# ===== ENCODE / DECODE =====

def run_encode(invocation: Invocation) -> int:
    book = load_codebook(invocation.inputs[0])
    width = invocation.options.get('width')
    if width is None:
        width = int(get_codec_params().get('word_width', 32))
    frame = encode_word(invocation.options['word'], book, width)
    _emit(format_word_frame(frame), invocation.outputs.get('out'))
    return 0


def run_decode(invocation: Invocation) -> int:
    book = load_codebook(invocation.inputs[0])
    if invocation.options.get('frame') is not None:
        text = invocation.options['frame']
    else:
        text = invocation.inputs[1].read_text()
    frame = parse_word_frame(text)
    word = decode_word(frame, book, strict=invocation.options.get('strict') or None)
    digits = -(-frame.word_width // 4)
    _emit(f"{word:0{digits}X}\n")
    return 0


# ===== SIMULATE =====

def _sweep_run(config: ScenarioConfig, seed: int) -> dict:
    metrics, _ = run_scenario(config.model_copy(update={'rng_seed': seed}), trace=NullTrace())
    row = metrics.to_dict()
    histogram = row.pop('latency_histogram')
    row['latency_max'] = max(histogram, default=0)
    return {'rng_seed': seed, **row}


def run_simulate(invocation: Invocation) -> int:
    config = parse_config(invocation.inputs[0])
    seeds = invocation.options.get('sweep')

    if seeds:
        jobs = invocation.options.get('jobs', 1)
        logger.info(f"🔄 Sweeping {len(seeds)} seeds with {jobs} job(s)")
        rows = Parallel(n_jobs=jobs)(delayed(_sweep_run)(config, seed) for seed in seeds)
        summary = pd.DataFrame(rows)
        path = invocation.outputs['summary']
        path.parent.mkdir(parents=True, exist_ok=True)
        summary.to_csv(path, index=False)
        _emit(summary.to_csv(index=False))
        return 0

    metrics, trace = run_scenario(config, trace=TraceRecorder())
    write_metrics(metrics, invocation.outputs['metrics'])
    write_trace(trace, invocation.outputs['trace'])
    _emit(yaml.safe_dump(metrics.to_dict(), sort_keys=False))
    return 0


def run_table1(invocation: Invocation) -> int:
    _emit(format_table(table1_report()))
    return 0


HANDLERS: Dict[str, Callable[[Invocation], int]] = {
    'codebook': run_codebook,
    'encode': run_encode,
    'decode': run_decode,
    'simulate': run_simulate,
    'table1': run_table1,
}


def dispatch(invocation: Invocation) -> int:
    """
    Run one invocation.

    Args:
        invocation: Parsed command line

    Returns:
        0 on success, 1 on domain failure, 2 on usage or config error
    """
    try:
        return HANDLERS[invocation.subcommand](invocation)
    except CdmaBusError as e:
        print(f"error: {e}", file=sys.stderr)
        logger.error(f"❌ {invocation.subcommand} failed with {type(e).__name__}: {e}")
        return e.exit_status
    except OSError as e:
        print(f"error: {e}", file=sys.stderr)
        logger.error(f"❌ {invocation.subcommand} failed: {e}")
        return 2


def main(argv: Optional[Sequence[str]] = None) -> int:
    try:
        invocation = parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    except CdmaBusError as e:
        print(f"error: {e}", file=sys.stderr)
        return e.exit_status
    return dispatch(invocation)
