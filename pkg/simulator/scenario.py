"""
Scenario configuration.

A scenario is a YAML document (schema version 1):

    version: 1                 # optional, only 1 is accepted
    masters: 1                 # required
    word_width: 32             # required, n
    code_length: 8             # required, S
    codebook:                  # required
      kind: walsh              # walsh | lfsr-window | custom
      width: 8                 # lfsr-window: register count (config default)
      taps: [1, 2, 3, 7]       # lfsr-window: taps (config default)
      seed: "11111111"         # lfsr-window: R1..Rwidth, quoted (all-ones)
      mirrored: false          # lfsr-window
      path: book.txt           # custom: codebook file, relative to the scenario
    transactions: 10           # required
    slave: {base: 0, span: 64} # required, span in 4-byte words
    rng_seed: 1                # required
    write_fraction: 0.5        # optional, simulator defaults in config.yaml
    error_rate: 0.0
    extra_latency: 0
    mode: sequential           # sequential | concurrent
    strict_decode: true
    fail_on_mismatch: true
"""

from pathlib import Path
from typing import List, Literal, Optional, Union

import yaml
from pydantic import BaseModel, ConfigDict, Field, ValidationError

from codebook.codes import CodeBook, lfsr_parallel_codebook, walsh_codebook
from codebook.lfsr import LfsrConfig
from codebook.storage import load_codebook
from bus_interface.signals import ADDRESS_WIDTH
from codec.geometry import bus_width
from utils.config import get_codebook_params, get_simulator_params
from utils.errors import (
    CdmaBusError, ConfigError, IncompatibleGeometry, InsufficientWidth, UnsupportedLength
)
from utils.logger import get_simulator_logger

logger = get_simulator_logger()


class CodebookSpec(BaseModel):
    """Which code book a scenario uses."""

    model_config = ConfigDict(frozen=True, extra='forbid')

    kind: Literal['walsh', 'lfsr-window', 'custom']
    width: Optional[int] = Field(default=None, ge=2)
    taps: Optional[List[int]] = None
    seed: Optional[Union[str, List[int]]] = None
    mirrored: bool = False
    path: Optional[str] = None


class SlaveSpec(BaseModel):
    """Slave address window."""

    model_config = ConfigDict(frozen=True, extra='forbid')

    base: int = Field(ge=0)
    span: int = Field(ge=1)


class ScenarioConfig(BaseModel):
    """Declarative simulation input."""

    model_config = ConfigDict(frozen=True, extra='forbid')

    version: Literal[1] = 1
    masters: int = Field(ge=1)
    word_width: int = Field(ge=2)
    code_length: int = Field(ge=2)
    codebook: CodebookSpec
    transactions: int = Field(ge=0)
    slave: SlaveSpec
    rng_seed: int = Field(ge=0)
    write_fraction: float = Field(default=0.5, ge=0.0, le=1.0)
    error_rate: float = Field(default=0.0, ge=0.0, le=1.0)
    extra_latency: int = Field(default=0, ge=0)
    mode: Literal['sequential', 'concurrent'] = 'sequential'
    strict_decode: bool = True
    fail_on_mismatch: bool = True


def build_codebook(config: ScenarioConfig) -> CodeBook:
    """
    Build the scenario's code book, reporting problems as config errors.

    Args:
        config: Scenario

    Returns:
        CodeBook of length code_length
    """
    book_spec = config.codebook
    length = config.code_length

    if book_spec.kind == 'walsh':
        try:
            return walsh_codebook(length)
        except UnsupportedLength as e:
            raise ConfigError('code_length', str(e)) from e

    if book_spec.kind == 'lfsr-window':
        defaults = get_codebook_params().get('lfsr', {})
        params = {
            'width': book_spec.width if book_spec.width is not None else defaults.get('width', 8),
            'taps': book_spec.taps if book_spec.taps is not None else defaults.get('taps', [1, 2, 3, 7]),
            'seed': book_spec.seed if book_spec.seed is not None else defaults.get('seed'),
            'mirrored': book_spec.mirrored,
        }
        try:
            return lfsr_parallel_codebook(LfsrConfig.from_params(params), length)
        except InsufficientWidth as e:
            raise ConfigError('codebook.width', str(e)) from e
        except CdmaBusError as e:
            if isinstance(e, ConfigError):
                raise ConfigError(f"codebook.{e.field.split('.')[-1]}", str(e)) from e
            raise ConfigError('codebook.seed', str(e)) from e

    if book_spec.path is None:
        raise ConfigError('codebook.path', "custom code book needs a path")
    book = load_codebook(book_spec.path)
    if book.length != length:
        raise ConfigError(
            'codebook.path', f"book has S={book.length}, scenario code_length is {length}"
        )
    return book


def check_scenario(config: ScenarioConfig) -> CodeBook:
    """
    Cross-field checks of a scenario.

    Args:
        config: Scenario

    Returns:
        The scenario's code book

    Raises:
        IncompatibleGeometry: If the coded data or address bus cannot be formed
        ConfigError: For every other cross-field violation
    """
    bus_width(config.word_width, config.code_length)
    try:
        bus_width(ADDRESS_WIDTH, config.code_length)
    except IncompatibleGeometry as e:
        raise IncompatibleGeometry(
            ADDRESS_WIDTH, config.code_length, "the 32-bit address bus uses the same book"
        ) from e

    if config.mode == 'concurrent' and config.masters > config.code_length:
        raise ConfigError(
            'masters', f"{config.masters} concurrent masters exceed S={config.code_length} codes"
        )
    if config.slave.base % 4:
        raise ConfigError('slave.base', f"base 0x{config.slave.base:X} is not word-aligned")
    if config.slave.base + 4 * config.slave.span > (1 << ADDRESS_WIDTH):
        raise ConfigError('slave.span', "window exceeds the 32-bit address space")

    return build_codebook(config)


def _field_path(error: dict) -> str:
    path = '.'.join(str(part) for part in error['loc'])
    return path or 'scenario'


def scenario_from_dict(data: dict, base_dir: Optional[Path] = None) -> ScenarioConfig:
    """
    Validate a scenario mapping, filling optional fields from config.yaml.

    Args:
        data: Parsed scenario document
        base_dir: Directory custom code book paths are relative to

    Returns:
        ScenarioConfig (cross-field checks not yet applied)

    Raises:
        ConfigError: Naming the first offending field
    """
    if not isinstance(data, dict):
        raise ConfigError('scenario', "document must be a mapping")

    defaults = {
        key: value for key, value in get_simulator_params().items()
        if key in ScenarioConfig.model_fields
    }
    merged = {**defaults, **data}

    book_spec = merged.get('codebook')
    if isinstance(book_spec, dict) and book_spec.get('path') and base_dir is not None:
        path = Path(book_spec['path'])
        if not path.is_absolute():
            merged['codebook'] = {**book_spec, 'path': str(base_dir / path)}

    try:
        return ScenarioConfig.model_validate(merged)
    except ValidationError as e:
        first = e.errors()[0]
        raise ConfigError(_field_path(first), first['msg']) from e


def parse_config(path: Union[str, Path]) -> ScenarioConfig:
    """
    Load and fully validate a scenario file.

    Args:
        path: YAML scenario file

    Returns:
        Validated ScenarioConfig

    Raises:
        ConfigError: Missing or invalid field, named in the error
        IncompatibleGeometry: word_width/code_length cannot form a coded bus
    """
    path = Path(path)
    try:
        with open(path, 'r') as f:
            data = yaml.safe_load(f)
    except OSError as e:
        raise ConfigError('scenario', f"cannot read {path}: {e}") from e
    except yaml.YAMLError as e:
        raise ConfigError('scenario', f"{path} is not valid YAML: {e}") from e

    config = scenario_from_dict(data, base_dir=path.parent)
    check_scenario(config)
    logger.info(
        f"✅ Scenario loaded: {path.name} (n={config.word_width}, S={config.code_length}, "
        f"{config.codebook.kind}, {config.transactions} transactions)"
    )
    return config
