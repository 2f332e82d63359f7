"""Command-line interface."""

from cli.main import Invocation, dispatch, main, parse_args
from simulator.scenario import parse_config

__all__ = ['Invocation', 'dispatch', 'main', 'parse_args', 'parse_config']
