"""Shared fixtures."""

import pytest

from codebook.codes import walsh_codebook
from simulator.scenario import scenario_from_dict


@pytest.fixture
def walsh4():
    return walsh_codebook(4)


@pytest.fixture
def walsh8():
    return walsh_codebook(8)


def scenario(**overrides):
    data = {
        'masters': 1,
        'word_width': 32,
        'code_length': 8,
        'codebook': {'kind': 'walsh'},
        'transactions': 10,
        'slave': {'base': 0, 'span': 64},
        'rng_seed': 1,
    }
    data.update(overrides)
    return scenario_from_dict(data)


@pytest.fixture
def make_scenario():
    """Minimal valid scenario with fields overridden by keyword."""
    return scenario
