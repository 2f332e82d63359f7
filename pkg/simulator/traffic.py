"""
Random memory-mapped traffic.
"""

from typing import List

import numpy as np

from bus_interface.signals import BusTransaction
from simulator.scenario import ScenarioConfig


def random_words(rng: np.random.Generator, count: int, word_width: int) -> List[int]:
    """Draw uniform word_width-bit values, built from 32-bit chunks."""
    chunks = -(-word_width // 32)
    draws = rng.integers(0, 1 << 32, size=(count, chunks), dtype=np.uint64)
    mask = (1 << word_width) - 1
    words = []
    for row in draws.tolist():
        value = 0
        for i, chunk in enumerate(row):
            value |= int(chunk) << (32 * i)
        words.append(value & mask)
    return words


def generate_traffic(config: ScenarioConfig) -> List[BusTransaction]:
    """
    Generate the transactions of a scenario.

    Addresses are word-aligned and uniform over the slave window, data is
    uniform over word_width bits and each transaction is a write with
    probability write_fraction. Transaction i belongs to master i mod M.

    Args:
        config: Scenario

    Returns:
        Exactly config.transactions transactions, fully determined by rng_seed
    """
    count = config.transactions
    rng = np.random.default_rng(config.rng_seed)

    writes = rng.random(count) < config.write_fraction
    offsets = rng.integers(0, config.slave.span, size=count)
    data = random_words(rng, count, config.word_width)

    traffic = []
    for i in range(count):
        address = config.slave.base + 4 * int(offsets[i])
        master = i % config.masters
        if writes[i]:
            traffic.append(BusTransaction.write(address, data[i], master=master))
        else:
            traffic.append(BusTransaction.read(address, master=master))
    return traffic
