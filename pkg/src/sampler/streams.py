"""Reproducible random streams for parallel Monte Carlo.

Paths are grouped into fixed blocks of ``STREAM_BLOCK`` consecutive path
indices. Block b of a run seeded with s draws from a Philox generator keyed by
(s, b), so the numbers a path sees depend only on the seed and its index and
never on how blocks are spread over workers. Results come back in block
order and are merged in path-index order.
"""
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, List

import numpy as np

from src.exceptions import DomainError

logger = logging.getLogger(__name__)

STREAM_BLOCK = 4096
_UINT64 = 2 ** 64


@dataclass(frozen=True)
class RandomStreamKey:
    seed: int
    index: int

    def __post_init__(self):
        if not (0 <= self.seed < _UINT64 and 0 <= self.index < _UINT64):
            raise DomainError(f"Stream key fields must be unsigned 64-bit, got ({self.seed}, {self.index})")

    def generator(self) -> np.random.Generator:
        # Philox keys are 128 bits: seed in the low word, block index in the high word.
        return np.random.Generator(np.random.Philox(key=(self.index << 64) | self.seed))


def block_sizes(n: int, block: int = STREAM_BLOCK) -> List[int]:
    if n < 1:
        raise DomainError(f"Need at least one path, got n={n}")
    full, rest = divmod(n, block)
    return [block] * full + ([rest] if rest else [])


def run_blocks(n: int, seed: int, work: Callable[[RandomStreamKey, int], object], workers: int = 1,
               block: int = STREAM_BLOCK) -> list:
    """Run ``work(key, size)`` over every block and return the results in block order.

    Args:
        n: Total number of paths
        seed: Run seed
        work: Function of (stream key, block size)
        workers: Thread count; has no influence on the results
        block: Paths per block

    Returns:
        List of per-block results, block 0 first
    """
    sizes = block_sizes(n, block)
    keys = [RandomStreamKey(seed, b) for b in range(len(sizes))]
    logger.info(f"Running {n} paths in {len(sizes)} blocks on {workers} worker(s), seed {seed}")
    if workers == 1:
        return [work(key, size) for key, size in zip(keys, sizes)]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(work, keys, sizes))
