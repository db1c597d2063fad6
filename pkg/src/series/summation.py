"""Chunked summation of long term sequences.

Both helpers evaluate terms for k = 1..n in fixed chunks so arbitrarily long
truncations stay within memory, and both are bit-reproducible for fixed
inputs. ``sum_terms`` may regroup (pairwise inside each chunk);
``sequential_sums`` never does.
"""
import math
from typing import Callable, Tuple

import numpy as np

CHUNK = 1 << 20


def sum_terms(term: Callable[[np.ndarray], np.ndarray], n: int) -> float:
    """Sum term(k) for k = 1..n; chunk totals are combined with an exact fsum."""
    totals = []
    for start in range(1, n + 1, CHUNK):
        k = np.arange(start, min(start + CHUNK, n + 1), dtype=np.float64)
        totals.append(float(np.sum(term(k))))
    return math.fsum(totals)


def sequential_sums(term: Callable[[np.ndarray], np.ndarray], n: int) -> Tuple[float, float]:
    """Partial sums (S_{n-1}, S_n) accumulated strictly left to right.

    Conditionally convergent series must not be regrouped, so each chunk is
    prefixed with the running total and accumulated with a cumulative sum.
    """
    previous, running = 0.0, 0.0
    for start in range(1, n + 1, CHUNK):
        k = np.arange(start, min(start + CHUNK, n + 1), dtype=np.float64)
        values = term(k)
        values[0] += running
        partial = np.cumsum(values)
        previous = float(partial[-2]) if partial.size > 1 else running
        running = float(partial[-1])
    return previous, running
