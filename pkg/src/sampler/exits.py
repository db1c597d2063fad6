"""Exact exit-point samplers.

None of these discretize a path: each draws the exit point of a simple domain
(uniform on the circle from the center, Cauchy on the line) and carries it to
the target domain with a conformal map, which is exact because the image of a
stopped Brownian motion is a time-changed Brownian motion stopped on the image
boundary.
"""
import math

import numpy as np

from src.exceptions import DomainError
from src.geometry.domains import check_point
from src.geometry.maps import ConformalMapSpec, MapKind
from src.sampler.streams import RandomStreamKey, run_blocks


def sample_exit_disk(a: complex, key: RandomStreamKey, size: int = 1) -> np.ndarray:
    """Exit points of the unit disk for paths started at ``a``.

    A uniform point of the circle is the exit law from 0; the automorphism
    z -> (z + a) / (1 + conj(a) z) moves the start to ``a`` and keeps the circle.
    """
    check_point(a, "a")
    if not abs(a) < 1:
        raise DomainError(f"Start point must lie in the open unit disk, got {a}")
    theta = key.generator().uniform(0.0, 2 * np.pi, size)
    return ConformalMapSpec.automorphism(-complex(a)).eval(np.exp(1j * theta))


def sample_exit_halfplane(v: float, key: RandomStreamKey, size: int = 1) -> np.ndarray:
    """Exit points on the real axis for paths started at v i (Cauchy with scale v)."""
    if not v > 0:
        raise DomainError(f"Start height must be positive, got {v}")
    u = key.generator().random(size)
    return v * np.tan(np.pi * (u - 0.5))


def sample_exit_strip(a: float, key: RandomStreamKey, size: int = 1) -> np.ndarray:
    """Exit points of W = {|Re z| < 1} for paths started at real ``a``.

    tan(pi z / 4) maps W onto the disk and a to tan(pi a / 4); disk exit points
    are pulled back with the principal (4 / pi) arctan.
    """
    if not -1 < a < 1:
        raise DomainError(f"Start point must lie in (-1, 1), got {a}")
    w = sample_exit_disk(math.tan(math.pi * a / 4), key, size)
    return ConformalMapSpec(MapKind.TAN4).inverse(w)


def exit_samples(sampler, parameter, n: int, seed: int, workers: int = 1) -> np.ndarray:
    """``n`` exit samples from ``sampler(parameter, key, size)`` in path-index order."""
    blocks = run_blocks(n, seed, lambda key, size: sampler(parameter, key, size), workers)
    return np.concatenate(blocks)
