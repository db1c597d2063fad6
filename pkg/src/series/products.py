"""Infinite products from the winding sum of half-plane Green's functions.

Products of factors 1 + x_n are evaluated as exp(sum log1p(x_n)) whenever every
factor exceeds 1, which keeps long truncations accurate.
"""
import math

import numpy as np

from src.exceptions import DomainError, SingularityError
from src.series.summation import sum_terms


def _log_mirror(alpha: float, gamma: float, n: int) -> float:
    if not (alpha > 0 and gamma > 0):
        raise DomainError(f"alpha and gamma must be positive, got {alpha}, {gamma}")
    if n < 0:
        raise DomainError(f"N must be >= 0, got {n}")
    diff2 = (alpha - gamma) ** 2
    center = 2 * math.log((alpha + gamma) / abs(alpha - gamma))
    tail = sum_terms(lambda k: np.log1p(4 * alpha * gamma / ((2 * np.pi * k) ** 2 + diff2)), n)
    return center + 2 * tail


def mirror_product(alpha: float, gamma: float, n: int) -> float:
    """prod over |n'| <= N of ((2 pi n')^2 + (alpha+gamma)^2) / ((2 pi n')^2 + (alpha-gamma)^2)."""
    if alpha == gamma:
        raise DomainError("mirror_product is singular at alpha == gamma")
    return math.exp(_log_mirror(alpha, gamma, n))


def mirror_product_limit(alpha: float, gamma: float) -> float:
    if alpha == gamma:
        raise DomainError("mirror_product is singular at alpha == gamma")
    return ((1 - math.exp(-(alpha + gamma))) / (math.exp(-alpha) - math.exp(-gamma))) ** 2


def mirror_product_tail_bound(alpha: float, gamma: float, n: int) -> float:
    """Relative bound; log1p(x) <= x and sum_{n>N} 1/n^2 <= 1/N."""
    return math.expm1(2 * alpha * gamma / (math.pi ** 2 * n))


def punctured_disk_green_series(alpha: float, gamma: float, n: int) -> float:
    """Green's function of the punctured disk at (e^-alpha, e^-gamma) as a winding sum.

    Each winding n contributes the half-plane Green's function between
    alpha i and gamma i + 2 pi n.
    """
    if alpha == gamma:
        raise SingularityError(f"Green's function evaluated at its pole e^-{alpha}")
    return _log_mirror(alpha, gamma, n) / (2 * math.pi)


def punctured_disk_green_closed(alpha: float, gamma: float) -> float:
    if alpha == gamma:
        raise SingularityError(f"Green's function evaluated at its pole e^-{alpha}")
    return math.log(abs(1 - math.exp(-(alpha + gamma))) / abs(math.exp(-gamma) - math.exp(-alpha))) / math.pi


def punctured_disk_green_tail_bound(alpha: float, gamma: float, n: int) -> float:
    return alpha * gamma / (math.pi ** 3 * n)


def sinh_product(alpha: float, n: int) -> float:
    """alpha * prod_{k<=N} (1 + (alpha / (pi k))^2)."""
    if n < 0:
        raise DomainError(f"N must be >= 0, got {n}")
    if alpha == 0:
        return 0.0
    return alpha * math.exp(sum_terms(lambda k: np.log1p((alpha / (np.pi * k)) ** 2), n))


def sinh_product_tail_bound(alpha: float, n: int) -> float:
    return math.expm1(alpha * alpha / (math.pi ** 2 * n))


def sine_product(x: float, n: int) -> float:
    """x * prod_{k<=N} (1 - (x / (pi k))^2), multiplied chunk by chunk in order."""
    if n < 0:
        raise DomainError(f"N must be >= 0, got {n}")
    value = x
    chunk = 1 << 20
    for start in range(1, n + 1, chunk):
        k = np.arange(start, min(start + chunk, n + 1), dtype=np.float64)
        value *= float(np.prod(1 - (x / (np.pi * k)) ** 2))
    return value


def sine_product_tail_bound(x: float, n: int) -> float:
    """Relative bound; valid while |x| < pi (N + 1)."""
    first_omitted = (x / (math.pi * (n + 1))) ** 2
    if first_omitted >= 1 or n < 1:
        return math.inf
    return math.expm1(x * x / (math.pi ** 2 * n * (1 - first_omitted)))


def basel_from_product(n: int) -> float:
    """pi^2 times the alpha^2 coefficient sum_{k<=N} 1/(pi k)^2 of the sinh product."""
    if n < 1:
        raise DomainError(f"N must be >= 1, got {n}")
    return math.pi ** 2 * sum_terms(lambda k: 1.0 / (np.pi * k) ** 2, n)


def basel_from_product_tail_bound(n: int) -> float:
    return 1.0 / n


def product_alpha2_coefficient(n: int, h: float = 1e-3) -> float:
    """Second derivative at 0 of ln(sinh_product(alpha) / alpha) by central differences.

    The function is even and vanishes at 0, so the stencil reduces to 2 g(h) / h^2.
    """
    if n < 1:
        raise DomainError(f"N must be >= 1, got {n}")
    g = sum_terms(lambda k: np.log1p((h / (np.pi * k)) ** 2), n)
    return 2 * g / (h * h)
