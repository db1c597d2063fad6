"""Estimators and goodness-of-fit tests that turn samples into verdicts.

p-values are asymptotic throughout.
"""
import logging
import math
from typing import Callable

import numpy as np
from scipy import integrate, stats

from src.exceptions import BinUnderflow, DomainError, InsufficientData
from src.models.schemas import GoodnessOfFit, McEstimate

logger = logging.getLogger(__name__)

MIN_KS_SAMPLES = 10
MIN_EXPECTED_COUNT = 5.0


def mean_ci(samples, seed: int = 0) -> McEstimate:
    """Sample mean with standard error s / sqrt(n).

    Args:
        samples: One-dimensional array of observations
        seed: Seed recorded on the estimate

    Returns:
        McEstimate with the mean, its standard error and the sample count
    """
    x = np.asarray(samples, dtype=float).ravel()
    if x.size < 2:
        raise InsufficientData(f"A standard error needs at least 2 samples, got {x.size}")
    return McEstimate(
        mean=float(np.mean(x)),
        stderr=float(np.std(x, ddof=1) / math.sqrt(x.size)),
        n=int(x.size),
        seed=seed,
    )


def ks_test(samples, cdf: Callable[[np.ndarray], np.ndarray]) -> GoodnessOfFit:
    """One-sample Kolmogorov-Smirnov test against a continuous ``cdf``."""
    x = np.asarray(samples, dtype=float).ravel()
    if x.size < MIN_KS_SAMPLES:
        raise InsufficientData(f"KS test needs at least {MIN_KS_SAMPLES} samples, got {x.size}")
    result = stats.kstest(x, cdf, method="asymp")
    logger.debug(f"KS D_n={result.statistic:.3g} p={result.pvalue:.3g} n={x.size}")
    return GoodnessOfFit(
        statistic=float(result.statistic),
        p_value=float(min(max(result.pvalue, 0.0), 1.0)),
        n=int(x.size),
        test_kind="KS",
    )


def bin_probabilities(density: Callable[[float], float], bins: int) -> np.ndarray:
    """Masses of ``bins`` equal arcs of [0, 2 pi) under an angular density."""
    if bins < 4:
        raise DomainError(f"Need at least 4 bins, got {bins}")
    edges = np.linspace(0.0, 2 * np.pi, bins + 1)
    return np.array([
        integrate.quad(lambda t: float(density(t)), lo, hi, epsabs=1e-14, epsrel=1e-12)[0]
        for lo, hi in zip(edges[:-1], edges[1:])
    ])


def chi_square_circle(angles, density: Callable[[float], float], bins: int = 32) -> GoodnessOfFit:
    """Pearson chi-square test of angles against an angular density.

    Args:
        angles: Sample angles in radians, any branch
        density: Density per radian on the circle
        bins: Number of equal arcs

    Returns:
        GoodnessOfFit with bins - 1 degrees of freedom
    """
    theta = np.mod(np.asarray(angles, dtype=float).ravel(), 2 * np.pi)
    n = theta.size
    if n < 1:
        raise InsufficientData("Chi-square test needs samples")
    probabilities = bin_probabilities(density, bins)
    if abs(probabilities.sum() - 1.0) > 1e-8:
        raise DomainError(f"Density integrates to {probabilities.sum()} over the circle, expected 1")
    expected = n * probabilities
    if expected.min() < MIN_EXPECTED_COUNT:
        raise BinUnderflow(f"Smallest expected bin count is {expected.min():.3g}, need >= {MIN_EXPECTED_COUNT}")
    observed = np.bincount(np.minimum((theta * bins / (2 * np.pi)).astype(np.int64), bins - 1), minlength=bins)
    statistic = float(np.sum((observed - expected) ** 2 / expected))
    p_value = float(stats.chi2.sf(statistic, bins - 1))
    logger.debug(f"Chi-square {statistic:.4g} on {bins - 1} dof, p={p_value:.3g}")
    return GoodnessOfFit(statistic=statistic, p_value=p_value, n=n, test_kind="ChiSquare")


def binomial_check(successes: int, n: int, p: float) -> float:
    """z-score of a success count against Binomial(n, p)."""
    if n < 1:
        raise InsufficientData("Binomial check needs at least one trial")
    if not 0 < p < 1:
        raise DomainError(f"Success probability must lie in (0, 1), got {p}")
    return (successes - n * p) / math.sqrt(n * p * (1 - p))
