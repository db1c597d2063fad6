import math

import numpy as np
import pytest
from scipy import stats


@pytest.fixture
def rng():
    from src.sampler.streams import RandomStreamKey
    return RandomStreamKey(seed=12345, index=0).generator()


def test_mean_ci():
    """Mean with standard error s / sqrt(n), s with n - 1 degrees of freedom"""
    from src.exceptions import InsufficientData
    from src.stats.goodness import mean_ci

    flat = mean_ci([1.0, 1.0, 1.0, 1.0], seed=3)
    assert flat.mean == 1.0
    assert flat.stderr == 0.0
    assert flat.n == 4
    assert flat.seed == 3

    pair = mean_ci(np.array([0.0, 2.0]))
    assert pair.mean == pytest.approx(1.0)
    assert pair.stderr == pytest.approx(1.0)

    with pytest.raises(InsufficientData):
        mean_ci([0.5])


def test_ks_accepts_matching_law(rng):
    """Normal samples against the normal CDF"""
    from src.stats.goodness import ks_test

    result = ks_test(rng.standard_normal(10_000), stats.norm.cdf)
    assert result.test_kind == "KS"
    assert result.n == 10_000
    assert 0.0 <= result.statistic <= 1.0
    assert result.p_value > 0.01


def test_ks_rejects_wrong_law():
    """A point mass at 0 is far from the normal CDF"""
    from src.stats.goodness import ks_test

    result = ks_test(np.zeros(1000), stats.norm.cdf)
    assert result.statistic == pytest.approx(0.5)
    assert result.p_value < 1e-10


def test_ks_is_invariant_under_monotone_maps(rng):
    """Transforming samples and CDF by the same increasing map keeps D_n"""
    from src.stats.goodness import ks_test

    x = rng.standard_normal(500)
    direct = ks_test(x, stats.norm.cdf)
    cubed = ks_test(x ** 3, lambda t: stats.norm.cdf(np.cbrt(t)))
    assert cubed.statistic == pytest.approx(direct.statistic, abs=1e-12)


def test_ks_needs_samples():
    from src.exceptions import InsufficientData
    from src.stats.goodness import ks_test

    with pytest.raises(InsufficientData):
        ks_test(np.zeros(9), stats.norm.cdf)


def test_bin_probabilities():
    """Arc masses of a density sum to 1"""
    from src.exceptions import DomainError
    from src.oracles.analytic import poisson_disk
    from src.stats.goodness import bin_probabilities

    uniform = bin_probabilities(lambda t: 1 / (2 * math.pi), 32)
    assert np.allclose(uniform, 1 / 32)
    assert bin_probabilities(lambda t: poisson_disk(0.5, t), 32).sum() == pytest.approx(1.0, abs=1e-10)
    with pytest.raises(DomainError):
        bin_probabilities(lambda t: 1 / (2 * math.pi), 3)


def test_chi_square_circle(rng):
    """Uniform angles pass against the uniform density and fail against the Poisson kernel at 0.5"""
    from src.oracles.analytic import poisson_disk
    from src.stats.goodness import chi_square_circle

    angles = rng.uniform(-math.pi, math.pi, 100_000)
    accepted = chi_square_circle(angles, lambda t: 1 / (2 * math.pi))
    assert accepted.test_kind == "ChiSquare"
    assert accepted.p_value > 0.001
    rejected = chi_square_circle(angles, lambda t: poisson_disk(0.5, t))
    assert rejected.p_value < 1e-6


def test_chi_square_guards(rng):
    """Sparse bins and improper densities are reported, not tested"""
    from src.exceptions import BinUnderflow, DomainError
    from src.stats.goodness import chi_square_circle

    with pytest.raises(BinUnderflow):
        chi_square_circle(rng.uniform(0, 2 * math.pi, 20), lambda t: 1 / (2 * math.pi))
    with pytest.raises(DomainError):
        chi_square_circle(rng.uniform(0, 2 * math.pi, 1000), lambda t: 1.0)


def test_binomial_check():
    """z-score of a success count"""
    from src.exceptions import DomainError, InsufficientData
    from src.stats.goodness import binomial_check

    assert binomial_check(50, 100, 0.5) == 0.0
    assert binomial_check(60, 100, 0.5) == pytest.approx(2.0)
    with pytest.raises(DomainError):
        binomial_check(1, 10, 1.0)
    with pytest.raises(InsufficientData):
        binomial_check(0, 0, 0.5)
