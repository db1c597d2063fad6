import math

import numpy as np
import pytest


@pytest.fixture
def strip_starts():
    return [-0.9, -0.5, 0.0, 0.5, 0.9]


def test_truncation_policy():
    """Fixed N passes through; a tail bound resolves to the smallest N meeting eps"""
    from src.exceptions import DomainError
    from src.series.engine import TruncationPolicy

    assert TruncationPolicy.fixed(10).resolve(lambda n: 1.0 / n) == 10
    assert TruncationPolicy.tail_bound(1e-3).resolve(lambda n: 1.0 / n) == 1000
    assert TruncationPolicy.tail_bound(0.5).resolve(lambda n: 1.0 / n) == 2
    assert TruncationPolicy.tail_bound(1e-20, max_terms=64).resolve(lambda n: 1.0 / n) == 64
    with pytest.raises(DomainError):
        TruncationPolicy.fixed(0)
    with pytest.raises(DomainError):
        TruncationPolicy.tail_bound(0.0)


def test_chunked_sums_cross_chunk_boundaries():
    """Chunked and sequential sums agree with closed forms past one chunk"""
    from src.series.summation import CHUNK, sequential_sums, sum_terms

    n = CHUNK + 17
    assert sum_terms(lambda k: k, n) == n * (n + 1) / 2
    previous, last = sequential_sums(lambda k: np.where(k % 2 == 1, 1.0, -1.0), n)
    assert last == 1.0
    assert previous == 0.0
    assert sequential_sums(lambda k: k, 1) == (0.0, 1.0)


def test_exit_time_from_coefficients():
    """E[tau] of f(D_r) is (1/2) sum |a_n|^2 r^(2n)"""
    from src.exceptions import DomainError
    from src.series.engine import PowerSeriesCoeffs, exit_time_from_coeffs

    identity = PowerSeriesCoeffs([0, 1])
    assert exit_time_from_coeffs(identity) == pytest.approx(0.5)
    assert exit_time_from_coeffs(identity, 0.5) == pytest.approx(0.125)
    assert exit_time_from_coeffs(PowerSeriesCoeffs([3, 0, 2j])) == pytest.approx(2.0)
    with pytest.raises(DomainError):
        exit_time_from_coeffs(identity, 1.5)
    with pytest.raises(DomainError):
        PowerSeriesCoeffs([0, np.nan])


def test_arctan_coefficients():
    """arctan z = z - z^3/3 + z^5/5 - ..."""
    from src.exceptions import DomainError
    from src.series.engine import PowerSeriesCoeffs, arctan_coeff

    coeffs = PowerSeriesCoeffs.arctan(7).coeffs
    assert np.allclose(coeffs, [0, 1, 0, -1 / 3, 0, 1 / 5, 0, -1 / 7])
    assert [arctan_coeff(n) for n in (1, 2, 3, 9)] == [1.0, 0.0, -1 / 3, 1 / 9]
    with pytest.raises(DomainError):
        arctan_coeff(0)


def test_strip_exit_time_from_arctan_series():
    """(1/2) sum of squared arctan coefficients approaches pi^2/16 within half the odd tail bound"""
    from src.series.engine import PowerSeriesCoeffs, exit_time_from_coeffs, odd_square_tail_bound

    terms = 100_001
    value = exit_time_from_coeffs(PowerSeriesCoeffs.arctan(2 * terms - 1))
    assert abs(value - math.pi ** 2 / 16) <= odd_square_tail_bound(terms) / 2


def test_coefficients_from_contour_integral():
    """Trapezoid extraction on |z| = 0.99 recovers the arctan coefficients"""
    from src.exceptions import DomainError
    from src.geometry.maps import ConformalMapSpec, MapKind
    from src.series.engine import arctan_coeff, coeff_extract, coeffs_from_map, exit_time_from_coeffs, odd_square_sum

    m = ConformalMapSpec(MapKind.ARCTAN)
    for n in (1, 2, 3, 21):
        assert abs(coeff_extract(m, n, 0.99, 4096) - arctan_coeff(n)) < 1e-10
    coeffs = coeffs_from_map(m, 201, 0.99, 4096)
    assert np.allclose(coeffs.coeffs[1:8].real, [arctan_coeff(n) for n in range(1, 8)], atol=1e-12)
    assert abs(exit_time_from_coeffs(coeffs) - odd_square_sum(101) / 2) < 1e-8
    with pytest.raises(DomainError):
        coeff_extract(m, 10, 0.99, 39)
    with pytest.raises(DomainError):
        coeffs_from_map(m, 201, 1.0, 4096)


def test_exit_time_parseval():
    """Mean of |f|^2 on a circle gives the same exit time as the coefficients"""
    from src.geometry.maps import ConformalMapSpec, MapKind
    from src.series.engine import PowerSeriesCoeffs, exit_time_from_coeffs, exit_time_parseval

    assert exit_time_parseval(ConformalMapSpec.identity(), 0.5, 64) == pytest.approx(0.125)
    value = exit_time_parseval(ConformalMapSpec(MapKind.ARCTAN), 0.99, 4096)
    assert value == pytest.approx(exit_time_from_coeffs(PowerSeriesCoeffs.arctan(8001), 0.99), abs=1e-10)


def test_basel_from_odd_squares():
    """(4/3) sum 1/(2n-1)^2 reaches pi^2/6"""
    from src.series.engine import BASEL, TruncationPolicy, basel_from_odd, odd_square_sum, odd_square_tail_bound

    n = TruncationPolicy.tail_bound(1e-8).resolve(odd_square_tail_bound)
    assert odd_square_tail_bound(n) <= 1e-8
    assert abs(basel_from_odd(odd_square_sum(n)) - BASEL) <= 1e-7
    assert odd_square_sum(1) == 1.0


def test_higher_odd_powers():
    """sum 1/(2j-1)^4 = pi^4/96 within its tail bound"""
    from src.series.engine import odd_power_limit, odd_power_sum, odd_power_tail_bound

    assert odd_power_limit(2) == pytest.approx(math.pi ** 4 / 96, rel=1e-14)
    assert abs(odd_power_sum(2, 200) - odd_power_limit(2)) <= odd_power_tail_bound(2, 200)
    assert odd_power_sum(1, 5000) == pytest.approx(math.pi ** 2 / 8, abs=1e-4)


def test_wrapped_sum_identity():
    """Winding sums of Cauchy densities equal the Poisson kernel on a 3x3 grid"""
    from src.oracles.analytic import punctured_disk_exit_tail_bound
    from src.series.engine import TruncationPolicy, wrapped_sum_identity_gap

    policy = TruncationPolicy.tail_bound(1e-8)
    for a in (0.1, 0.5, 0.9):
        for theta in (math.pi / 4, math.pi / 2, math.pi):
            n = policy.resolve(lambda k: punctured_disk_exit_tail_bound(a, theta, k))
            assert wrapped_sum_identity_gap(a, theta, n) < 1e-7


def test_cosecant_identity():
    """sum_k 1/(theta + 2 pi k)^2 = 1 / (4 sin^2(theta/2))"""
    from src.exceptions import DomainError
    from src.series.engine import cosec_identity_lhs, cosec_identity_rhs, cosec_identity_tail_bound

    for theta in (0.1, 1.0, 3.0, -2.0):
        n = 10_000
        assert abs(cosec_identity_lhs(theta, n) - cosec_identity_rhs(theta)) <= cosec_identity_tail_bound(theta, n)
    with pytest.raises(DomainError):
        cosec_identity_lhs(0.0, 10)
    with pytest.raises(DomainError):
        cosec_identity_rhs(2 * math.pi)


def test_pole_free_limit():
    """Removing the k = 0 pole leaves a function continuous at 0 with value 1/12"""
    from src.series.engine import (
        TAYLOR_SWITCH,
        basel_from_wrapping,
        cosec_minus_pole,
        theta_limit_value,
        wrapped_pole_free_sum,
    )

    assert theta_limit_value() == 1 / 12
    assert abs(cosec_minus_pole(1e-4) - 1 / 12) < 1e-9
    assert cosec_minus_pole(0.0) == 1 / 12
    below, above = cosec_minus_pole(TAYLOR_SWITCH * 0.999), cosec_minus_pole(TAYLOR_SWITCH * 1.001)
    assert abs(below - above) < 1e-8
    assert cosec_minus_pole(1.0) == pytest.approx(1 / (4 * math.sin(0.5) ** 2) - 1.0)
    assert abs(wrapped_pole_free_sum(10_000) - 1 / 12) <= 1 / (2 * math.pi ** 2 * 10_000)
    assert abs(basel_from_wrapping(10_000) - math.pi ** 2 / 6) <= 1e-4


def test_reflection_bracket(strip_starts):
    """Consecutive partial sums bracket the strip exit density at 1"""
    from src.oracles.analytic import strip_exit_density_closed
    from src.series.engine import reflection_bracket

    for a in strip_starts:
        low, high, n = reflection_bracket(a, 1e-8)
        assert high - low <= 1e-8 * (1 + 1e-6)
        assert low <= strip_exit_density_closed(a) <= high
        assert abs((low + high) / 2 - strip_exit_density_closed(a)) <= (high - low) / 2 + 1e-12


def test_reflection_partial_sums(strip_starts):
    """Partial sums alternate around the limit"""
    from src.exceptions import DomainError
    from src.series.engine import reflection_series, reflection_series_limit

    for a in strip_starts:
        limit = reflection_series_limit(a)
        assert reflection_series(a, 1001) > limit
        assert reflection_series(a, 1000) < limit
    assert reflection_series(0.0, 1) == pytest.approx(1 / math.pi)
    with pytest.raises(DomainError):
        reflection_series(1.0, 10)


def test_leibniz_series():
    """pi times the reflection sum at 0 is 1 - 1/3 + 1/5 - ..."""
    from src.series.engine import reflection_bracket

    low, high, _ = reflection_bracket(0.0, 1e-7)
    assert abs(math.pi * (low + high) / 2 - math.pi / 4) <= math.pi * (high - low) / 2 + 1e-12


def test_reflection_derivative():
    """The differentiated sum at 0 is pi^2/8; 4/3 of it is pi^2/6"""
    from src.oracles.analytic import strip_exit_density_closed
    from src.series.engine import (
        BASEL,
        TruncationPolicy,
        reflection_derivative_limit,
        reflection_derivative_tail_bound,
        reflection_series_derivative,
    )

    assert reflection_derivative_limit(0.0) == pytest.approx(math.pi ** 2 / 8)
    n = TruncationPolicy.tail_bound(1e-8).resolve(lambda k: reflection_derivative_tail_bound(0.0, k))
    value = reflection_series_derivative(0.0, n)
    assert abs(value - math.pi ** 2 / 8) <= reflection_derivative_tail_bound(0.0, n)
    assert abs(4 * value / 3 - BASEL) <= 1e-7

    a, h = 0.3, 1e-4
    slope = math.pi * (strip_exit_density_closed(a + h) - strip_exit_density_closed(a - h)) / (2 * h)
    assert slope == pytest.approx(reflection_derivative_limit(a), abs=1e-6)
    assert abs(reflection_series_derivative(a, 5000) - reflection_derivative_limit(a)) <= reflection_derivative_tail_bound(a, 5000)


def test_reflection_partial_sum_closed_form(strip_starts):
    """Digamma partial sums agree with summing the terms in order"""
    from src.series.engine import reflection_partial_sum, reflection_series

    for a in strip_starts:
        for n in (1, 2, 1000, 1001):
            assert reflection_partial_sum(a, n) == pytest.approx(reflection_series(a, n), abs=1e-13)


def test_narrow_reflection_bracket():
    """A bracket of width 1e-10 needs about 1.6e9 terms and still holds the limit"""
    from src.oracles.analytic import strip_exit_density_closed
    from src.series.engine import reflection_bracket

    for a in (-0.9, 0.0, 0.5):
        low, high, n = reflection_bracket(a, 1e-10)
        assert n > 10 ** 9
        assert high - low <= 1e-10 + 1e-13
        assert abs((low + high) / 2 - strip_exit_density_closed(a)) <= (high - low) / 2 + 1e-13


def test_reflection_derivative_matches_difference_quotient():
    """pi times the central difference of the partial sum is the differentiated partial sum"""
    from src.series.engine import reflection_series, reflection_series_derivative

    h, n = 1e-5, 100_000
    for a in (0.0, 0.4, -0.4):
        slope = math.pi * (reflection_series(a + h, n) - reflection_series(a - h, n)) / (2 * h)
        assert abs(slope - reflection_series_derivative(a, n)) < 1e-4
