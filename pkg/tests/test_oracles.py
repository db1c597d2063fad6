import math

import numpy as np
import pytest
from scipy import integrate


@pytest.fixture
def disk_starts():
    return [0.0, 0.5, 0.3j, -0.6 + 0.2j, 0.9]


def test_poisson_kernel_is_a_density(disk_starts):
    """The disk exit density is positive and integrates to 1 over the circle"""
    from src.oracles.analytic import poisson_disk

    for a in disk_starts:
        mass, _ = integrate.quad(lambda t: float(poisson_disk(a, t)), -math.pi, math.pi, epsabs=1e-13, limit=200)
        assert mass == pytest.approx(1.0, abs=1e-10)
        assert np.all(poisson_disk(a, np.linspace(-math.pi, math.pi, 65)) > 0)
    assert poisson_disk(0.0, 1.234) == pytest.approx(1 / (2 * math.pi))


def test_poisson_cdf(disk_starts):
    """The arc probability runs from 0 at -pi to 1 at pi and differentiates to the kernel"""
    from src.oracles.analytic import poisson_disk, poisson_disk_cdf

    h = 1e-5
    for a in disk_starts:
        assert poisson_disk_cdf(a, -math.pi) == pytest.approx(0.0, abs=1e-12)
        assert poisson_disk_cdf(a, math.pi) == pytest.approx(1.0, abs=1e-12)
        for theta in (-2.0, 0.1, 1.7):
            slope = (poisson_disk_cdf(a, theta + h) - poisson_disk_cdf(a, theta - h)) / (2 * h)
            assert slope == pytest.approx(poisson_disk(a, theta), rel=1e-6)
    assert poisson_disk_cdf(0.0, 0.0) == pytest.approx(0.5)


def test_disk_start_outside():
    """Starts on or outside the circle are rejected"""
    from src.exceptions import DomainError
    from src.oracles.analytic import poisson_disk, poisson_disk_cdf

    with pytest.raises(DomainError):
        poisson_disk(1.0, 0.0)
    with pytest.raises(DomainError):
        poisson_disk_cdf(2j, 0.0)


def test_cauchy_law():
    """Cauchy exit law of the upper half-plane"""
    from src.exceptions import DomainError
    from src.oracles.analytic import cauchy_halfplane, cauchy_halfplane_cdf, cauchy_shifted

    mass, _ = integrate.quad(lambda x: float(cauchy_halfplane(2.0, x)), -np.inf, np.inf)
    assert mass == pytest.approx(1.0, abs=1e-10)
    assert cauchy_halfplane(1.0, 0.0) == pytest.approx(1 / math.pi)
    assert cauchy_halfplane_cdf(2.0, 0.0) == pytest.approx(0.5)
    assert cauchy_halfplane_cdf(2.0, 2.0) == pytest.approx(0.75)
    assert cauchy_shifted(0.25 + 7j, 1.0) == pytest.approx(1 / (0.75 * math.pi))
    with pytest.raises(DomainError):
        cauchy_halfplane(0.0, 1.0)
    with pytest.raises(DomainError):
        cauchy_shifted(1.0 + 2j, 1.0)


def test_punctured_disk_series_converges_to_poisson():
    """Winding sums approach the Poisson kernel within the stated tail bound"""
    from src.oracles.analytic import poisson_disk, punctured_disk_exit_series, punctured_disk_exit_tail_bound

    for a in (0.2, 0.5, 0.9):
        for theta in (0.3, math.pi / 2, 3.0):
            n = 1000
            gap = abs(punctured_disk_exit_series(a, theta, n) - poisson_disk(a, theta))
            assert gap <= punctured_disk_exit_tail_bound(a, theta, n)
    assert punctured_disk_exit_tail_bound(0.5, 3.0, 0) == math.inf


def test_strip_density_at_one():
    """Pulled-back disk law at z = 1 equals the closed form (1 + t) / (4 (1 - t))"""
    from src.oracles.analytic import strip_exit_density, strip_exit_density_closed

    assert strip_exit_density_closed(0.0) == pytest.approx(0.25)
    for a in (-0.9, -0.5, 0.0, 0.5, 0.9):
        assert strip_exit_density(a, 0.0, 1) == pytest.approx(strip_exit_density_closed(a), rel=1e-12)
        assert strip_exit_density(a, 0.7, -1) == pytest.approx(strip_exit_density(-a, 0.7, 1), rel=1e-10)


def test_strip_side_probability():
    """The right side collects (1 + a) / 2 of the exits"""
    from src.oracles.analytic import strip_right_exit_probability

    for a in (0.0, 0.5, -0.7):
        assert strip_right_exit_probability(a) == pytest.approx((1 + a) / 2, abs=1e-9)


def test_strip_density_far_along_the_walls():
    """The side density decays to 0 without overflowing, and the two sides carry all the mass"""
    from src.oracles.analytic import strip_exit_density

    far = strip_exit_density(0.3, np.array([-1e3, -500.0, 500.0, 1e3]), 1)
    assert np.all(np.isfinite(far))
    assert np.all(far >= 0) and np.all(far < 1e-200)
    mass = sum(integrate.quad(lambda y: float(strip_exit_density(0.3, y, side)), -np.inf, np.inf)[0] for side in (1, -1))
    assert mass == pytest.approx(1.0, abs=1e-6)


def test_greens_disk_log_singularity():
    """Near its pole G_D(a, z) behaves like (1/pi) ln(1/|z - a|)"""
    from src.oracles.analytic import greens_disk

    a = 0.1 + 0.05j
    for direction in (1, 1j, -1 - 1j):
        z = a + 1e-6 * direction / abs(direction)
        assert float(greens_disk(a, z)) / (math.log(1e6) / math.pi) == pytest.approx(1.0, rel=0.01)


def test_strip_exit_time():
    """E_a[tau] = h^2 - a^2; the quarter-pi strip from 0 gives pi^2/16"""
    from src.exceptions import DomainError
    from src.oracles.analytic import expected_exit_time_strip

    assert expected_exit_time_strip(math.pi / 4, 0.0) == pytest.approx(math.pi ** 2 / 16)
    assert expected_exit_time_strip(1.0, 0.5) == pytest.approx(0.75)
    with pytest.raises(DomainError):
        expected_exit_time_strip(1.0, 1.0)


def test_greens_functions():
    """Half-plane and disk Green's functions, with the 1/pi occupation normalization"""
    from src.exceptions import DomainError, SingularityError
    from src.oracles.analytic import greens_disk, greens_halfplane

    assert greens_halfplane(1j, 2j) == pytest.approx(math.log(3) / math.pi)
    assert greens_halfplane(1j, 5.0) == pytest.approx(0.0, abs=1e-15)
    assert greens_disk(0.0, 0.5) == pytest.approx(math.log(2) / math.pi)
    assert greens_disk(0.3 + 0.1j, 1j) == pytest.approx(0.0, abs=1e-14)
    assert greens_disk(0.2, 0.7j) == pytest.approx(greens_disk(0.7j, 0.2))
    with pytest.raises(SingularityError):
        greens_halfplane(1j, 1j)
    with pytest.raises(SingularityError):
        greens_disk(0.5, np.array([0.1, 0.5]))
    with pytest.raises(DomainError):
        greens_halfplane(-1j, 1j)
    with pytest.raises(DomainError):
        greens_disk(0.0, 1.5)


def test_disk_cell_integral():
    """Total expected occupation of the disk from 0 is E[tau] = 1/2"""
    from src.oracles.analytic import greens_disk_cell_integral

    assert greens_disk_cell_integral(0j, 0.0, 1.0, -math.pi, math.pi) == pytest.approx(0.5, abs=1e-7)
    quarter = greens_disk_cell_integral(0j, 0.5, 1.0, 0.0, math.pi / 2)
    # closed form of (1/pi) int r ln(1/r) dr over [1/2, 1], times the quarter angle
    assert quarter == pytest.approx(0.5 * (3 / 16 - math.log(2) / 8), abs=1e-9)


def test_greens_function_spec():
    """GreensFunctionSpec dispatches on its kind"""
    from src.oracles.analytic import GreensFunctionSpec, GreensKind, greens_disk
    from src.series.products import punctured_disk_green_closed, punctured_disk_green_tail_bound

    assert GreensFunctionSpec(GreensKind.DISK, 0j)(0.5) == pytest.approx(math.log(2) / math.pi)
    assert GreensFunctionSpec(GreensKind.HALF_PLANE_UPPER, 1j)(2j) == pytest.approx(math.log(3) / math.pi)

    alpha, gamma = -math.log(0.5), -math.log(0.2)
    series = GreensFunctionSpec(GreensKind.PUNCTURED_DISK_SERIES, 0.5)(0.2, truncation=1000)
    closed = punctured_disk_green_closed(alpha, gamma)
    assert abs(series - closed) <= punctured_disk_green_tail_bound(alpha, gamma, 1000)
    # removing the center does not change the Green's function of the disk
    assert closed == pytest.approx(float(greens_disk(0.5, 0.2)), rel=1e-13)
