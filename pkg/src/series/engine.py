"""Series and limit identities behind the four evaluations of sum 1/n^2.

Every truncated evaluator has a companion ``*_tail_bound`` giving an explicit
upper bound for the omitted terms; ``TruncationPolicy.resolve`` turns such a
bound into the smallest N reaching a target accuracy.
"""
import logging
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Optional, Tuple

import numpy as np
from scipy import special

from src.exceptions import DomainError
from src.geometry.maps import ConformalMapSpec
from src.oracles.analytic import (
    poisson_disk,
    punctured_disk_exit_series,
    strip_exit_density_closed,
)
from src.series.summation import sequential_sums, sum_terms

logger = logging.getLogger(__name__)

BASEL = math.pi ** 2 / 6
TAYLOR_SWITCH = 1e-3


class TruncationMode(Enum):
    FIXED_N = "fixed_n"
    TAIL_BOUND = "tail_bound"


@dataclass(frozen=True)
class TruncationPolicy:
    mode: TruncationMode
    n: Optional[int] = None
    eps: Optional[float] = None
    max_terms: int = 10 ** 9

    def __post_init__(self):
        if self.mode is TruncationMode.FIXED_N and (self.n is None or self.n < 1):
            raise DomainError(f"Fixed truncation needs N >= 1, got {self.n}")
        if self.mode is TruncationMode.TAIL_BOUND and (self.eps is None or not self.eps > 0):
            raise DomainError(f"Tail-bound truncation needs eps > 0, got {self.eps}")

    @classmethod
    def fixed(cls, n: int) -> "TruncationPolicy":
        return cls(TruncationMode.FIXED_N, n=n)

    @classmethod
    def tail_bound(cls, eps: float, max_terms: int = 10 ** 9) -> "TruncationPolicy":
        return cls(TruncationMode.TAIL_BOUND, eps=eps, max_terms=max_terms)

    def resolve(self, bound: Callable[[int], float]) -> int:
        """Smallest N with bound(N) <= eps (bounds are nonincreasing in N)."""
        if self.mode is TruncationMode.FIXED_N:
            return self.n
        hi = 1
        while bound(hi) > self.eps:
            if hi >= self.max_terms:
                logger.warning(f"Tail bound {bound(hi):.3e} still above eps={self.eps} at max_terms={self.max_terms}")
                return self.max_terms
            hi = min(hi * 2, self.max_terms)
        lo = hi // 2
        while hi - lo > 1:
            mid = (lo + hi) // 2
            if bound(mid) > self.eps:
                lo = mid
            else:
                hi = mid
        return max(hi, 1)


@dataclass
class PowerSeriesCoeffs:
    """Taylor coefficients a_0..a_N of a map analytic on the unit disk."""
    coeffs: np.ndarray
    radius_note: str = field(default="")

    def __post_init__(self):
        self.coeffs = np.asarray(self.coeffs, dtype=complex)
        if self.coeffs.ndim != 1 or self.coeffs.size == 0:
            raise DomainError("Coefficients must be a nonempty sequence")
        if not np.all(np.isfinite(self.coeffs)):
            raise DomainError("Coefficients must be finite")

    @classmethod
    def arctan(cls, n_max: int) -> "PowerSeriesCoeffs":
        n = np.arange(1, n_max + 1)
        odd = np.where(n % 2 == 1, np.where((n // 2) % 2 == 0, 1.0, -1.0) / n, 0.0)
        return cls(np.concatenate([[0.0], odd]), radius_note="radius of convergence 1")


# Exit time from power series

def exit_time_from_coeffs(c: PowerSeriesCoeffs, r: float = 1.0) -> float:
    """Mean exit time of f(D_r) from f(0): (1/2) sum_{n>=1} |a_n|^2 r^(2n)."""
    if not 0 < r <= 1:
        raise DomainError(f"Radius must lie in (0, 1], got {r}")
    n = np.arange(1, c.coeffs.size)
    return 0.5 * float(np.sum(np.abs(c.coeffs[1:]) ** 2 * r ** (2 * n)))


def arctan_coeff(n: int) -> float:
    if n < 1:
        raise DomainError(f"Coefficient index must be >= 1, got {n}")
    if n % 2 == 0:
        return 0.0
    return (-1) ** ((n - 1) // 2) / n


def _circle_values(m: ConformalMapSpec, r: float, quad_points: int) -> np.ndarray:
    if not 0 < r < 1:
        raise DomainError(f"Radius must lie in (0, 1), got {r}")
    theta = 2 * np.pi * np.arange(quad_points) / quad_points
    return np.asarray(m.eval(r * np.exp(1j * theta)), dtype=complex)


def coeff_extract(m: ConformalMapSpec, n: int, r: float, quad_points: int) -> complex:
    """Trapezoid rule for (1 / (2 pi r^n)) * integral of f(r e^{it}) e^{-int} dt.

    Args:
        m: Map analytic on the closed disk of radius ``r``
        n: Coefficient index
        r: Radius of the integration circle, in (0, 1)
        quad_points: Q >= 4n equispaced nodes

    Returns:
        Approximation of a_n; the error decays like r^Q for analytic maps
    """
    if n < 0:
        raise DomainError(f"Coefficient index must be >= 0, got {n}")
    if quad_points < max(4 * n, 1):
        raise DomainError(f"Need at least 4n = {4 * n} quadrature points, got {quad_points}")
    values = _circle_values(m, r, quad_points)
    theta = 2 * np.pi * np.arange(quad_points) / quad_points
    return complex(np.mean(values * np.exp(-1j * n * theta)) / r ** n)


def coeffs_from_map(m: ConformalMapSpec, n_max: int, r: float, quad_points: int) -> PowerSeriesCoeffs:
    """All coefficients a_0..a_N from one FFT of the values on |z| = r."""
    if quad_points < max(4 * n_max, 1):
        raise DomainError(f"Need at least 4N = {4 * n_max} quadrature points, got {quad_points}")
    spectrum = np.fft.fft(_circle_values(m, r, quad_points)) / quad_points
    n = np.arange(n_max + 1)
    return PowerSeriesCoeffs(spectrum[: n_max + 1] / r ** n, radius_note=f"extracted on |z| = {r} with Q = {quad_points}")


def exit_time_parseval(m: ConformalMapSpec, r: float, quad_points: int) -> float:
    """(1/2) * (mean of |f|^2 on |z| = r minus |f(0)|^2), the optional-stopping route."""
    values = _circle_values(m, r, quad_points)
    center = complex(m.eval(0j))
    return 0.5 * (float(np.mean(np.abs(values) ** 2)) - abs(center) ** 2)


# Odd squares

def odd_square_sum(n: int) -> float:
    if n < 1:
        raise DomainError(f"N must be >= 1, got {n}")
    return sum_terms(lambda k: 1.0 / (2 * k - 1) ** 2, n)


def odd_square_tail_bound(n: int) -> float:
    return 1.0 / (2 * (2 * n - 1))


def basel_from_odd(s: float) -> float:
    """sum 1/n^2 from the odd-square sum: the odd terms are 3/4 of the whole."""
    return 4.0 * s / 3.0


def odd_power_sum(m: int, n: int) -> float:
    """sum_{j<=N} 1/(2j-1)^(2m)."""
    if m < 1 or n < 1:
        raise DomainError(f"Need m >= 1 and N >= 1, got m={m}, N={n}")
    return sum_terms(lambda k: (2 * k - 1) ** (-2.0 * m), n)


def odd_power_limit(m: int) -> float:
    return (1 - 2.0 ** (-2 * m)) * float(special.zeta(2 * m))


def odd_power_tail_bound(m: int, n: int) -> float:
    return (2 * n - 1) ** (1 - 2 * m) / (2 * (2 * m - 1))


# Winding sums

def wrapped_sum_identity_gap(a: float, theta: float, n: int) -> float:
    return abs(punctured_disk_exit_series(a, theta, n) - poisson_disk(a, theta))


def _require_off_lattice(theta: float) -> None:
    if abs(math.remainder(theta, 2 * math.pi)) < 1e-12:
        raise DomainError(f"theta must not be a multiple of 2 pi, got {theta}")


def cosec_identity_lhs(theta: float, n: int) -> float:
    """Symmetric partial sum of sum_k 1/(theta + 2 pi k)^2."""
    _require_off_lattice(theta)
    if n < 0:
        raise DomainError(f"N must be >= 0, got {n}")
    pair = lambda k: 1.0 / (theta + 2 * np.pi * k) ** 2 + 1.0 / (theta - 2 * np.pi * k) ** 2
    return 1.0 / theta ** 2 + sum_terms(pair, n)


def cosec_identity_rhs(theta: float) -> float:
    _require_off_lattice(theta)
    return 1.0 / (4 * math.sin(theta / 2) ** 2)


def cosec_identity_tail_bound(theta: float, n: int) -> float:
    room = 2 * math.pi * n - abs(theta)
    return math.inf if room <= 0 else 1.0 / (math.pi * room)


def theta_limit_value() -> float:
    return 1.0 / 12.0


def cosec_minus_pole(theta: float) -> float:
    """1/(2(1 - cos theta)) - 1/theta^2, continuous at 0 with value 1/12."""
    if abs(theta) < TAYLOR_SWITCH:
        t2 = theta * theta
        return 1.0 / 12 + t2 / 240 + t2 * t2 / 6048 + t2 * t2 * t2 / 172800
    return 1.0 / (4 * math.sin(theta / 2) ** 2) - 1.0 / theta ** 2


def wrapped_pole_free_sum(n: int, theta: float = 0.0) -> float:
    """sum over 0 < |k| <= N of 1/(theta + 2 pi k)^2; tends to 1/12 as theta -> 0."""
    if n < 1:
        raise DomainError(f"N must be >= 1, got {n}")
    pair = lambda k: 1.0 / (theta + 2 * np.pi * k) ** 2 + 1.0 / (theta - 2 * np.pi * k) ** 2
    return sum_terms(pair, n)


def basel_from_wrapping(n: int, theta: float = 0.0) -> float:
    """2 pi^2 times the pole-free winding sum, i.e. sum_{k<=N} 1/k^2 at theta = 0."""
    return 2 * math.pi ** 2 * wrapped_pole_free_sum(n, theta)


def basel_from_wrapping_tail_bound(n: int) -> float:
    return 1.0 / n


# Reflection series

def _reflection_term(a: float):
    def term(k):
        sign = np.where(k % 2 == 1, 1.0, -1.0)
        return sign / ((2 * k - 1) - sign * a)
    return term


def _require_unit_interval(a: float) -> None:
    if not -1 < a < 1:
        raise DomainError(f"a must lie in (-1, 1), got {a}")


def reflection_series(a: float, n: int) -> float:
    """(1/pi)(1/(1-a) - 1/(3+a) + 1/(5-a) - ...), first N terms, summed in order."""
    _require_unit_interval(a)
    if n < 1:
        raise DomainError(f"N must be >= 1, got {n}")
    return sequential_sums(_reflection_term(a), n)[1] / math.pi


def reflection_partial_sum(a: float, n: int) -> float:
    """First N terms of ``reflection_series`` in closed form.

    Pairs of terms sum to differences of digamma values: with c = (1-a)/4 and
    d = (3+a)/4 the first 2m terms are (1/4)(psi(m+c) - psi(c) - psi(m+d) + psi(d)).
    Cost does not grow with N.
    """
    _require_unit_interval(a)
    if n < 1:
        raise DomainError(f"N must be >= 1, got {n}")
    m, odd = divmod(n, 2)
    c, d = (1 - a) / 4, (3 + a) / 4
    total = 0.25 * (float(special.digamma(d) - special.digamma(c)) + float(special.digamma(m + c) - special.digamma(m + d)))
    if odd:
        total += 1.0 / (4 * m + 1 - a)
    return total / math.pi


def reflection_bracket(a: float, width: float) -> Tuple[float, float, int]:
    """Consecutive partial sums (low, high, N) whose gap is at most ``width``.

    Term magnitudes decrease strictly for |a| < 1, so the limit lies between them.
    """
    _require_unit_interval(a)
    if not width > 0:
        raise DomainError(f"width must be positive, got {width}")
    n = max(1, math.ceil((1.0 / (math.pi * width) + 1 + abs(a)) / 2) - 1)
    logger.info(f"Reflection bracket at a={a} uses {n + 1} terms")
    low, high = sorted((reflection_partial_sum(a, n), reflection_partial_sum(a, n + 1)))
    return low, high, n


def reflection_series_limit(a: float) -> float:
    return strip_exit_density_closed(a)


def reflection_series_derivative(a: float, n: int) -> float:
    """sum_{j<=N} 1/((2j-1) + (-1)^j a)^2, the term-by-term a-derivative of the bracket."""
    _require_unit_interval(a)
    if n < 1:
        raise DomainError(f"N must be >= 1, got {n}")

    def term(k):
        sign = np.where(k % 2 == 1, 1.0, -1.0)
        return 1.0 / ((2 * k - 1) - sign * a) ** 2

    return sum_terms(term, n)


def reflection_derivative_limit(a: float) -> float:
    _require_unit_interval(a)
    t = math.tan(math.pi * a / 4)
    sec2 = 1.0 / math.cos(math.pi * a / 4) ** 2
    return (math.pi ** 2 / 8) * sec2 / (1 - t) ** 2


def reflection_derivative_tail_bound(a: float, n: int) -> float:
    room = 2 * n - 1 - abs(a)
    return math.inf if room <= 0 else 1.0 / (2 * room)
