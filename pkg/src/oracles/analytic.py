"""Closed-form exit densities, exit times and Green's functions.

Conventions shared by everything here:

* Each coordinate of the Brownian motion is a standard one-dimensional
  Brownian motion, so E|B_t|^2 = 2t.
* Exit densities are per unit arclength of the boundary curve, never per
  radian of some other normalization.
* Green's functions are occupation-time densities and therefore carry the
  factor 1/pi (analysis texts often use 1/(2 pi) or omit it).
"""
import cmath
import math
from dataclasses import dataclass
from enum import Enum

import numpy as np
from scipy import integrate

from src.exceptions import DomainError, SingularityError
from src.geometry.domains import check_point
from src.series.products import punctured_disk_green_series
from src.series.summation import sum_terms

SINGULARITY_TOLERANCE = 1e-14


def poisson_disk(a: complex, theta):
    """Exit density of the unit disk at e^{i theta} for a path started at ``a``."""
    check_point(a, "a")
    if not abs(a) < 1:
        raise DomainError(f"Start point must lie in the open unit disk, got {a}")
    a = complex(a)
    theta = np.asarray(theta, dtype=float)
    denom = np.abs(1 - a.conjugate() * np.exp(1j * theta)) ** 2
    out = (1 - abs(a) ** 2) / (2 * np.pi * denom)
    return out[()] if out.ndim == 0 else out


def poisson_disk_cdf(a: complex, theta):
    """Exit probability of the arc (-pi, theta] for theta in [-pi, pi], started at ``a``."""
    check_point(a, "a")
    if not abs(a) < 1:
        raise DomainError(f"Start point must lie in the open unit disk, got {a}")
    a = complex(a)
    k = (1 + abs(a)) / (1 - abs(a))
    phi = cmath.phase(a)

    def antiderivative(u):
        return np.arctan2(k * np.sin(u / 2), np.cos(u / 2)) / np.pi

    theta = np.asarray(theta, dtype=float)
    out = np.clip(antiderivative(theta - phi) - antiderivative(-np.pi - phi), 0.0, 1.0)
    return out[()] if out.ndim == 0 else out


def cauchy_halfplane(v: float, x):
    """Exit density of the upper half-plane at x for a path started at v i."""
    if not v > 0:
        raise DomainError(f"Start height must be positive, got {v}")
    x = np.asarray(x, dtype=float)
    out = v / (np.pi * (v * v + x * x))
    return out[()] if out.ndim == 0 else out


def cauchy_halfplane_cdf(v: float, x):
    if not v > 0:
        raise DomainError(f"Start height must be positive, got {v}")
    return np.arctan(np.asarray(x, dtype=float) / v) / np.pi + 0.5


def cauchy_shifted(a: complex, r: float) -> float:
    """Density at the point of the line Re z = r level with ``a``, for the exit
    of the half-plane bounded by that line.

    Translation along the line does not change the value, so only Re(a) matters.
    """
    check_point(a, "a")
    gap = abs(r - complex(a).real)
    if gap == 0:
        raise DomainError(f"Start point lies on the line Re z = {r}")
    return 1 / (math.pi * gap)


def punctured_disk_exit_series(a: float, theta: float, truncation: int) -> float:
    """Winding-number series for the punctured-disk exit density at e^{i theta}.

    Terms k and -k are added in pairs; the limit is ``poisson_disk(a, theta)``.
    """
    if not 0 < a < 1:
        raise DomainError(f"Start point must lie in (0, 1), got {a}")
    if truncation < 0:
        raise DomainError(f"Truncation must be >= 0, got {truncation}")
    v = -math.log(a)

    def pair(k):
        return v / (np.pi * (v * v + (theta + 2 * np.pi * k) ** 2)) + v / (np.pi * (v * v + (theta - 2 * np.pi * k) ** 2))

    head = v / (math.pi * (v * v + theta * theta))
    return head + sum_terms(pair, truncation)


def punctured_disk_exit_tail_bound(a: float, theta: float, truncation: int) -> float:
    """Upper bound for the omitted windings |k| > N (integral comparison)."""
    v = -math.log(a)
    room = 2 * math.pi * truncation - abs(theta)
    if room <= 0:
        return math.inf
    return v / (math.pi ** 2 * room)


def strip_exit_density_closed(a: float) -> float:
    """Exit density of W = {|Re z| < 1} at the boundary point 1, started at real ``a``."""
    if not -1 < a < 1:
        raise DomainError(f"Start point must lie in (-1, 1), got {a}")
    t = math.tan(math.pi * a / 4)
    return (1 + t) / (4 * (1 - t))


def strip_exit_density(a: float, y, side: int = 1):
    """Exit density of W along the line Re z = ``side`` at height ``y``.

    Pulls the disk exit law back through tan(pi z / 4): the density at z is the
    disk density at tan(pi z / 4) times |d/dz tan(pi z / 4)|. On Re z = 1 the
    image point has angle gd(pi y / 2) (the Gudermannian) and the derivative
    has modulus (pi/2) sech(pi y / 2); Re z = -1 mirrors both.
    """
    if side not in (1, -1):
        raise DomainError(f"side must be +1 or -1, got {side}")
    if not -1 < a < 1:
        raise DomainError(f"Start point must lie in (-1, 1), got {a}")
    u = np.pi * np.asarray(y, dtype=float) / 2
    check_point(u, "y")
    gd = 2 * np.arctan(np.tanh(u / 2))
    theta = gd if side == 1 else np.pi - gd
    decay = np.exp(-np.abs(u))
    sech = 2 * decay / (1 + decay * decay)
    start = math.tan(math.pi * a / 4)
    out = poisson_disk(start, theta) * (np.pi / 2) * sech
    return out[()] if np.ndim(out) == 0 else out


def strip_right_exit_probability(a: float) -> float:
    """Probability of leaving W through Re z = 1, by quadrature of the side density.

    Only Re(B) decides the side, so this is the gambler's-ruin value (1 + a) / 2.
    """
    mass, _ = integrate.quad(lambda y: float(strip_exit_density(a, y, 1)), -np.inf, np.inf,
                             epsabs=1e-13, epsrel=1e-12, limit=400)
    return mass


def expected_exit_time_strip(halfwidth: float, a: float) -> float:
    """E_a[tau] for {|Re z| < h}: optional stopping of Re(B_t)^2 - t gives h^2 - a^2."""
    if not halfwidth > 0:
        raise DomainError(f"Halfwidth must be positive, got {halfwidth}")
    if not abs(a) < halfwidth:
        raise DomainError(f"Start point {a} is not inside the strip of halfwidth {halfwidth}")
    return (halfwidth - a) * (halfwidth + a)


def greens_halfplane(a: complex, z: complex) -> float:
    check_point(a, "a")
    check_point(z, "z")
    a, z = complex(a), complex(z)
    if not a.imag > 0 or z.imag < 0:
        raise DomainError(f"Green's function of the upper half-plane needs Im a > 0 and Im z >= 0, got {a}, {z}")
    gap = abs(a - z)
    if gap < SINGULARITY_TOLERANCE:
        raise SingularityError(f"Green's function evaluated at its pole {a}")
    return math.log(abs(a - z.conjugate()) / gap) / math.pi


def greens_disk(a: complex, z):
    """(1/pi) ln(|1 - conj(a) z| / |z - a|); vectorized in ``z``."""
    check_point(a, "a")
    check_point(z, "z")
    a = complex(a)
    z = np.asarray(z, dtype=complex)
    if not abs(a) < 1 or np.any(np.abs(z) > 1):
        raise DomainError("Green's function of the disk needs |a| < 1 and |z| <= 1")
    gap = np.abs(z - a)
    if np.any(gap < SINGULARITY_TOLERANCE):
        raise SingularityError(f"Green's function evaluated at its pole {a}")
    out = np.log(np.abs(1 - a.conjugate() * z) / gap) / np.pi
    return out[()] if out.ndim == 0 else out


def greens_disk_cell_integral(a: complex, r0: float, r1: float, theta0: float, theta1: float) -> float:
    """Integral of the disk Green's function over the annular cell r0 < |z| < r1, theta0 < arg z < theta1.

    This is the expected time spent in the cell before leaving the disk.
    """
    a = complex(a)

    def integrand(r, theta):
        z = r * complex(math.cos(theta), math.sin(theta))
        if abs(z - a) < SINGULARITY_TOLERANCE:
            return 0.0
        return float(greens_disk(a, z)) * r

    value, _ = integrate.dblquad(integrand, theta0, theta1, r0, r1, epsabs=1e-10, epsrel=1e-8)
    return value


class GreensKind(Enum):
    HALF_PLANE_UPPER = "half_plane_upper"
    DISK = "disk"
    PUNCTURED_DISK_SERIES = "punctured_disk_series"


@dataclass(frozen=True)
class GreensFunctionSpec:
    kind: GreensKind
    pole: complex

    def __call__(self, z, truncation: int = 1000):
        if self.kind is GreensKind.HALF_PLANE_UPPER:
            return greens_halfplane(self.pole, z)
        if self.kind is GreensKind.DISK:
            return float(greens_disk(self.pole, z))
        a, z = complex(self.pole), complex(z)
        if a.imag != 0 or z.imag != 0 or not (0 < a.real < 1 and 0 < z.real < 1):
            raise DomainError("The punctured-disk series needs a and z on the interval (0, 1)")
        if a == z:
            raise SingularityError(f"Green's function evaluated at its pole {a}")
        return punctured_disk_green_series(-math.log(a.real), -math.log(z.real), truncation)
