"""The closed catalog of analytic maps, preimage enumeration and the
density pushforward rule.

A density on a boundary curve pushed through an analytic map f picks up one
term per preimage: rho_f(w) = sum over z in f^-1(w) on the curve of
rho(z) / |f'(z)|. For invertible maps the sum has one term; for the
exponential wrap it runs over the integer winding k and is truncated
symmetrically at |k| <= N.
"""
import cmath
import logging
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Optional

import numpy as np
from scipy import integrate

from src.exceptions import DomainError, PoleError
from src.geometry.domains import Curve, CurveKind, DomainKind, DomainSpec, check_point

logger = logging.getLogger(__name__)

POLE_TOLERANCE = 1e-12
CURVE_TOLERANCE = 1e-10


class MapKind(Enum):
    TAN4 = "tan4"
    MOBIUS_RIGHT_HALF_TO_DISK = "mobius_right_half_to_disk"
    DISK_TO_UPPER_HALF = "disk_to_upper_half"
    UPPER_HALF_TO_DISK = "upper_half_to_disk"
    DISK_AUTOMORPHISM = "disk_automorphism"
    EXP_WRAP = "exp_wrap"
    SCALE = "scale"
    ARCTAN = "arctan"


_DOMAINS = {
    MapKind.TAN4: DomainSpec.strip(1.0),
    MapKind.MOBIUS_RIGHT_HALF_TO_DISK: DomainSpec(DomainKind.HALF_PLANE_RIGHT),
    MapKind.DISK_TO_UPPER_HALF: DomainSpec.disk(),
    MapKind.UPPER_HALF_TO_DISK: DomainSpec(DomainKind.HALF_PLANE_UPPER),
    MapKind.DISK_AUTOMORPHISM: DomainSpec.disk(),
    MapKind.EXP_WRAP: DomainSpec(DomainKind.HALF_PLANE_UPPER),
    MapKind.SCALE: None,
    MapKind.ARCTAN: DomainSpec.disk(),
}


@dataclass(frozen=True)
class ConformalMapSpec:
    """One map of the catalog; ``param`` is a for the disk automorphism and v for the scaling."""
    kind: MapKind
    param: complex = 0j

    def __post_init__(self):
        check_point(self.param, "param")
        if self.kind is MapKind.DISK_AUTOMORPHISM and not abs(self.param) < 1:
            raise DomainError(f"Disk automorphism needs |a| < 1, got {self.param}")
        if self.kind is MapKind.SCALE and self.param == 0:
            raise DomainError("Scale factor must be nonzero")

    @classmethod
    def identity(cls) -> "ConformalMapSpec":
        return cls(MapKind.SCALE, 1.0)

    @classmethod
    def automorphism(cls, a: complex) -> "ConformalMapSpec":
        return cls(MapKind.DISK_AUTOMORPHISM, complex(a))

    @classmethod
    def scale(cls, v: complex) -> "ConformalMapSpec":
        return cls(MapKind.SCALE, complex(v))

    @property
    def domain(self) -> Optional[DomainSpec]:
        return _DOMAINS[self.kind]

    @property
    def is_invertible(self) -> bool:
        return self.kind is not MapKind.EXP_WRAP

    @property
    def poles(self) -> tuple:
        if self.kind is MapKind.MOBIUS_RIGHT_HALF_TO_DISK or self.kind is MapKind.DISK_TO_UPPER_HALF:
            return (-1 + 0j,)
        if self.kind is MapKind.UPPER_HALF_TO_DISK:
            return (-1j,)
        if self.kind is MapKind.DISK_AUTOMORPHISM and self.param != 0:
            return (1 / self.param.conjugate(),)
        if self.kind is MapKind.ARCTAN:
            return (1j, -1j)
        return ()

    def _validate(self, z) -> np.ndarray:
        check_point(z)
        z = np.asarray(z, dtype=complex)
        for pole in self.poles:
            if np.any(np.abs(z - pole) < POLE_TOLERANCE):
                raise PoleError(f"{self.kind.value} evaluated within {POLE_TOLERANCE} of its pole {pole}")
        if self.domain is not None and not np.all(self.domain.contains_closure(z)):
            raise DomainError(f"{self.kind.value} evaluated outside its domain {self.domain.kind.value}")
        return z

    def eval(self, z):
        z = self._validate(z)
        k, p = self.kind, self.param
        if k is MapKind.TAN4:
            out = np.tan(np.pi * z / 4)
        elif k is MapKind.MOBIUS_RIGHT_HALF_TO_DISK or k is MapKind.DISK_TO_UPPER_HALF:
            out = -1j * (z - 1) / (z + 1)
        elif k is MapKind.UPPER_HALF_TO_DISK:
            out = (z - 1j) / (z + 1j)
        elif k is MapKind.DISK_AUTOMORPHISM:
            out = (z - p) / (1 - p.conjugate() * z)
        elif k is MapKind.EXP_WRAP:
            out = np.exp(1j * z)
        elif k is MapKind.SCALE:
            out = p * z
        else:
            out = np.arctan(z)
        return out[()] if out.ndim == 0 else out

    def derivative(self, z):
        z = self._validate(z)
        k, p = self.kind, self.param
        if k is MapKind.TAN4:
            out = (np.pi / 4) * _sec_squared(np.pi * z / 4)
        elif k is MapKind.MOBIUS_RIGHT_HALF_TO_DISK or k is MapKind.DISK_TO_UPPER_HALF:
            out = -2j / (z + 1) ** 2
        elif k is MapKind.UPPER_HALF_TO_DISK:
            out = 2j / (z + 1j) ** 2
        elif k is MapKind.DISK_AUTOMORPHISM:
            out = (1 - abs(p) ** 2) / (1 - p.conjugate() * z) ** 2
        elif k is MapKind.EXP_WRAP:
            out = 1j * np.exp(1j * z)
        elif k is MapKind.SCALE:
            out = np.full_like(z, p)
        else:
            out = 1 / (1 + z * z)
        return out[()] if out.ndim == 0 else out

    def inverse(self, w):
        """Inverse map; only the principal branch for the tangent-type kinds."""
        if not self.is_invertible:
            raise DomainError("exp_wrap is a covering map; use preimages_on_curve")
        check_point(w, "w")
        w = np.asarray(w, dtype=complex)
        k, p = self.kind, self.param
        if k is MapKind.TAN4:
            _reject_near(w, (1j, -1j), k)
            out = (4 / np.pi) * np.arctan(w)
        elif k is MapKind.MOBIUS_RIGHT_HALF_TO_DISK or k is MapKind.DISK_TO_UPPER_HALF:
            _reject_near(w, (-1j,), k)
            out = (1 + 1j * w) / (1 - 1j * w)
        elif k is MapKind.UPPER_HALF_TO_DISK:
            _reject_near(w, (1 + 0j,), k)
            out = 1j * (1 + w) / (1 - w)
        elif k is MapKind.DISK_AUTOMORPHISM:
            out = (w + p) / (1 + p.conjugate() * w)
        elif k is MapKind.SCALE:
            out = w / p
        else:
            if np.any(np.abs(np.cos(w)) < POLE_TOLERANCE):
                raise PoleError("tan evaluated at a pole")
            out = np.tan(w)
        return out[()] if out.ndim == 0 else out


def _sec_squared(u: np.ndarray) -> np.ndarray:
    """sec^2 u as 4q / (1 + q)^2 with q = exp(2iu) or exp(-2iu), whichever has |q| <= 1.

    cos u overflows once |Im u| passes about 710; this form decays instead.
    """
    side = np.where(u.imag >= 0, 1.0, -1.0)
    q = np.exp(2j * side * u)
    return 4 * q / (1 + q) ** 2


def _reject_near(w: np.ndarray, points: tuple, kind: MapKind) -> None:
    for q in points:
        if np.any(np.abs(w - q) < POLE_TOLERANCE):
            raise PoleError(f"inverse of {kind.value} evaluated within {POLE_TOLERANCE} of {q}")


def map_eval(m: ConformalMapSpec, z: complex) -> complex:
    return complex(m.eval(z))


def map_derivative_abs_sq(m: ConformalMapSpec, z):
    """|f'(z)|^2, the integrand of the Brownian time change."""
    d = m.derivative(z)
    return np.abs(d) ** 2 if isinstance(d, np.ndarray) else abs(d) ** 2


def preimages_on_curve(m: ConformalMapSpec, w: complex, curve: Curve, truncation: int) -> np.ndarray:
    """Preimages of ``w`` under ``m`` on the preimage of ``curve``.

    Args:
        m: Map from the catalog
        w: Point on ``curve``
        curve: Image curve containing ``w``
        truncation: N; the exponential wrap returns the 2N+1 windings |k| <= N

    Returns:
        Array of preimages, ordered by winding k = -N..N for the exponential wrap
    """
    if truncation < 0:
        raise DomainError(f"Truncation must be >= 0, got {truncation}")
    curve.require_on(w, CURVE_TOLERANCE)
    if m.is_invertible:
        return np.array([m.inverse(w)], dtype=complex)
    if curve.kind is not CurveKind.CIRCLE:
        raise DomainError("exp_wrap images of boundary lines are circles")
    theta = cmath.phase(w)
    height = -math.log(abs(w))
    k = np.arange(-truncation, truncation + 1)
    return theta + 2 * np.pi * k + 1j * height


@dataclass
class BoundaryDensity:
    """Density per unit arclength on a circle or axis-parallel line.

    ``density`` maps arrays of the curve parameter to nonnegative values.
    """
    curve: Curve
    density: Callable[[np.ndarray], np.ndarray]
    support: str = field(default="")

    def at(self, z):
        return self.density(self.curve.parameter(z))

    def total_mass(self) -> float:
        lo, hi = self.curve.parameter_range
        mass, err = integrate.quad(lambda s: float(self.density(s)), lo, hi, epsabs=1e-13, epsrel=1e-12, limit=400)
        logger.debug(f"Quadrature mass {mass} (error estimate {err}) on {self.curve.kind.value}")
        return mass


def push_density(m: ConformalMapSpec, src: BoundaryDensity, w: complex, truncation: int = 0,
                 target_curve: Optional[Curve] = None) -> float:
    """Density of f(B_tau) at ``w`` from the density of B_tau on ``src.curve``.

    Args:
        m: Map from the catalog
        src: Exit density on the curve containing B_tau
        w: Point on the image curve
        truncation: Winding truncation N for the exponential wrap
        target_curve: Image curve containing ``w``. Required for invertible
            maps; for the exponential wrap it may be left out and is then the
            circle |z| = |w|, the only image of a horizontal line.

    Returns:
        Sum over preimages z on ``src.curve`` of rho(z) / |f'(z)|

    Raises:
        DomainError: If an invertible map is given no target curve, or the
            preimages miss ``src.curve``
    """
    if target_curve is None:
        if m.is_invertible:
            raise DomainError(f"push_density through {m.kind.value} needs the image curve of {src.curve.kind.value}")
        target_curve = Curve(CurveKind.CIRCLE, abs(w))
    pre = preimages_on_curve(m, w, target_curve, truncation)
    scale = max(1.0, float(np.max(np.abs(pre))))
    if np.any(src.curve.distance(pre) > 1e-9 * scale):
        raise DomainError(f"Preimages of {w} do not lie on the source {src.curve.kind.value}")
    terms = src.at(pre) / np.abs(m.derivative(pre))
    return float(np.sum(terms))


def pushforward(m: ConformalMapSpec, src: BoundaryDensity, target_curve: Curve, truncation: int = 0) -> BoundaryDensity:
    """The whole pushed density on ``target_curve`` as a new BoundaryDensity."""
    def pushed(s):
        points = np.atleast_1d(target_curve.point(s))
        values = np.array([push_density(m, src, complex(p), truncation, target_curve) for p in points])
        return values[0] if np.ndim(s) == 0 else values

    return BoundaryDensity(target_curve, pushed, support=f"{m.kind.value} image of {src.support}".strip())
