"""Plane domains and boundary curves.

Points of the plane are plain ``complex`` numbers (``complex128`` inside numpy
arrays). Every predicate here accepts either a scalar or an array and answers
elementwise.
"""
import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from src.exceptions import DomainError

ComplexPoint = complex


def check_point(z, name: str = "z") -> None:
    """Reject NaN or infinite coordinates.

    Args:
        z: A point or an array of points
        name: Argument name used in the error message
    """
    if not np.all(np.isfinite(np.asarray(z))):
        raise DomainError(f"{name} must have finite coordinates, got {z!r}")


class DomainKind(Enum):
    DISK = "disk"
    HALF_PLANE_UPPER = "half_plane_upper"
    HALF_PLANE_RIGHT = "half_plane_right"
    STRIP = "strip"
    PUNCTURED_DISK = "punctured_disk"
    STRIP_QUARTER_PI = "strip_quarter_pi"


@dataclass(frozen=True)
class DomainSpec:
    kind: DomainKind
    radius: float = 1.0
    halfwidth: float = 1.0

    def __post_init__(self):
        if not self.radius > 0:
            raise DomainError(f"Disk radius must be positive, got {self.radius}")
        if not self.halfwidth > 0:
            raise DomainError(f"Strip halfwidth must be positive, got {self.halfwidth}")

    @classmethod
    def disk(cls, radius: float = 1.0) -> "DomainSpec":
        return cls(DomainKind.DISK, radius=radius)

    @classmethod
    def strip(cls, halfwidth: float = 1.0) -> "DomainSpec":
        return cls(DomainKind.STRIP, halfwidth=halfwidth)

    @property
    def effective_halfwidth(self) -> float:
        if self.kind is DomainKind.STRIP_QUARTER_PI:
            return math.pi / 4
        return self.halfwidth

    def contains(self, z):
        """Exact open-set membership (strict inequalities)."""
        z = np.asarray(z)
        if self.kind is DomainKind.DISK:
            return np.abs(z) < self.radius
        if self.kind is DomainKind.PUNCTURED_DISK:
            r = np.abs(z)
            return (r > 0) & (r < 1)
        if self.kind is DomainKind.HALF_PLANE_UPPER:
            return z.imag > 0
        if self.kind is DomainKind.HALF_PLANE_RIGHT:
            return z.real > 0
        return np.abs(z.real) < self.effective_halfwidth

    def boundary_distance(self, z):
        """Signed distance to the nearest boundary line or circle, positive inside.

        The puncture of the punctured disk is left out: Brownian paths miss points.
        """
        z = np.asarray(z)
        if self.kind is DomainKind.DISK:
            return self.radius - np.abs(z)
        if self.kind is DomainKind.PUNCTURED_DISK:
            return 1 - np.abs(z)
        if self.kind is DomainKind.HALF_PLANE_UPPER:
            return z.imag
        if self.kind is DomainKind.HALF_PLANE_RIGHT:
            return z.real
        return self.effective_halfwidth - np.abs(z.real)

    def contains_closure(self, z, tol: float = 1e-12):
        """Membership in the closure, widened by ``tol`` (relative for bounded kinds)."""
        z = np.asarray(z)
        if self.kind is DomainKind.DISK:
            return np.abs(z) <= self.radius * (1 + tol)
        if self.kind is DomainKind.PUNCTURED_DISK:
            return np.abs(z) <= 1 + tol
        if self.kind is DomainKind.HALF_PLANE_UPPER:
            return z.imag >= -tol
        if self.kind is DomainKind.HALF_PLANE_RIGHT:
            return z.real >= -tol
        return np.abs(z.real) <= self.effective_halfwidth * (1 + tol)


class CurveKind(Enum):
    CIRCLE = "circle"
    VERTICAL_LINE = "vertical_line"
    HORIZONTAL_LINE = "horizontal_line"


@dataclass(frozen=True)
class Curve:
    """A circle |z| = c or an axis-parallel line Re z = c / Im z = c.

    The parameter ``s`` is arclength: r times the angle on a circle, the free
    coordinate on a line.
    """
    kind: CurveKind
    c: float = 1.0

    def __post_init__(self):
        if self.kind is CurveKind.CIRCLE and not self.c > 0:
            raise DomainError(f"Circle radius must be positive, got {self.c}")

    @classmethod
    def unit_circle(cls) -> "Curve":
        return cls(CurveKind.CIRCLE, 1.0)

    @classmethod
    def real_axis(cls) -> "Curve":
        return cls(CurveKind.HORIZONTAL_LINE, 0.0)

    @property
    def length(self) -> float:
        return 2 * math.pi * self.c if self.kind is CurveKind.CIRCLE else math.inf

    @property
    def parameter_range(self) -> tuple:
        if self.kind is CurveKind.CIRCLE:
            return (-math.pi * self.c, math.pi * self.c)
        return (-math.inf, math.inf)

    def point(self, s):
        s = np.asarray(s, dtype=float)
        if self.kind is CurveKind.CIRCLE:
            return self.c * np.exp(1j * s / self.c)
        if self.kind is CurveKind.VERTICAL_LINE:
            return self.c + 1j * s
        return s + 1j * self.c

    def parameter(self, z):
        z = np.asarray(z)
        if self.kind is CurveKind.CIRCLE:
            return self.c * np.angle(z)
        if self.kind is CurveKind.VERTICAL_LINE:
            return z.imag
        return z.real

    def distance(self, z):
        z = np.asarray(z)
        if self.kind is CurveKind.CIRCLE:
            return np.abs(np.abs(z) - self.c)
        if self.kind is CurveKind.VERTICAL_LINE:
            return np.abs(z.real - self.c)
        return np.abs(z.imag - self.c)

    def require_on(self, z, tol: float = 1e-10) -> None:
        check_point(z)
        if np.any(self.distance(z) > tol):
            raise DomainError(f"Point {z!r} is not on the {self.kind.value} at c={self.c}")
