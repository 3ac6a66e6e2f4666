"""Point-mass systems and barycentric coordinates on hyperbolic triangles.

The centre of mass ``(Z, z) = (X, x) * (Y, y)`` is the point of the segment
``XY`` with ``x sinh d(X,Z) = y sinh d(Y,Z)``, carrying the mass
``x cosh d(X,Z) + y cosh d(Y,Z)``.  The operation is commutative and
associative, so a list of point-masses has a well-defined centre.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import reduce

from .hyp_core import GeometryError, HPoint, direction, dist, shoot

# below this separation two points are treated as one
COINCIDE = 1e-15


@dataclass(frozen=True)
class PointMass:
    point: HPoint
    mass: float

    def __post_init__(self):
        if not self.mass > 0:
            raise GeometryError(f"point-mass needs a positive mass, got {self.mass}")


def pm_combine(a: PointMass, b: PointMass) -> PointMass:
    X, x = a.point, a.mass
    Y, y = b.point, b.mass
    D = dist(X, Y)
    if D < COINCIDE:
        return PointMass(X, x + y)
    # x sinh(s) = y sinh(D - s) solved for s = d(X, Z)
    s = math.atanh(y * math.sinh(D) / (x + y * math.cosh(D)))
    Z = shoot(X, direction(X, Y), s)
    return PointMass(Z, x * math.cosh(s) + y * math.cosh(D - s))


def combine_all(masses) -> PointMass:
    masses = list(masses)
    if not masses:
        raise ValueError("empty point-mass system")
    return reduce(pm_combine, masses)


def _disk_coordinate(eta: float, t: float) -> float:
    """Position of ``Z_t`` on the disk diameter when ``X = 0`` and ``Y = eta``."""
    u = 2.0 * t - 1.0
    e2 = eta * eta
    # (1 + e2 u - sqrt(B)) / (2 eta t), rationalized: the difference cancels as t -> 0
    root = math.sqrt((1.0 - e2) * (1.0 - e2 * u * u))
    return 2.0 * eta * t / (1.0 + e2 * u + root)


def segment_point(X: HPoint, Y: HPoint, t: float) -> HPoint:
    """The point ``Z_t`` of ``(X, 1-t) * (Y, t)``, with ``Z_0 = X`` and ``Z_1 = Y``."""
    if not 0.0 <= t <= 1.0:
        raise ValueError(f"segment parameter {t} outside [0, 1]")
    if t == 0.0:
        return X
    if t == 1.0:
        return Y
    D = dist(X, Y)
    if D < COINCIDE:
        return X
    # work in the disk with X at the origin and Y on the positive real axis
    z = _disk_coordinate(math.tanh(0.5 * D), t)
    return shoot(X, direction(X, Y), 2.0 * math.atanh(z))


def bary_point(X1: HPoint, X2: HPoint, X3: HPoint, t) -> HPoint:
    """Barycentric coordinates on the triangle ``(X1, X2, X3)``.

    Coordinates on the boundary of the simplex drop their zero-mass terms.
    """
    t = tuple(float(v) for v in t)
    if len(t) != 3 or min(t) < 0 or abs(sum(t) - 1.0) > 1e-12:
        raise ValueError(f"{t} is not in the closed standard simplex")
    terms = [PointMass(p, w) for p, w in zip((X1, X2, X3), t) if w > 0]
    return combine_all(terms).point


def centroid_mass_residual(masses) -> float:
    """``c - sum x_i cosh d(X_i, C)`` for the centre ``(C, c)`` of the system."""
    masses = list(masses)
    c = combine_all(masses)
    return c.mass - sum(m.mass * math.cosh(dist(m.point, c.point)) for m in masses)
