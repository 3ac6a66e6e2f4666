"""Points, isometries and placed triangles in the upper half-plane.

Points are stored as ``(x, y)`` with ``y > 0``.  Orientation-preserving
isometries are real 2x2 matrices of determinant one acting by Moebius maps,
kept in a canonical sign so that equal PSL(2,R) classes compare equal.

Tangent directions at a point are measured as angles against the positive
real direction; counterclockwise is positive, as in the usual picture of the
upper half-plane.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

TWO_PI = 2.0 * math.pi
SIGN_EPS = 1e-9
ELLIPTIC_MARGIN = 1e-9


class GeometryError(ValueError):
    """Base class for invalid geometric input."""


class NotElliptic(GeometryError):
    pass


class AngleSum(GeometryError):
    pass


class NotATriangle(GeometryError):
    pass


@dataclass(frozen=True)
class HPoint:
    x: float
    y: float

    def __post_init__(self):
        if not self.y > 0:
            raise GeometryError(f"point ({self.x}, {self.y}) is not in the upper half-plane")

    @classmethod
    def from_complex(cls, z: complex) -> HPoint:
        return cls(float(z.real), float(z.imag))

    @property
    def z(self) -> complex:
        return complex(self.x, self.y)


I_POINT = HPoint(0.0, 1.0)


def _canonical(m: np.ndarray) -> np.ndarray:
    for v in m.flat:
        if abs(v) > SIGN_EPS:
            return m if v > 0 else -m
    return m


@dataclass(frozen=True, eq=False)
class Isometry:
    """Element of PSL(2,R); construct through :meth:`from_matrix`."""

    a: float
    b: float
    c: float
    d: float

    @classmethod
    def from_matrix(cls, m) -> Isometry:
        m = np.asarray(m, dtype=float).reshape(2, 2)
        det = m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0]
        if not det > 0:
            raise GeometryError(f"matrix determinant {det} is not positive")
        m = _canonical(m / math.sqrt(det))
        return cls(*(float(v) for v in m.flat))

    @classmethod
    def identity(cls) -> Isometry:
        return cls(1.0, 0.0, 0.0, 1.0)

    @property
    def matrix(self) -> np.ndarray:
        return np.array([[self.a, self.b], [self.c, self.d]])

    @property
    def trace(self) -> float:
        return self.a + self.d

    def __matmul__(self, other: Isometry) -> Isometry:
        return Isometry.from_matrix(self.matrix @ other.matrix)

    def inverse(self) -> Isometry:
        return Isometry.from_matrix([[self.d, -self.b], [-self.c, self.a]])

    def conj(self, g: Isometry) -> Isometry:
        """Return ``g self g^-1``."""
        return g @ self @ g.inverse()

    def power(self, k: int) -> Isometry:
        base = self if k >= 0 else self.inverse()
        out = Isometry.identity()
        for _ in range(abs(k)):
            out = out @ base
        return out

    def act(self, z: complex) -> complex:
        return (self.a * z + self.b) / (self.c * z + self.d)

    def __call__(self, p: HPoint) -> HPoint:
        return HPoint.from_complex(self.act(p.z))

    def distance_to(self, other: Isometry) -> float:
        """Frobenius distance between the two classes (minimised over sign)."""
        m, n = self.matrix, other.matrix
        return float(min(np.linalg.norm(m - n), np.linalg.norm(m + n)))

    def __eq__(self, other):
        return isinstance(other, Isometry) and self.distance_to(other) < 1e-12

    def __hash__(self):
        return hash(tuple(round(v, 9) for v in (self.a, self.b, self.c, self.d)))


def translation_to(p: HPoint) -> Isometry:
    """The isometry ``z -> y z + x`` sending ``i`` to ``p`` without turning."""
    s = math.sqrt(p.y)
    return Isometry(s, p.x / s, 0.0, 1.0 / s)


def dist(p: HPoint, q: HPoint) -> float:
    # sinh(d/2) = |p - q| / (2 sqrt(y_p y_q)); keeps full relative accuracy for close points
    return 2.0 * math.asinh(math.hypot(p.x - q.x, p.y - q.y) / (2.0 * math.sqrt(p.y * q.y)))


def elliptic(center: HPoint, angle: float) -> Isometry:
    """Counterclockwise rotation by ``angle`` about ``center``."""
    h = 0.5 * angle
    rot = Isometry.from_matrix([[math.cos(h), math.sin(h)], [-math.sin(h), math.cos(h)]])
    return rot.conj(translation_to(center))


def elliptic_data(m: Isometry) -> tuple[HPoint, float]:
    """Fixed point and counterclockwise rotation angle in ``(0, 2pi)``."""
    tr = m.trace
    if abs(tr) >= 2.0 - ELLIPTIC_MARGIN:
        raise NotElliptic(f"|trace| = {abs(tr):.12g} is not below 2")
    disc = math.sqrt(4.0 - tr * tr)
    # c != 0 for an elliptic element; pick the root with positive imaginary part
    z = complex(m.a - m.d, math.copysign(disc, m.c)) / (2.0 * m.c)
    deriv = 1.0 / (m.c * z + m.d) ** 2
    angle = cmath.phase(deriv) % TWO_PI
    return HPoint.from_complex(z), angle


# -- tangent directions -----------------------------------------------------

def direction(p: HPoint, q: HPoint) -> float:
    """Angle of the initial tangent of the geodesic from ``p`` to ``q``."""
    u = complex((q.x - p.x) / p.y, q.y / p.y)
    w = (u - 1j) / (u + 1j)
    return (cmath.phase(w) + 0.5 * math.pi) % TWO_PI


def shoot(p: HPoint, theta: float, r: float) -> HPoint:
    """Point at distance ``r`` from ``p`` along the direction ``theta``."""
    w = math.tanh(0.5 * r) * cmath.exp(1j * (theta - 0.5 * math.pi))
    u = 1j * (1 + w) / (1 - w)
    return HPoint(p.x + p.y * u.real, p.y * u.imag)


def ccw_angle(v: HPoint, p: HPoint, q: HPoint) -> float:
    """Counterclockwise angle at ``v`` from the ray ``vp`` to the ray ``vq``, in [0, 2pi)."""
    return (direction(v, q) - direction(v, p)) % TWO_PI


def vertex_angle(v: HPoint, p: HPoint, q: HPoint) -> float:
    """Unsigned angle in [0, pi] between the rays ``vp`` and ``vq``."""
    a = ccw_angle(v, p, q)
    return min(a, TWO_PI - a)


def orientation(p: HPoint, q: HPoint, r: HPoint) -> int:
    """+1 if ``(p, q, r)`` runs counterclockwise, -1 if clockwise, 0 if collinear."""
    a = ccw_angle(p, q, r)
    if a < 1e-15 or abs(a - math.pi) < 1e-15 or TWO_PI - a < 1e-15:
        return 0
    return 1 if a < math.pi else -1


def reflect(p: HPoint, u: HPoint, v: HPoint) -> HPoint:
    """Reflect ``p`` across the geodesic through ``u`` and ``v``."""
    # move u to i with the geodesic pointing straight up, reflect in the imaginary axis
    g = translation_to(u) @ elliptic(I_POINT, direction(u, v) - 0.5 * math.pi)
    w = g.inverse().act(p.z)
    return HPoint.from_complex(g.act(complex(-w.real, w.imag)))


def cayley(p: HPoint) -> complex:
    """Upper half-plane to Poincare disk."""
    z = p.z
    return (z - 1j) / (z + 1j)


def inverse_cayley(w: complex) -> HPoint:
    return HPoint.from_complex(1j * (1 + w) / (1 - w))


# -- triangles ---------------------------------------------------------------

@dataclass(frozen=True)
class HTriangle:
    """Placed triangle; ``sides[i]`` is opposite ``vertices[i]``."""

    vertices: tuple[HPoint, HPoint, HPoint]
    angles: tuple[float, float, float]
    sides: tuple[float, float, float]
    orientation: str

    @property
    def area(self) -> float:
        return math.pi - sum(self.angles)


def _side_from_angles(opp: float, a1: float, a2: float) -> float:
    q = (math.cos(a1) * math.cos(a2) + math.cos(opp)) / (math.sin(a1) * math.sin(a2))
    return math.acosh(max(q, 1.0))


def triangle_from_angles(theta1: float, theta2: float, theta3: float,
                         anchor: HPoint = I_POINT, heading: float = 0.0,
                         orient: str = "cw") -> HTriangle:
    """Place the triangle with the given interior angles.

    Vertex 1 sits at ``anchor``, vertex 2 lies along ``heading`` from it and
    the vertices run in the ``orient`` sense ("cw" or "ccw").
    """
    thetas = (theta1, theta2, theta3)
    if min(thetas) <= 0:
        raise AngleSum(f"angles {thetas} must be positive")
    if sum(thetas) >= math.pi:
        raise AngleSum(f"angle sum {sum(thetas):.15g} is not below pi")
    if orient not in ("cw", "ccw"):
        raise ValueError(f"orientation must be 'cw' or 'ccw', got {orient!r}")
    s1 = _side_from_angles(theta1, theta2, theta3)
    s2 = _side_from_angles(theta2, theta1, theta3)
    s3 = _side_from_angles(theta3, theta1, theta2)
    turn = -theta1 if orient == "cw" else theta1
    v2 = shoot(anchor, heading, s3)
    v3 = shoot(anchor, heading + turn, s2)
    return HTriangle((anchor, v2, v3), thetas, (s1, s2, s3), orient)


def triangle_from_points(p: HPoint, q: HPoint, r: HPoint) -> HTriangle:
    verts = (p, q, r)
    sides = (dist(q, r), dist(p, r), dist(p, q))
    angles = (vertex_angle(p, q, r), vertex_angle(q, r, p), vertex_angle(r, p, q))
    o = orientation(p, q, r)
    return HTriangle(verts, angles, sides, "ccw" if o > 0 else "cw")


def signed_area(p: HPoint, q: HPoint, r: HPoint) -> float:
    """Area of the triangle, positive when ``(p, q, r)`` runs counterclockwise."""
    o = orientation(p, q, r)
    if o == 0:
        return 0.0
    angles = vertex_angle(p, q, r) + vertex_angle(q, r, p) + vertex_angle(r, p, q)
    return o * max(math.pi - angles, 0.0)


def klein(p: HPoint) -> complex:
    """Upper half-plane to the Klein model, where geodesics are chords."""
    w = cayley(p)
    return 2.0 * w / (1.0 + abs(w) ** 2)


def segments_cross(p1: HPoint, p2: HPoint, q1: HPoint, q2: HPoint, tol: float = 1e-12) -> bool:
    """Whether the geodesic segments ``p1p2`` and ``q1q2`` meet at interior points."""
    a, b, c, d = klein(p1), klein(p2), klein(q1), klein(q2)

    def cross(u, v):
        return u.real * v.imag - u.imag * v.real

    r, s = b - a, d - c
    den = cross(r, s)
    if abs(den) < 1e-300:
        return False
    t = cross(c - a, s) / den
    u = cross(c - a, r) / den
    return tol < t < 1 - tol and tol < u < 1 - tol
