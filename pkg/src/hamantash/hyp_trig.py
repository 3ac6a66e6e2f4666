"""Scalar hyperbolic trigonometry used by the samosa constructions.

Every function here is a closed formula.  Arguments of ``acos``/``acosh`` that
land within ``CLAMP`` of the edge of their domain are treated as round-off and
clamped; anything further out raises.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .hyp_core import AngleSum, GeometryError, NotATriangle

CLAMP = 1e-12


class NoSolution(GeometryError):
    pass


class DegenerateSlitDirection(GeometryError):
    pass


def _acos(q: float, what: str = "law of cosines") -> float:
    if q > 1.0 + CLAMP or q < -1.0 - CLAMP or math.isnan(q):
        raise NotATriangle(f"{what}: cosine {q!r} outside [-1, 1]")
    return math.acos(min(1.0, max(-1.0, q)))


def _acosh(q: float, what: str = "length") -> float:
    if q < 1.0 - CLAMP or math.isnan(q):
        raise NotATriangle(f"{what}: cosh {q!r} below 1")
    return math.acosh(max(1.0, q))


@dataclass(frozen=True)
class KinkData:
    c: float
    kappa: float


@dataclass(frozen=True)
class SlitGeometry:
    """Measurements attached to one slit inside its samosa."""

    ell: float
    phi: float
    d: float
    lam: float
    xi: float | None = None
    eta: float | None = None


# -- triangle laws -----------------------------------------------------------

def cosine_quotient(a: float, b: float, c: float) -> float:
    """Cosine of the angle between sides ``a`` and ``b`` when ``c`` is opposite."""
    return (math.cosh(a) * math.cosh(b) - math.cosh(c)) / (math.sinh(a) * math.sinh(b))


def loc_angle(a: float, b: float, c: float) -> float:
    """Angle opposite ``c`` in the triangle with sides ``a, b, c``."""
    if min(a, b, c) <= 0:
        raise NotATriangle(f"non-positive side in {(a, b, c)}")
    q = cosine_quotient(a, b, c)
    if not -1.0 + CLAMP <= q <= 1.0 - CLAMP:
        raise NotATriangle(f"sides {(a, b, c)} violate the triangle inequality (cos = {q!r})")
    return math.acos(q)


def loa_side(alpha: float, beta: float, gamma: float) -> float:
    """Side opposite ``gamma`` in the triangle with angles ``alpha, beta, gamma``."""
    if min(alpha, beta, gamma) <= 0:
        raise AngleSum(f"non-positive angle in {(alpha, beta, gamma)}")
    if alpha + beta + gamma >= math.pi:
        raise AngleSum(f"angle sum {alpha + beta + gamma:.15g} is not below pi")
    q = (math.cos(alpha) * math.cos(beta) + math.cos(gamma)) / (math.sin(alpha) * math.sin(beta))
    return math.acosh(max(q, 1.0))


def side_from_sas(a: float, b: float, angle: float) -> float:
    """Third side given two sides and the angle between them."""
    q = math.cosh(a) * math.cosh(b) - math.sinh(a) * math.sinh(b) * math.cos(angle)
    return _acosh(q, "side-angle-side")


def check_sines_fourparts(sides, angles) -> tuple[float, float]:
    """Residuals of the law of sines and the four-parts formula.

    ``sides[i]`` is opposite ``angles[i]``.  The four-parts identity is checked
    on the consecutive parts (angle 2, side 1, angle 0, side 2), i.e. with the
    inner angle between sides 0 and 1 playing the role of gamma.
    """
    a, b, _ = sides
    al, be, ga = angles
    sines = abs(math.sin(al) * math.sinh(b) - math.sinh(a) * math.sin(be))
    four = abs(math.cos(ga) * math.cosh(a)
               - (math.sinh(a) / math.tanh(b) - math.sin(ga) / math.tan(be)))
    return sines, four


# -- slit bounds -------------------------------------------------------------

def slit_max_one(d_prev: float, phi: float, theta_next: float) -> float:
    """Longest slit that stays in its hemisphere.

    ``d_prev`` is the equator segment the slit angle is measured from and
    ``theta_next`` the full cone angle at that segment's far corner.
    """
    if phi == 0.0:
        return d_prev
    s = abs(math.sin(phi))
    coth = (math.cos(phi) * math.cosh(d_prev) + s / math.tan(0.5 * theta_next)) / math.sinh(d_prev)
    return math.atanh(1.0 / coth)


def slit_max_two(d: float, phi_a: float, phi_b_prime: float, beta_b_prime: float) -> tuple[float, float]:
    """Length bounds for two slits in one hemisphere.

    Slit ``a`` makes angle ``phi_a`` with the segment of length ``d`` that
    joins the two slit corners; slit ``b`` makes angle ``phi_b_prime`` with
    the segment running to the un-slit corner, inside a corner of cone angle
    ``beta_b_prime``.
    """
    inner = 0.5 * beta_b_prime - abs(phi_b_prime)
    if abs(phi_a) < 1e-15 or abs(inner) < 1e-15:
        raise DegenerateSlitDirection("a slit continuation runs into the other slit's corner")
    sd, cd = math.sinh(d), math.cosh(d)
    coth_a = (math.cos(phi_a) * cd + abs(math.sin(phi_a)) / math.tan(inner)) / sd
    coth_b = (math.cos(inner) * cd + math.sin(inner) / math.tan(abs(phi_a))) / sd
    return math.atanh(1.0 / coth_a), math.atanh(1.0 / coth_b)


# -- kinked pants curves -----------------------------------------------------

def kink_forward(ell: float, beta: float) -> KinkData:
    """Length and kink angle of the pants curve through a slit end.

    The curve is the base of the isosceles triangle with legs ``ell`` and
    apex angle ``beta`` (or ``2pi - beta``); it turns left when ``beta < pi``.
    """
    if beta == math.pi:
        return KinkData(2.0 * ell, 0.0)
    # cosh c = cosh^2 l - sinh^2 l cos(beta), written to avoid cancellation
    c = 2.0 * math.asinh(math.sinh(ell) * abs(math.sin(0.5 * beta)))
    kappa = 2.0 * math.atan(1.0 / (math.tan(0.5 * beta) * math.cosh(ell)))
    return KinkData(c, kappa)


def kink_inverse(c: float, kappa: float) -> tuple[float, float]:
    """Recover ``(ell, beta)`` from a kinked curve's length and turning.

    The slit length comes from ``tanh(c/2) = tanh(ell) cos(kappa/2)``, the
    altitude split of the isosceles triangle.
    """
    ck = math.cos(0.5 * kappa)
    t = math.tanh(0.5 * c)
    if not (c > 0 and abs(kappa) < math.pi and ck * ck > t * t):
        raise NoSolution(f"no slit gives length {c!r} with kink {kappa!r}")
    ell = math.atanh(t / ck)
    if kappa == 0.0:
        return ell, math.pi
    sk = math.sin(0.5 * kappa)
    cos_beta = sk * sk * math.cosh(c) - ck * ck
    sin_beta = sk * math.sinh(c) / math.sinh(ell)
    beta = math.atan2(sin_beta, cos_beta) % (2.0 * math.pi)
    return ell, beta


# -- slit angles and triangulation edges ------------------------------------

def slit_angle_abs(d: float, ell: float, lam: float) -> float:
    """Angle at a slit corner between the slit and a segment of length ``d``.

    ``lam`` is the distance from the slit end to the segment's far corner.
    """
    return _acos(cosine_quotient(d, ell, lam), "slit angle")


def blocked_lambda(xi: float, lam_other: float, eta: float) -> float:
    """Slit-end-to-corner distance through the triangle with the other slit end."""
    return side_from_sas(xi, lam_other, eta)


def joker_hat_edges(d_p: float, d_q: float, ell: float, beta: float, phi: float,
                    alpha_p: float, alpha_q: float) -> tuple[float, float, float, float]:
    """Triangulation edges of a terminal piece.

    The slit angle ``phi`` is measured from the segment toward ``p``, which has
    length ``d_q``; ``beta`` is the cone angle at the slit corner.
    """
    lam_p = side_from_sas(d_q, ell, abs(phi))
    lam_q = side_from_sas(d_p, ell, 0.5 * beta - abs(phi))
    delta_p = _loop_around(lam_p, alpha_p)
    delta_q = _loop_around(lam_q, alpha_q)
    return lam_p, lam_q, delta_p, delta_q


def _loop_around(lam: float, alpha: float) -> float:
    """Loop based at the slit end enclosing a corner of cone angle ``2pi - alpha``."""
    if alpha <= math.pi:
        raise NotATriangle(f"cone angle {2 * math.pi - alpha:.6g} at a terminal corner is not below pi")
    ch, sh = math.cosh(lam), math.sinh(lam)
    return _acosh(ch * ch - math.cos(alpha) * sh * sh, "loop around corner")


def quad_fourth_side(ell_a: float, d: float, ell_b: float, angle_a: float, angle_b: float,
                     same_side: bool = True) -> float:
    """Distance between the free ends of two segments hung off a base.

    The segments of length ``ell_a`` and ``ell_b`` leave the ends of a base of
    length ``d`` at interior angles ``angle_a`` and ``angle_b``.  With
    ``same_side`` false they leave on opposite sides of the base line.
    Computed through the diagonal from the end of ``a`` to the base corner
    of ``b``.
    """
    diag = side_from_sas(ell_a, d, angle_a)
    if diag < 1e-14:
        return ell_b
    # angle at the base corner of b between the base and the diagonal
    split = _acos(cosine_quotient(d, diag, ell_a), "quadrilateral diagonal")
    between = abs(angle_b - split) if same_side else angle_b + split
    return side_from_sas(diag, ell_b, between)


def vpiece_edges(d_ac: float, d_bc: float, d_ab: float,
                 ell_a: float, phi_a: float, beta_a: float,
                 ell_b: float, phi_b_prime: float, beta_b_prime: float,
                 same_hemisphere: bool) -> dict:
    """Closed-form edges of a two-slit piece.

    Corner ``a`` carries a slit at angle ``phi_a`` from the segment ``ab``;
    corner ``b`` a slit at angle ``phi_b_prime`` from the segment ``bc``; ``c``
    is the un-slit corner.  Returns the four slit-end-to-``c`` arcs (``lam_*``
    inside the slit's own hemisphere, ``lamp_*`` around through the other),
    the slit-end distance ``xi`` and the angles ``eta_a``/``eta_b`` at the
    slit ends between the arc to ``c`` and the arc to the other slit end.
    """
    fa, fb = abs(phi_a), abs(phi_b_prime)
    inner_a = 0.5 * beta_a - fa
    inner_b = 0.5 * beta_b_prime - fb
    lam_a = side_from_sas(d_ac, ell_a, inner_a)
    lam_b = side_from_sas(d_bc, ell_b, fb)
    lamp_a = side_from_sas(d_ac, ell_a, 0.5 * beta_a + fa)
    lamp_b = side_from_sas(d_bc, ell_b, beta_b_prime - fb)
    xi = quad_fourth_side(ell_a, d_ab, ell_b, fa, inner_b, same_hemisphere)
    out = dict(lam_a=lam_a, lam_b=lam_b, lamp_a=lamp_a, lamp_b=lamp_b, xi=xi)
    if same_hemisphere:
        out["eta_a"] = _acos(cosine_quotient(xi, lam_a, lam_b), "eta at slit a")
        out["eta_b"] = _acos(cosine_quotient(xi, lam_b, lam_a), "eta at slit b")
    return out
