"""Intrinsic measurements of realized assemblies and their inversion.

Cutting the realized cone sphere along the kinked pants curves leaves two
terminal pieces ("hats", one per end of the chain) and ``n - 4`` two-slit
pieces.  Each piece is triangulated by arcs between slit ends and corners:

* a hat contributes ``lam_p, lam_q`` (slit end to its corners) and the loops
  ``delta_p, delta_q`` around those corners;
* a two-slit piece contributes the arcs from both slit ends to the un-slit
  corner, through the slit's own hemisphere (``lam``) and around the other
  way (``lamp``), plus the slit-end distance ``xi``.  When a slit (or a
  reflex corner) blocks an arc ``lamp`` ("V2"), that edge is flipped in its
  quadrilateral to the arc ``r`` joining the two slit ends around the
  boundary curve of the blocked side.

Corner labels follow :mod:`hamantash.assembly`.  In a hat, ``p`` is the
corner the slit angle is measured from and ``q`` the other one.  In a
two-slit piece, ``a`` is the ``phi`` slit (corner 1), ``b`` the ``phi_prime``
slit (corner 3) and ``c`` the un-slit corner.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .assembly import NORTH, SamosaAssembly, corner_angles, equator_lengths, samosa_view, validate
from .hyp_core import (GeometryError, HPoint, ccw_angle, direction, reflect, segments_cross,
                       shoot, triangle_from_angles)
from .hyp_trig import (KinkData, NoSolution, _acos, cosine_quotient,
                       joker_hat_edges, kink_forward, kink_inverse, side_from_sas,
                       slit_angle_abs, vpiece_edges)


class PieceError(GeometryError):
    def __init__(self, piece: str, cause: Exception):
        super().__init__(f"{piece}: {cause}")
        self.piece = piece
        self.cause = cause


class UnsupportedPiece(GeometryError):
    pass


@dataclass(frozen=True)
class HatParams:
    lam_p: float
    lam_q: float
    delta_p: float
    delta_q: float

    def edges(self) -> tuple[float, ...]:
        return (self.delta_p, self.delta_q, self.lam_p, self.lam_q)


V1_EDGES = ("lam_a", "lam_b", "lamp_a", "lamp_b", "xi")


@dataclass(frozen=True)
class VPieceParams:
    """Edges of a two-slit piece.

    ``blocked`` lists the sides (``"a"``, ``"b"``) whose ``lamp`` arc is
    blocked and replaced by ``r``; it is empty exactly in case V1.
    """

    case: str
    edges: dict = field(hash=False)
    blocked: tuple[str, ...] = ()

    def edge_names(self) -> tuple[str, ...]:
        arc_a = "r_a" if "a" in self.blocked else "lamp_a"
        arc_b = "r_b" if "b" in self.blocked else "lamp_b"
        return ("lam_a", "lam_b", arc_a, arc_b, "xi")

    def edge_values(self) -> tuple[float, ...]:
        return tuple(self.edges[k] for k in self.edge_names())


@dataclass(frozen=True)
class IntrinsicParams:
    alpha: tuple[float, ...]
    curves: tuple[KinkData, ...]
    hats: tuple[HatParams, HatParams]
    pieces: tuple[VPieceParams, ...]

    @property
    def n(self) -> int:
        return len(self.alpha)


@dataclass(frozen=True)
class EdgeVector:
    lengths: tuple[float, ...]
    names: tuple[str, ...]

    def __len__(self):
        return len(self.lengths)


# -- placed geometry of a two-slit piece ---------------------------------------

@dataclass(frozen=True)
class PiecePlacement:
    """Slit a's hemisphere placed in the plane with the other hemisphere
    developed across the segment ``ab``."""

    A: HPoint
    B: HPoint
    C: HPoint
    C_star: HPoint
    Wa: HPoint
    Wb: HPoint
    b_in_own: bool


def _slit_tip(corner: HPoint, ref: HPoint, other: HPoint, phi: float, ell: float) -> HPoint:
    toward = 1.0 if ccw_angle(corner, ref, other) < math.pi else -1.0
    return shoot(corner, direction(corner, ref) + toward * abs(phi), ell)


def place_piece(theta, ell_a, phi_a, ell_b, phi_b, same_hemisphere) -> PiecePlacement:
    tri = triangle_from_angles(*(0.5 * t for t in theta), orient="cw")
    A, C, B = tri.vertices
    Wa = _slit_tip(A, B, C, phi_a, ell_a)
    Wb = _slit_tip(B, C, A, phi_b, ell_b)
    C_star = reflect(C, A, B)
    if not same_hemisphere:
        Wb = reflect(Wb, A, B)
    return PiecePlacement(A, B, C, C_star, Wa, Wb, same_hemisphere)


def blocked_arcs(pl: PiecePlacement) -> frozenset[str]:
    """Which slit-end-to-corner arcs cross a slit (or leave the piece's development)."""
    out = set()
    c_own_b = pl.C if pl.b_in_own else pl.C_star
    c_other_b = pl.C_star if pl.b_in_own else pl.C
    if segments_cross(pl.Wa, pl.C, pl.B, pl.Wb):
        out.add("zeta_a")
    if segments_cross(pl.Wb, c_own_b, pl.A, pl.Wa):
        out.add("zeta_b")
    if (not segments_cross(pl.Wa, pl.C_star, pl.A, pl.B)
            or segments_cross(pl.Wa, pl.C_star, pl.B, pl.Wb)):
        out.add("zetap_a")
    if (not segments_cross(pl.Wb, c_other_b, pl.A, pl.B)
            or segments_cross(pl.Wb, c_other_b, pl.A, pl.Wa)):
        out.add("zetap_b")
    return frozenset(out)


def classify_piece(theta, ell_a, phi_a, ell_b, phi_b, same_hemisphere) -> tuple[str, tuple[str, ...]]:
    """Piece case and the sides whose around-the-corner arc must be flipped."""
    blocked = blocked_arcs(place_piece(theta, ell_a, phi_a, ell_b, phi_b, same_hemisphere))
    if not blocked:
        return "V1", ()
    if blocked & {"zeta_a", "zeta_b"}:
        # below the slit bounds a slit never reaches the other slit's direct arc
        raise UnsupportedPiece(f"direct arcs {sorted(blocked)} are blocked")
    sides = tuple(x for x in ("a", "b") if f"zetap_{x}" in blocked)
    if len(sides) == 2 and same_hemisphere:
        raise UnsupportedPiece("both around-the-corner arcs blocked within one hemisphere")
    return "V2", sides


def replacement_edges(d_ab, ell_a, phi_a, beta_a, ell_b, phi_b, beta_b_prime, same) -> tuple[float, float]:
    """Arcs joining the slit ends that go around the boundary curves.

    Around corner ``a`` the far slit end sits at distance ``D`` and angle
    ``psi`` from slit ``a``; the arc around the other side of the boundary
    subtends ``beta_a - psi`` there.  Likewise at ``b``.
    """
    inner_b = 0.5 * beta_b_prime - abs(phi_b)
    D_a = side_from_sas(d_ab, ell_b, inner_b)
    mu_a = _acos(cosine_quotient(d_ab, D_a, ell_b), "angle at a")
    psi_a = abs(mu_a - abs(phi_a)) if same else mu_a + abs(phi_a)
    D_b = side_from_sas(d_ab, ell_a, abs(phi_a))
    mu_b = _acos(cosine_quotient(d_ab, D_b, ell_a), "angle at b")
    psi_b = abs(mu_b - inner_b) if same else mu_b + inner_b
    r_a = side_from_sas(ell_a, D_a, beta_a - psi_a)
    r_b = side_from_sas(ell_b, D_b, beta_b_prime - psi_b)
    return r_a, r_b


# -- forward map ---------------------------------------------------------------

def _hat(a: SamosaAssembly, s: int) -> HatParams:
    view = samosa_view(a, s)
    sl = view.slits[0]
    p, q = sl.ref, sl.other
    alpha_of = {i: a.alpha[j] for i, j in zip(view.unslit, view.punctures)}
    lam_p, lam_q, delta_p, delta_q = joker_hat_edges(
        view.segment(sl.corner, q), view.segment(sl.corner, p), sl.ell,
        view.theta[sl.corner], sl.phi, alpha_of[p], alpha_of[q])
    return HatParams(lam_p, lam_q, delta_p, delta_q)


def _vpiece(a: SamosaAssembly, s: int) -> VPieceParams:
    view = samosa_view(a, s)
    sa, sb = view.slits
    same = sa.hem == sb.hem
    th = view.theta
    e = vpiece_edges(view.segment(0, 1), view.segment(2, 1), view.segment(0, 2),
                     sa.ell, sa.phi, th[0], sb.ell, sb.phi, th[2], same)
    case, blocked = classify_piece(th, sa.ell, sa.phi, sb.ell, sb.phi, same)
    if case == "V2":
        e["r_a"], e["r_b"] = replacement_edges(view.segment(0, 2), sa.ell, sa.phi, th[0],
                                               sb.ell, sb.phi, th[2], same)
    return VPieceParams(case, e, blocked)


def intrinsics(a: SamosaAssembly) -> IntrinsicParams:
    n = a.n
    curves = []
    for k in range(n - 3):
        try:
            curves.append(kink_forward(a.ell[k], a.beta[k]))
        except GeometryError as exc:
            raise PieceError(f"curve {k}", exc) from exc
    hats = []
    for s in (0, n - 3):
        try:
            hats.append(_hat(a, s))
        except GeometryError as exc:
            raise PieceError(f"hat at samosa {s}", exc) from exc
    pieces = []
    for s in range(1, n - 3):
        try:
            pieces.append(_vpiece(a, s))
        except GeometryError as exc:
            raise PieceError(f"two-slit piece at samosa {s}", exc) from exc
    return IntrinsicParams(tuple(a.alpha), tuple(curves), (hats[0], hats[1]), tuple(pieces))


def edge_vector(a: SamosaAssembly) -> EdgeVector:
    return edge_vector_of(intrinsics(a))


def edge_vector_of(p: IntrinsicParams) -> EdgeVector:
    lengths, names = [], []
    for k, cv in enumerate(p.curves):
        lengths.append(cv.c)
        names.append(f"c{k + 1}")
    for h, hat in zip(("hat_low", "hat_high"), p.hats):
        lengths += hat.edges()
        names += [f"{h}.{x}" for x in ("delta_p", "delta_q", "lam_p", "lam_q")]
    for s, piece in enumerate(p.pieces, start=1):
        lengths += piece.edge_values()
        names += [f"piece{s}.{x}" for x in piece.edge_names()]
    return EdgeVector(tuple(lengths), tuple(names))


def total_area(a: SamosaAssembly) -> float:
    """Sum of the hemisphere areas, two per samosa."""
    return sum(2.0 * (math.pi - 0.5 * sum(corner_angles(a, s))) for s in range(a.n - 2))


# -- inverse map -----------------------------------------------------------------

def _sign(hem: str) -> float:
    return 1.0 if hem == NORTH else -1.0


def invert(p: IntrinsicParams, eps) -> SamosaAssembly:
    """Rebuild the assembly from intrinsic data and hemisphere flags.

    ``eps`` lists the hemispheres in the order ``phi_1, phi'_1, phi_2, ...``
    Data that no valid assembly produces raises :class:`NoSolution`; the
    result is never an invalid assembly.
    """
    try:
        a = _reconstruct(p, eps)
    except NoSolution:
        raise
    except GeometryError as exc:
        raise NoSolution(f"intrinsic data admit no assembly: {exc}") from exc
    report = validate(a)
    if not report.ok:
        raise NoSolution("reconstructed assembly is invalid: " + "; ".join(report.lines()[1:]))
    return a


def _reconstruct(p: IntrinsicParams, eps) -> SamosaAssembly:
    n = p.n
    m = n - 3
    eps = tuple(eps)
    if len(eps) != 2 * m:
        raise ValueError(f"need {2 * m} hemisphere flags, got {len(eps)}")
    hem_phi, hem_phi_prime = eps[0::2], eps[1::2]
    ell, beta = [], []
    for k, cv in enumerate(p.curves):
        try:
            lk, bk = kink_inverse(cv.c, cv.kappa)
        except NoSolution as exc:
            raise NoSolution(f"curve {k}: {exc}") from exc
        ell.append(lk)
        beta.append(bk)
    # corner angles and equator lengths depend only on alpha and beta
    skeleton = SamosaAssembly(p.alpha, beta, ell, [0.0] * m, [0.0] * m, hem_phi, hem_phi_prime)
    phi = [0.0] * m
    phi_prime = [0.0] * m

    d0 = equator_lengths(skeleton, 0)
    # first hat: slit at corner 3 measured from the segment toward corner 2
    phi_prime[0] = _sign(hem_phi_prime[0]) * slit_angle_abs(d0[0], ell[0], p.hats[0].lam_p)
    dl = equator_lengths(skeleton, n - 3)
    phi[m - 1] = _sign(hem_phi[m - 1]) * slit_angle_abs(dl[1], ell[m - 1], p.hats[1].lam_p)
    for s, piece in enumerate(p.pieces, start=1):
        a_curve, b_curve = s - 1, s
        th = corner_angles(skeleton, s)
        d = equator_lengths(skeleton, s)
        lam_a, lam_b = piece.edges["lam_a"], piece.edges["lam_b"]
        inner_a = slit_angle_abs(d[2], ell[a_curve], lam_a)
        phi[a_curve] = _sign(hem_phi[a_curve]) * (0.5 * th[0] - inner_a)
        phi_prime[b_curve] = _sign(hem_phi_prime[b_curve]) * slit_angle_abs(d[0], ell[b_curve], lam_b)
    return skeleton.replace(phi=phi, phi_prime=phi_prime)
