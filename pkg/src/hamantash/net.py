"""Unfolding hamantash assemblies into nets of hyperbolic polygons.

Each hamantash keeps its slit-free hemisphere intact as a triangle and cuts
the slit hemisphere into flaps, which are flipped over the equator:

* one slit: the slit is extended until it hits the opposite equator
  segment, giving two flaps (a pentagon), or one flap when the slit runs
  along the equator (a quadrilateral);
* two slits: the slits are extended until they meet and the meeting point
  is joined to the un-slit corner, giving three flaps (a hexagon), fewer
  when slits run along equator segments.

Polygons are embedded face-up, i.e. by orientation-reversing maps, so a
north hamantash has its intact southern triangle running clockwise.  The
polygons are then glued along their slit lips, which lays the net out in
a single frame; erasing the flaps leaves the triangle chain.

Every polygon edge is split into sub-edges that are glued in pairs.  A
sub-edge lies on a "carrier" (an equator segment, a slit ray or the spoke
from the slits' meeting point to the un-slit corner) and is addressed by its
distance interval along the carrier.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .assembly import NORTH, MARGIN, SamosaAssembly, classify, samosa_view, validate
from .chains import TriangleChain
from .hyp_core import (GeometryError, HPoint, I_POINT, Isometry, ccw_angle, cayley, direction,
                       dist, elliptic, reflect, shoot, signed_area, translation_to,
                       triangle_from_angles, triangle_from_points, vertex_angle)
from .hyp_trig import slit_max_one, slit_max_two

ON_TOL = 1e-9
POLYGON_CLASS = {4: "quadrilateral", 5: "pentagon", 6: "hexagon"}


class NotUnfoldable(GeometryError):
    pass


@dataclass(frozen=True)
class SubEdge:
    """Piece of a polygon edge glued to exactly one other piece."""

    start: HPoint
    end: HPoint
    carrier: tuple
    interval: tuple[float, float]
    side: str
    lip: tuple | None = None  # (curve, hand) for slit lips, which run from the slit corner
    # for lips: far end of the whole polygon edge, on the lip's ray but much farther out
    ray_point: HPoint | None = None

    @property
    def length(self) -> float:
        return dist(self.start, self.end)


@dataclass
class Polygon:
    samosa: int
    vertices: list[HPoint]
    triangle: tuple[HPoint, HPoint, HPoint]
    subedges: list[SubEdge]

    @property
    def kind(self) -> str:
        return POLYGON_CLASS.get(len(self.vertices), f"{len(self.vertices)}-gon")

    def area(self) -> float:
        """Area from a triangle fan with signed pieces, so reflex vertices are fine."""
        v = self.vertices
        return abs(sum(signed_area(v[0], v[k], v[k + 1]) for k in range(1, len(v) - 1)))

    def moved(self, g: Isometry) -> Polygon:
        subs = [SubEdge(g(e.start), g(e.end), e.carrier, e.interval, e.side, e.lip,
                        None if e.ray_point is None else g(e.ray_point))
                for e in self.subedges]
        return Polygon(self.samosa, [g(p) for p in self.vertices], tuple(g(p) for p in self.triangle),
                       subs)


@dataclass
class Net:
    polygons: list[Polygon]
    gluings: list[tuple[tuple[int, int], tuple[int, int]]]
    chain: TriangleChain | None = None
    north: bool = True

    def glue_mismatch(self) -> float:
        """Largest length difference over glued sub-edge pairs."""
        worst = 0.0
        for (p, i), (q, j) in self.gluings:
            a = self.polygons[p].subedges[i].length
            b = self.polygons[q].subedges[j].length
            worst = max(worst, abs(a - b))
        return worst

    def area(self) -> float:
        return sum(p.area() for p in self.polygons)


# -- one samosa -----------------------------------------------------------------

def _mirror(p: HPoint) -> HPoint:
    return HPoint(-p.x, p.y)


def _frame(p: HPoint, heading: float) -> Isometry:
    """Isometry taking ``i`` with upward heading to ``p`` with ``heading``."""
    return translation_to(p) @ elliptic(I_POINT, heading - 0.5 * math.pi)


def _on_segment(p: HPoint, a: HPoint, b: HPoint) -> float | None:
    """Distance from ``a`` if ``p`` lies on the segment ``ab``, else None."""
    da, dab = dist(a, p), dist(a, b)
    if da < ON_TOL:
        return da
    if da > dab + ON_TOL:
        return None
    angle = vertex_angle(a, p, b)
    if angle > 0.5 * math.pi or math.asinh(math.sinh(da) * math.sin(angle)) > ON_TOL:
        return None
    return da


@dataclass
class _LocalCut:
    """A samosa's cuts in the frame of its intact triangle (slit side mirrored onto it)."""

    V: tuple[HPoint, HPoint, HPoint]
    flaps: dict[tuple[int, int], HPoint]  # hinge side -> outer vertex before flipping
    carriers: dict[tuple, tuple[HPoint, HPoint]]  # key -> (origin, end)
    lips: dict[tuple, tuple]  # carrier key -> (slit, mode)


def _interior_heading(V, c: int, ref: int, other: int, psi: float) -> float:
    """Direction at corner ``c`` turned from the ray to ``ref`` toward ``other``."""
    sense = 1.0 if ccw_angle(V[c], V[ref], V[other]) < math.pi else -1.0
    return direction(V[c], V[ref]) + sense * psi


def _slit_mode(psi: float, half: float) -> str:
    """Whether a slit runs along its reference segment, the other segment, or between."""
    if psi < MARGIN:
        return "ref"
    if psi > half - MARGIN:
        return "other"
    return "interior"


def _eq(i: int, j: int) -> tuple:
    return ("eq", min(i, j), max(i, j))


def _local_cut(view) -> _LocalCut:
    th = view.theta
    V = triangle_from_angles(*(0.5 * t for t in th), orient="cw").vertices
    carriers = {_eq(i, j): (V[min(i, j)], V[max(i, j)]) for i, j in ((0, 1), (0, 2), (1, 2))}
    flaps: dict[tuple[int, int], HPoint] = {}
    lips = {}

    def add_slit(sl, tip_point):
        c, r, o = sl.corner, sl.ref, sl.other
        psi = abs(sl.phi)
        heading = _interior_heading(V, c, r, o, psi)
        mode = _slit_mode(psi, 0.5 * th[c])
        if mode == "interior":
            carriers[("ray", c)] = (V[c], tip_point(heading))
            lips[("ray", c)] = (sl, mode)
        else:
            lips[_eq(c, r if mode == "ref" else o)] = (sl, mode)
        return mode

    if len(view.slits) == 1:
        sl = view.slits[0]
        c, r, o = sl.corner, sl.ref, sl.other
        L = slit_max_one(view.segment(c, r), sl.phi, th[r])
        X = shoot(V[c], _interior_heading(V, c, r, o, abs(sl.phi)), L)
        mode = add_slit(sl, lambda h: X)
        if mode == "ref":
            flaps[tuple(sorted((c, o)))] = V[r]
        elif mode == "other":
            flaps[tuple(sorted((c, r)))] = V[o]
        else:
            flaps[tuple(sorted((c, r)))] = X
            flaps[tuple(sorted((c, o)))] = X
    else:
        sa, sb = view.slits  # corner 0 measured toward 2, corner 2 measured toward 1
        la, _ = slit_max_two(view.segment(0, 2), sa.phi, sb.phi, th[2])
        Y = shoot(V[0], _interior_heading(V, 0, 2, 1, abs(sa.phi)), la)
        if add_slit(sa, lambda h: Y) == "ref" or add_slit(sb, lambda h: Y) == "other":
            raise NotUnfoldable("a slit runs along the segment joining the two slit corners")
        if dist(Y, V[1]) > ON_TOL:
            carriers[("spoke",)] = (Y, V[1])
        for hinge in ((0, 2), (1, 2), (0, 1)):
            # a flap whose outer vertex sits on its hinge has no area
            if _on_segment(Y, V[hinge[0]], V[hinge[1]]) is None:
                flaps[hinge] = Y
    return _LocalCut(V, flaps, carriers, lips)


def _carrier_of(cut: _LocalCut, p: HPoint, q: HPoint):
    for key, (a, b) in cut.carriers.items():
        s, t = _on_segment(p, a, b), _on_segment(q, a, b)
        if s is not None and t is not None:
            return key, s, t
    raise NotUnfoldable("polygon edge lies on no cut")


def _hand(side: str, hem: str) -> int:
    """Orientation class of a lip; glued lips have opposite hands."""
    h = 1 if side == "ref" else -1
    return h if hem == NORTH else -h


def _cluster(values) -> list[float]:
    out: list[float] = []
    for v in sorted(values):
        if not out or v - out[-1] > 1e-8:
            out.append(v)
    return out


def _index(knots: list[float], v: float) -> int:
    return min(range(len(knots)), key=lambda k: abs(knots[k] - v))


def unfold_samosa(a: SamosaAssembly, s: int) -> Polygon:
    """The unfolded hamantash ``s`` in the frame of its intact triangle."""
    view = samosa_view(a, s)
    cut = _local_cut(view)
    V = cut.V
    verts: list[HPoint] = []
    edges = []  # (placed start, placed end, carrier, t_start, t_end, side)
    for i, j in ((0, 1), (1, 2), (2, 0)):
        verts.append(V[i])
        hinge = (min(i, j), max(i, j))
        if hinge in cut.flaps:
            o = cut.flaps[hinge]
            flipped = reflect(o, V[i], V[j])
            verts.append(flipped)
            side = f"flap{hinge[0]}{hinge[1]}"
            for (P, Q), (lp, lq) in (((V[i], flipped), (V[i], o)), ((flipped, V[j]), (o, V[j]))):
                key, t0, t1 = _carrier_of(cut, lp, lq)
                edges.append((P, Q, key, t0, t1, side))
        else:
            key, t0, t1 = _carrier_of(cut, V[i], V[j])
            edges.append((V[i], V[j], key, t0, t1, "intact"))
    knots: dict[tuple, list[float]] = {}
    for _, _, key, t0, t1, _ in edges:
        knots.setdefault(key, []).extend((t0, t1))
    lip_span = {}
    for key, (sl, _mode) in cut.lips.items():
        origin, end = cut.carriers[key]
        D = dist(origin, end)
        # (corner end, slit end) in carrier coordinates
        lip_span[key] = (0.0, sl.ell) if dist(origin, V[sl.corner]) < ON_TOL else (D, D - sl.ell)
        knots[key].extend(lip_span[key])
    knots = {k: _cluster(v) for k, v in knots.items()}
    subs = []
    for P, Q, key, t0, t1, side in edges:
        ks = knots[key]
        i0, i1 = _index(ks, t0), _index(ks, t1)
        step = 1 if i1 > i0 else -1
        length = dist(P, Q)
        heading = direction(P, Q)
        for u, w in zip(range(i0, i1, step), range(i0 + step, i1 + step, step)):
            A = P if u == i0 else shoot(P, heading, abs(ks[u] - t0) / abs(t1 - t0) * length)
            B = Q if w == i1 else shoot(P, heading, abs(ks[w] - t0) / abs(t1 - t0) * length)
            iv = (min(u, w), max(u, w))
            lip = far = None
            if key in lip_span:
                ends = [_index(ks, x) for x in lip_span[key]]
                if iv == (min(ends), max(ends)):
                    lip = _lip_tag(cut.lips[key], side)
                    far = Q
                    if u != ends[0]:
                        A, B, far = B, A, P
            subs.append(SubEdge(A, B, (s,) + key, iv, side, lip, far))
    poly = Polygon(s, verts, tuple(V), subs)
    if view.slits[0].hem != NORTH:
        poly = _mirrored(poly)
    return poly


def _lip_tag(lip, side: str) -> tuple[int, int]:
    sl, mode = lip
    if mode == "interior":
        lip_side = "ref" if str(sl.ref) in side[4:] else "other"
    elif side == "intact":
        lip_side = mode
    else:
        lip_side = "other" if mode == "ref" else "ref"
    return sl.curve, _hand(lip_side, sl.hem)


def _mirrored(poly: Polygon) -> Polygon:
    """Mirror image; a hamantash slit in the south unfolds as the mirror of the north case."""
    subs = [SubEdge(_mirror(e.start), _mirror(e.end), e.carrier, e.interval, e.side, e.lip,
                    None if e.ray_point is None else _mirror(e.ray_point))
            for e in poly.subedges]
    return Polygon(poly.samosa, [_mirror(p) for p in poly.vertices],
                   tuple(_mirror(p) for p in poly.triangle), subs)


# -- the net ---------------------------------------------------------------------

def _pairs(polys: list[Polygon]):
    groups: dict[tuple, list[tuple[int, int]]] = {}
    lips: dict[tuple[int, int], tuple[int, int]] = {}
    for p, poly in enumerate(polys):
        for i, e in enumerate(poly.subedges):
            if e.lip is not None:
                lips[(e.lip[0], e.lip[1], p)] = (p, i)
            else:
                groups.setdefault(e.carrier + e.interval, []).append((p, i))
    out = []
    for key, members in groups.items():
        if len(members) != 2:
            raise NotUnfoldable(f"cut {key} has {len(members)} sides instead of 2")
        out.append((members[0], members[1]))
    return out, lips


def _isometry_matching(p1: HPoint, h1: float, p2: HPoint, h2: float) -> Isometry:
    """Orientation-preserving map sending ``p1`` to ``p2`` and heading ``h1`` to ``h2``."""
    return _frame(p2, h2) @ _frame(p1, h1).inverse()


def _lip_ray(view, sl, hand: int) -> tuple[HPoint, float]:
    """Slit corner and heading of the lip with the given hand, in the samosa's local frame.

    The lip on the ``ref`` side lies on the flap hinged on the corner's ref
    segment, so its heading is the slit heading reflected across that
    segment; likewise for the other side.  Slits along an equator segment
    fit the same formula.
    """
    V = triangle_from_angles(*(0.5 * t for t in view.theta), orient="cw").vertices
    c = sl.corner
    side_ref = (hand == 1) == (sl.hem == NORTH)
    h = _interior_heading(V, c, sl.ref, sl.other, abs(sl.phi))
    h = 2.0 * direction(V[c], V[sl.ref if side_ref else sl.other]) - h
    if sl.hem != NORTH:
        return _mirror(V[c]), math.pi - h
    return V[c], h


def _local_triangle(view) -> tuple[HPoint, HPoint, HPoint]:
    V = triangle_from_angles(*(0.5 * t for t in view.theta), orient="cw").vertices
    if view.slits and view.slits[0].hem != NORTH:
        return tuple(_mirror(p) for p in V)
    return V


def _heading_after(g: Isometry, p: HPoint, h: float) -> float:
    return direction(g(p), g(shoot(p, h, 1.0)))


def placements(a: SamosaAssembly) -> list[Isometry]:
    """Maps from each samosa's local frame into the net frame.

    Samosa ``k + 1`` is placed so its copy of curve ``k``'s lip of hand -1
    lies on samosa ``k``'s lip of hand +1.  Only corners and headings are
    used, so this stays accurate when slits are very short.
    """
    rep = validate(a)
    if not rep.ok:
        raise NotUnfoldable("invalid assembly: " + "; ".join(rep.lines()[1:]))
    if not classify(a).is_hamantash:
        raise NotUnfoldable("assembly is not a hamantash assembly")
    views = [samosa_view(a, s) for s in range(a.n - 2)]
    gs = [Isometry.identity()]
    for k in range(a.n - 3):
        p1, h1 = _lip_ray(views[k], views[k].slits[-1], 1)
        p2, h2 = _lip_ray(views[k + 1], views[k + 1].slits[0], -1)
        g = gs[k]
        gs.append(_isometry_matching(p2, h2, g(p1), _heading_after(g, p1, h1)))
    return gs


def placed_chain(a: SamosaAssembly) -> TriangleChain:
    """The triangle chain left in the net after erasing the flaps."""
    gs = placements(a)
    tris = [tuple(g(p) for p in _local_triangle(samosa_view(a, s))) for s, g in enumerate(gs)]
    return _chain(tris)


def unfold(a: SamosaAssembly) -> Net:
    """Unfold a valid hamantash assembly and glue the pieces along their slits."""
    if a.n < 4:
        raise NotUnfoldable("an assembly with fewer than four cone points has no slits to unfold")
    gs = placements(a)
    n = a.n
    placed = [unfold_samosa(a, s).moved(g) for s, g in enumerate(gs)]
    pairs, lips = _pairs(placed)
    gluings = list(pairs)
    for k in range(n - 3):
        for hand in (1, -1):
            try:
                gluings.append((lips[(k, hand, k)], lips[(k, -hand, k + 1)]))
            except KeyError:
                raise NotUnfoldable(f"slit {k} is too short to cut at tolerance {ON_TOL}") from None
    north = all(h == NORTH for h in a.eps)
    return Net(placed, gluings, _chain([p.triangle for p in placed]) if north else None, north)


def _chain(tris) -> TriangleChain:
    C = [tris[0][0], tris[0][1]] + [t[1] for t in tris[1:-1]] + [tris[-1][1], tris[-1][2]]
    B = [t[2] for t in tris[:-1]]
    return TriangleChain(tuple(C), tuple(B), tuple(triangle_from_points(*t) for t in tris))


# -- SVG -------------------------------------------------------------------------

SVG_SIZE = 800


def _fmt(x: float) -> str:
    s = f"{x:.12f}".rstrip("0").rstrip(".")
    return "0" if s in ("-0", "") else s


def _disk(p: HPoint) -> complex:
    return cayley(p)


def _arc(p: complex, q: complex) -> str:
    """SVG path command for the geodesic from ``p`` to ``q`` in the disk."""
    cross = p.real * q.imag - p.imag * q.real
    if abs(cross) < 1e-12:
        return f"L {_fmt(q.real)} {_fmt(q.imag)}"
    # the geodesic circle passes through p, q and the inversion of p
    ip = p / abs(p) ** 2 if abs(p) > 1e-12 else q / abs(q) ** 2
    center = _circumcenter(p, q, ip)
    r = abs(p - center)
    # the circle's centre lies beyond the chord, so an arc turning counterclockwise
    # about the origin turns clockwise about its centre
    sweep = 0 if cross > 0 else 1
    return f"A {_fmt(r)} {_fmt(r)} 0 0 {sweep} {_fmt(q.real)} {_fmt(q.imag)}"


def _circumcenter(a: complex, b: complex, c: complex) -> complex:
    d = 2 * (a.real * (b.imag - c.imag) + b.real * (c.imag - a.imag) + c.real * (a.imag - b.imag))
    ux = ((abs(a) ** 2) * (b.imag - c.imag) + (abs(b) ** 2) * (c.imag - a.imag)
          + (abs(c) ** 2) * (a.imag - b.imag)) / d
    uy = ((abs(a) ** 2) * (c.real - b.real) + (abs(b) ** 2) * (a.real - c.real)
          + (abs(c) ** 2) * (b.real - a.real)) / d
    return complex(ux, uy)


def _path(points: list[HPoint], closed: bool = True) -> str:
    w = [_disk(p) for p in points]
    parts = [f"M {_fmt(w[0].real)} {_fmt(w[0].imag)}"]
    seq = list(zip(w, w[1:] + ([w[0]] if closed else [])))
    parts += [_arc(p, q) for p, q in seq]
    if closed:
        parts.append("Z")
    return " ".join(parts)


def emit_svg(net: Net, overlay: bool = True, markers: bool = True) -> str:
    """SVG of the net in the Poincare disk; deterministic for a given net."""
    out = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{SVG_SIZE}" height="{SVG_SIZE}" '
           f'viewBox="-1.05 -1.05 2.1 2.1">',
           '<g transform="scale(1,-1)">',
           '<circle cx="0" cy="0" r="1" fill="none" stroke="#888" stroke-width="0.004"/>',
           '<g id="polygons">']
    for k, poly in enumerate(net.polygons):
        hue = (k * 67) % 360
        out.append(f'<path class="{poly.kind}" data-samosa="{poly.samosa}" '
                   f'd="{_path(poly.vertices)}" fill="hsl({hue},60%,70%)" fill-opacity="0.45" '
                   f'stroke="#333" stroke-width="0.003"/>')
    out.append("</g>")
    if overlay and net.chain is not None:
        out.append('<g id="chain">')
        ch = net.chain
        for k in range(ch.n - 2):
            out.append(f'<path d="{_path(list(ch.triangle_vertices(k)))}" fill="none" '
                       f'stroke="#c00" stroke-width="0.004"/>')
        out.append("</g>")
    if markers:
        out.append('<g id="slits">')
        for poly in net.polygons:
            for e in poly.subedges:
                if e.lip is not None:
                    out.append(f'<path data-curve="{e.lip[0]}" d="{_path([e.start, e.end], closed=False)}" '
                               f'fill="none" stroke="#06c" stroke-width="0.006"/>')
        out.append("</g>")
    out.append("</g>")
    out.append("</svg>")
    return "\n".join(out) + "\n"
