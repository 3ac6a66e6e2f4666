import cmath
import math
import re

import numpy as np
import pytest

from hamantash.assembly import NORTH, SOUTH, SamosaAssembly, corner_angles, validate
from hamantash.dtrep import action_angle, holonomy
from hamantash.hyp_core import TWO_PI, cayley, ccw_angle, direction, dist, inverse_cayley, shoot
from hamantash.net import NotUnfoldable, emit_svg, unfold
from hamantash.realize import total_area
from hamantash.sampling import random_assembly

from oracles import bisect

BASE = SamosaAssembly.north((5.6, 5.7, 5.8, 5.5, 5.9), (2.0, 3.2), (0.05, 0.05), (0.4, 0.5), (0.6, 0.7))


def kinds(a):
    return [p.kind for p in unfold(a).polygons]


def _mirror_assembly(a):
    return a.replace(phi=[-x for x in a.phi], phi_prime=[-x for x in a.phi_prime],
                     hem_phi=(SOUTH,) * (a.n - 3), hem_phi_prime=(SOUTH,) * (a.n - 3))


# -- polygon classes -------------------------------------------------------------------

def test_generic_classes():
    assert kinds(BASE) == ["pentagon", "hexagon", "pentagon"]


@pytest.mark.parametrize("which", ["ref", "other"])
def test_terminal_slit_along_the_equator_gives_a_quadrilateral(which):
    t0 = corner_angles(BASE, 0)
    t2 = corner_angles(BASE, 2)
    first = 0.0 if which == "ref" else 0.5 * t0[2]
    last = 0.0 if which == "ref" else 0.5 * t2[0]
    assert kinds(BASE.replace(phi_prime=(first, 0.7)))[0] == "quadrilateral"
    assert kinds(BASE.replace(phi=(0.4, last)))[2] == "quadrilateral"


def test_middle_slits_along_the_equator():
    t1 = corner_angles(BASE, 1)
    # one slit along a segment to the un-slit corner: pentagon; both: quadrilateral
    assert kinds(BASE.replace(phi_prime=(0.6, 0.0)))[1] == "pentagon"
    assert kinds(BASE.replace(phi=(0.5 * t1[0], 0.5)))[1] == "pentagon"
    assert kinds(BASE.replace(phi=(0.5 * t1[0], 0.5), phi_prime=(0.6, 0.0)))[1] == "quadrilateral"


def test_corner_angles_of_the_net():
    net = unfold(BASE)
    alpha = BASE.alpha
    # the hexagon's corners at its puncture and the pentagons' corners at theirs
    for poly, punct in zip(net.polygons, ((0, 1), (2,), (3, 4))):
        v = poly.vertices
        for i in punct:
            C = net.chain.C[i]
            k = min(range(len(v)), key=lambda j: dist(v[j], C))
            assert dist(v[k], C) < 1e-10
            # clockwise boundary: turning counterclockwise from the previous vertex sweeps the interior
            interior = ccw_angle(v[k], v[k - 1], v[(k + 1) % len(v)])
            assert interior == pytest.approx(TWO_PI - alpha[i], abs=1e-9)


def test_not_unfoldable():
    with pytest.raises(NotUnfoldable):
        unfold(BASE.replace(hem_phi_prime=(NORTH, SOUTH), phi_prime=(0.6, -0.7)))


# -- gluing and area ---------------------------------------------------------------------

def test_random_nets_glue_and_conserve_area(rng):
    for _ in range(60):
        a = random_assembly(rng, int(rng.integers(4, 9)), eps=NORTH)
        net = unfold(a)
        assert net.glue_mismatch() < 1e-9
        assert net.area() == pytest.approx(total_area(a), abs=1e-9)
        assert all(p.kind in ("pentagon", "hexagon") for p in net.polygons)
        for (p, i), (q, j) in net.gluings:
            e, f = net.polygons[p].subedges[i], net.polygons[q].subedges[j]
            assert e.carrier + e.interval == f.carrier + f.interval or e.lip is not None
            if e.lip is None:
                # cuts inside one samosa glue back within its own polygon
                assert p == q
            else:
                # slit lips are placed on top of each other, corner first
                assert p != q
                assert dist(e.start, f.start) < 1e-9 and dist(e.end, f.end) < 1e-9


def test_southern_assemblies_unfold_as_mirrors(rng):
    for _ in range(20):
        a = random_assembly(rng, 6, eps=NORTH)
        north, south = unfold(a), unfold(_mirror_assembly(a))
        assert [p.kind for p in north.polygons] == [p.kind for p in south.polygons]
        assert south.area() == pytest.approx(north.area(), abs=1e-9)
        assert south.glue_mismatch() < 1e-9
        assert south.chain is None and not south.north


# -- holonomy invariance -------------------------------------------------------------------

def test_holonomy_ignores_length_and_difference_preserving_angles(rng):
    rotated = 0
    for _ in range(5):
        a = random_assembly(rng, 6, eps=NORTH)
        ref = action_angle(holonomy(a))
        for f in np.linspace(0.2, 1.0, 5):
            b = a.replace(ell=[f * x for x in a.ell])
            got = action_angle(holonomy(b))
            assert np.max(np.abs(np.subtract(got.gamma, ref.gamma))) < 1e-9
            # rotate both slits of a curve by the same amount
            t = 0.9 * f
            c = a.replace(phi=[p * t for p in a.phi],
                          phi_prime=[q - p * (1 - t) for p, q in zip(a.phi, a.phi_prime)])
            if all(q >= 0 for q in c.phi_prime) and validate(c).ok:
                got = action_angle(holonomy(c))
                assert np.max(np.abs(np.subtract(got.gamma, ref.gamma))) < 1e-9
                rotated += 1
    assert rotated > 5


# -- SVG ------------------------------------------------------------------------------------

NUM = r"-?\d+(?:\.\d+)?"


def _commands(d: str):
    return re.findall(r"([MALZ])((?:\s+" + NUM + r")*)", d)


def _endpoints(d: str) -> list[complex]:
    out = []
    for cmd, args in _commands(d):
        vals = [float(x) for x in args.split()]
        if cmd in "ML":
            out.append(complex(vals[0], vals[1]))
        elif cmd == "A":
            out.append(complex(vals[5], vals[6]))
    return out


def _arc_midpoint(p: complex, r: float, large: int, sweep: int, q: complex) -> complex:
    """Midpoint of an SVG circular arc, by the endpoint-to-centre conversion."""
    h = (p - q) / 2
    m = (p + q) / 2
    sq = math.sqrt(max(0.0, (r * r - abs(h) ** 2) / abs(h) ** 2))
    sign = 1 if large != sweep else -1
    c = m + sign * sq * complex(h.imag, -h.real)
    t1 = cmath.phase(p - c)
    dt = cmath.phase((q - c) / (p - c))
    if sweep == 0 and dt > 0:
        dt -= TWO_PI
    if sweep == 1 and dt < 0:
        dt += TWO_PI
    return c + r * cmath.exp(1j * (t1 + dt / 2))


def _true_midpoint(p: complex, q: complex) -> complex:
    """Point of the disk geodesic from p to q equidistant (Euclidean) from both ends."""
    P, Q = inverse_cayley(p), inverse_cayley(q)
    L, h = dist(P, Q), direction(P, Q)
    s = bisect(lambda s: abs(cayley(shoot(P, h, s)) - p) - abs(cayley(shoot(P, h, s)) - q), 0.0, L)
    return cayley(shoot(P, h, s))


def _paths(svg: str):
    return re.findall(r' d="([^"]+)"', svg)


def test_svg_is_deterministic(rng):
    a = random_assembly(np.random.default_rng(7), 6, eps=NORTH)
    b = random_assembly(np.random.default_rng(7), 6, eps=NORTH)
    assert emit_svg(unfold(a)) == emit_svg(unfold(b))


def test_svg_echoes_the_net_coordinates(rng):
    net = unfold(random_assembly(rng, 6, eps=NORTH))
    svg = emit_svg(net, overlay=False, markers=False)
    for d, poly in zip(_paths(svg), net.polygons):
        pts = _endpoints(d)
        want = [cayley(p) for p in poly.vertices]
        assert len(pts) == len(want) + 1
        for w, z in zip(pts, want + [want[0]]):
            assert abs(w - z) < 1e-9


def test_svg_arcs_follow_geodesics(rng):
    worst = 0.0
    for _ in range(5):
        net = unfold(random_assembly(rng, int(rng.integers(4, 8)), eps=NORTH))
        for d in _paths(emit_svg(net)):
            prev = None
            for cmd, args in _commands(d):
                vals = [float(x) for x in args.split()]
                if cmd == "M":
                    prev = complex(*vals)
                elif cmd in "AL":
                    q = complex(vals[-2], vals[-1])
                    if abs(q - prev) < 1e-6:
                        prev = q
                        continue
                    mid = (prev + q) / 2 if cmd == "L" else _arc_midpoint(prev, vals[0], int(vals[3]),
                                                                        int(vals[4]), q)
                    worst = max(worst, abs(mid - _true_midpoint(prev, q)))
                    prev = q
    assert worst <= 1e-4


def test_svg_layers():
    svg = emit_svg(unfold(BASE))
    assert 'id="chain"' in svg and 'id="slits"' in svg
    bare = emit_svg(unfold(BASE), overlay=False, markers=False)
    assert 'id="chain"' not in bare and 'id="slits"' not in bare
    assert svg.startswith("<svg") and svg.endswith("</svg>\n")
