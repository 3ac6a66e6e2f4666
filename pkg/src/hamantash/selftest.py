"""Seeded property checks behind ``hamantash selftest``.

A quick version of the test suite that needs no test dependencies: each
check draws ``count`` random inputs from one generator and reports the worst
residual against its tolerance.
"""

from __future__ import annotations

import math

import numpy as np

from .assembly import classify
from .barycentric import PointMass, pm_combine
from .chains import build_chain, chain_rep
from .dtrep import (action_angle, chain_areas, holonomy, play_game, prepare, standardize, synth,
                    untwist)
from .hyp_core import HPoint, TWO_PI, dist, elliptic_data
from .hyp_trig import kink_forward, kink_inverse, loa_side, loc_angle
from .net import unfold
from .realize import edge_vector, intrinsics, invert, total_area
from .sampling import random_assembly, random_coords, random_rep


def _worst(values) -> float:
    return max(values, default=0.0)


def _assembly_diff(a, b) -> float:
    return max(float(np.max(np.abs(np.subtract(getattr(a, k), getattr(b, k)))))
               for k in ("alpha", "beta", "ell", "phi", "phi_prime"))


def check_trig(rng, count):
    res = []
    for _ in range(count):
        ang = rng.dirichlet([1.0, 1.0, 1.0]) * math.pi * rng.uniform(0.05, 0.95)
        sides = [loa_side(ang[(i + 1) % 3], ang[(i + 2) % 3], ang[i]) for i in range(3)]
        back = [loc_angle(sides[(i + 1) % 3], sides[(i + 2) % 3], sides[i]) for i in range(3)]
        res.append(max(abs(x - y) for x, y in zip(ang, back)))
    return _worst(res), 1e-9


def check_kink(rng, count):
    res = []
    for _ in range(count):
        ell, beta = rng.uniform(0.05, 3.0), rng.uniform(0.05, TWO_PI - 0.05)
        k = kink_forward(ell, beta)
        ell2, beta2 = kink_inverse(k.c, k.kappa)
        res.append(max(abs(ell - ell2), abs(beta - beta2)))
    return _worst(res), 1e-9


def check_realize(rng, count):
    res = []
    for _ in range(count):
        a = random_assembly(rng, int(rng.integers(4, 9)), eps="random")
        res.append(_assembly_diff(a, invert(intrinsics(a), a.eps)))
    return _worst(res), 1e-8


def check_area(rng, count):
    res = []
    for _ in range(count):
        a = random_assembly(rng, int(rng.integers(4, 9)), eps="random")
        res.append(abs(total_area(a) - (sum(a.alpha) - TWO_PI * (a.n - 1))))
    return _worst(res), 1e-10


def _random_chains(rng, count):
    for _ in range(count):
        coords = random_coords(rng, int(rng.integers(4, 9)), gamma_max=math.pi)
        chain = build_chain(coords)
        yield coords, chain, chain_rep(chain, coords.alpha)


def check_chain_relation(rng, count):
    res = []
    for coords, chain, rep in _random_chains(rng, count):
        res.append(rep.relation_residual())
        res += [abs(elliptic_data(b)[1] - beta) for b, beta in zip(rep.b_elements(), coords.beta)]
    return _worst(res), 1e-8


def check_chain_fixed_points(rng, count):
    res = []
    for coords, chain, rep in _random_chains(rng, count):
        res += [dist(elliptic_data(b)[0], B) for b, B in zip(rep.b_elements(), chain.B)]
    return _worst(res), 1e-7


def check_synth(rng, count):
    res = []
    for _ in range(count):
        rep = random_rep(rng, int(rng.integers(4, 9)), braids=4)
        x = action_angle(prepare(rep))
        y = action_angle(prepare(holonomy(synth(rep))))
        res.append(max(np.max(np.abs(np.subtract(x.beta, y.beta))),
                       np.max(np.abs(np.subtract(x.gamma, y.gamma)))))
    return _worst(res), 1e-8


def check_game(rng, count):
    """Number of games whose chain has a triangle of area at most 1e-6."""
    losses = 0
    for _ in range(count):
        rep = random_rep(rng, int(rng.integers(4, 9)), braids=6)
        losses += min(chain_areas(standardize(rep, play_game(rep)))) <= 1e-6
    return float(losses), 0.5


def check_untwist(rng, count):
    res = []
    for _ in range(count):
        rep = random_rep(rng, int(rng.integers(4, 9)), braids=4)
        std = standardize(rep, play_game(rep))
        before, after = action_angle(std), action_angle(untwist(std))
        # an angle outside [0, pi) counts as a unit failure
        out = 0.0 if all(0.0 <= g < math.pi for g in after.gamma) else 1.0
        res.append(max(out, float(np.max(np.abs(np.subtract(before.beta, after.beta))))))
    return _worst(res), 1e-9


def check_barycentric(rng, count):
    res = []
    for _ in range(count):
        pts = [PointMass(HPoint(rng.normal(), math.exp(rng.normal())), rng.uniform(0.1, 3.0))
               for _ in range(3)]
        left = pm_combine(pm_combine(pts[0], pts[1]), pts[2])
        right = pm_combine(pts[0], pm_combine(pts[1], pts[2]))
        res.append(max(dist(left.point, right.point), abs(left.mass - right.mass)))
    return _worst(res), 1e-10


def check_edge_count(rng, count):
    bad = 0
    for _ in range(count):
        n = int(rng.integers(4, 9))
        bad += len(edge_vector(random_assembly(rng, n, eps="random"))) != 6 * n - 15
    return float(bad), 0.5


def check_net(rng, count):
    res = []
    for _ in range(count):
        a = random_assembly(rng, int(rng.integers(4, 8)), eps="north")
        if not classify(a).is_hamantash:
            continue
        net = unfold(a)
        res.append(max(net.glue_mismatch(), abs(net.area() - total_area(a))))
    return _worst(res), 1e-9


CHECKS = (
    ("trig round trip", check_trig),
    ("kink round trip", check_kink),
    ("realization round trip", check_realize),
    ("area formula", check_area),
    ("chain holonomy relation", check_chain_relation),
    ("chain fixed points", check_chain_fixed_points),
    ("holonomy of synth", check_synth),
    ("pants game", check_game),
    ("untwist", check_untwist),
    ("point-mass associativity", check_barycentric),
    ("edge count 6n-15", check_edge_count),
    ("net gluing and area", check_net),
)

# checks that count failing samples instead of measuring a residual
COUNTED = (check_game, check_edge_count)


def run_selftest(seed: int = 0, count: int = 20) -> list[tuple[str, bool, str]]:
    out = []
    for k, (name, fn) in enumerate(CHECKS):
        rng = np.random.default_rng([seed, k])
        value, tol = fn(rng, count)
        if fn in COUNTED:
            detail = f"{int(value)} failures in {count} samples"
        else:
            detail = f"worst {value:.3g} (tolerance {tol:.3g})"
        out.append((name, value < tol, detail))
    return out
