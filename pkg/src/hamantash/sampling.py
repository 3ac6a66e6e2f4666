"""Random valid inputs for property tests and the CLI self-test."""

from __future__ import annotations

import math

import numpy as np

from .assembly import NORTH, SOUTH, SamosaAssembly, samosa_view, slit_bounds, validate
from .chains import ActionAngle, build_chain, chain_rep
from .hyp_core import I_POINT, TWO_PI, HPoint, Isometry, elliptic, translation_to
from .realize import UnsupportedPiece, classify_piece

# cone angle cap at terminal corners; a loop around a corner needs it below pi
TERMINAL_CAP = math.pi - 0.05
# smallest sampled cone angle; sharper corners make chain matrices ill-conditioned
MIN_CONE = 0.1


def random_cone_data(rng: np.random.Generator, n: int, min_gap: float = 0.05):
    """Defects and actions with every samosa's cone slack at least ``min_gap``.

    Writes ``x_k = beta'_k`` as a decreasing chain so the cone conditions
    become positive gaps that share the total slack ``2pi - sum(theta)``.
    """
    m = n - 3
    while True:
        total = rng.uniform(0.3, 1.9) * math.pi
        theta = rng.dirichlet(np.full(n, 2.0)) * total
        if max(theta[[0, 1, n - 2, n - 1]]) >= TERMINAL_CAP or theta.min() < MIN_CONE:
            continue
        slack = TWO_PI - theta.sum()
        gaps = rng.dirichlet(np.full(m + 1, 2.0)) * slack
        if gaps.min() < min_gap:
            continue
        x = np.empty(m)
        if m:
            x[0] = TWO_PI - theta[0] - theta[1] - gaps[0]
        for k in range(1, m):
            x[k] = x[k - 1] - theta[k + 1] - gaps[k]
        alpha = TWO_PI - theta
        beta = TWO_PI - x
        return alpha, beta


def random_assembly(rng: np.random.Generator, n: int, eps=None, ell_range=(0.1, 0.9),
                    phi_range=(0.05, 0.95)) -> SamosaAssembly:
    """A valid assembly whose pieces all triangulate.

    ``eps`` may be "north", "random" or a flag tuple.  Two-slit pieces with
    both around-the-corner arcs blocked inside one hemisphere are rejected.
    """
    m = n - 3
    while True:
        alpha, beta = random_cone_data(rng, n)
        if eps is None or eps == "random":
            flags = tuple(rng.choice([NORTH, SOUTH]) for _ in range(2 * m))
        elif eps == NORTH:
            flags = (NORTH,) * (2 * m)
        else:
            flags = tuple(eps)
        hem_phi, hem_phi_prime = flags[0::2], flags[1::2]
        phi = [(1 if h == NORTH else -1) * rng.uniform(*phi_range) * 0.5 * b
               for h, b in zip(hem_phi, beta)]
        phi_prime = [(1 if h == NORTH else -1) * rng.uniform(*phi_range) * 0.5 * (TWO_PI - b)
                     for h, b in zip(hem_phi_prime, beta)]
        skeleton = SamosaAssembly(alpha, beta, [1.0] * m, phi, phi_prime, hem_phi, hem_phi_prime)
        bound = [math.inf] * m
        for s in range(n - 2):
            for curve, b in slit_bounds(samosa_view(skeleton, s)).items():
                bound[curve] = min(bound[curve], b)
        ell = [rng.uniform(*ell_range) * b for b in bound]
        a = skeleton.replace(ell=ell)
        if validate(a).ok and pieces_supported(a):
            return a


def pieces_supported(a: SamosaAssembly) -> bool:
    for s in range(1, a.n - 3):
        view = samosa_view(a, s)
        sa, sb = view.slits
        try:
            classify_piece(view.theta, sa.ell, sa.phi, sb.ell, sb.phi, sa.hem == sb.hem)
        except UnsupportedPiece:
            return False
    return True


def random_coords(rng: np.random.Generator, n: int, gamma_max: float = TWO_PI) -> ActionAngle:
    alpha, beta = random_cone_data(rng, n)
    gamma = rng.uniform(0.0, gamma_max, size=n - 3)
    return ActionAngle(tuple(alpha), tuple(beta), tuple(gamma))


def random_isometry(rng: np.random.Generator, spread: float = 0.5) -> Isometry:
    """Rotation about ``i`` followed by a move to a point near ``i``."""
    target = HPoint(spread * rng.normal(), math.exp(spread * rng.normal()))
    return translation_to(target) @ elliptic(I_POINT, rng.uniform(0, TWO_PI))


def random_rep(rng: np.random.Generator, n: int, braids: int = 0, max_entry: float = 30.0):
    """A DT representation from a random chain, conjugated and optionally
    re-presented by ``braids`` random Hurwitz moves.

    Presentations with a matrix entry above ``max_entry`` are redrawn: their
    products lose too many digits to check relations at 1e-8.
    """
    from .dtrep import hurwitz

    while True:
        coords = random_coords(rng, n)
        chain = build_chain(coords, anchor=HPoint(0.5 * rng.normal(), math.exp(0.5 * rng.normal())),
                            heading=rng.uniform(0, TWO_PI))
        rep = chain_rep(chain, coords.alpha).conj(random_isometry(rng))
        for _ in range(braids):
            rep = hurwitz(rep, int(rng.integers(0, n - 1)), bool(rng.integers(0, 2)))
        if max(abs(x) for g in rep.gens for x in (g.a, g.b, g.c, g.d)) <= max_entry:
            return rep
