"""DT representations as tuples of rotations.

A representation is stored as the images ``rho(c_1), ..., rho(c_n)`` of a
geometric presentation: ``c_i`` loops counterclockwise around puncture ``i``
and ``c_1 ... c_n = 1``.  Punctures sit counterclockwise around a circle, and
for a run ``I`` of consecutive punctures ``c_I`` is the ordered product
of its generators, taken counterclockwise.

This module finds a presentation whose standard chain is non-degenerate
(:func:`play_game`, :func:`standardize`), removes overlaps between adjacent
triangles (:func:`untwist`), and builds a north hamantash assembly with a
prescribed holonomy (:func:`synth`).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import reduce

from .assembly import SamosaAssembly, samosa_view, slit_bounds
from .chains import (ActionAngle, DegenerateTriangle, TriangleChain,
                     chain_from_rep, read_coords)
from .hyp_core import (TWO_PI, GeometryError, HPoint, Isometry, NotElliptic, dist,
                       elliptic, elliptic_data, orientation, triangle_from_points)

COLOR_TOL = 1e-7
AREA_TOL = 1e-6
REP_TOL = 1e-8
SYNTH_MARGIN = 1e-6


class InvalidRep(GeometryError):
    pass


class ImpossiblePosition(GeometryError):
    """The game found no legal continuation; only a tolerance problem causes this."""


def product(mats) -> Isometry:
    return reduce(lambda x, y: x @ y, mats, Isometry.identity())


@dataclass(frozen=True)
class DTRep:
    gens: tuple[Isometry, ...]
    alpha: tuple[float, ...]

    def __post_init__(self):
        object.__setattr__(self, "gens", tuple(self.gens))
        object.__setattr__(self, "alpha", tuple(float(a) for a in self.alpha))
        if len(self.gens) != len(self.alpha):
            raise InvalidRep(f"{len(self.gens)} generators but {len(self.alpha)} angles")

    @property
    def n(self) -> int:
        return len(self.gens)

    def b_elements(self) -> list[Isometry]:
        """``b_i = (c_1 ... c_{i+1})^-1`` for ``i = 1..n-3``."""
        out, acc = [], self.gens[0]
        for g in self.gens[1:self.n - 2]:
            acc = acc @ g
            out.append(acc.inverse())
        return out

    def relation_residual(self) -> float:
        return product(self.gens).distance_to(Isometry.identity())

    def conj(self, g: Isometry) -> DTRep:
        return DTRep(tuple(x.conj(g) for x in self.gens), self.alpha)


def from_generators(gens) -> DTRep:
    """Wrap generators, reading each rotation angle off the matrix."""
    gens = tuple(gens)
    return DTRep(gens, tuple(elliptic_data(g)[1] for g in gens))


def validate_rep(rep: DTRep, tol: float = REP_TOL) -> list[str]:
    """Problems with ``rep`` as a large-angle DT representation; empty when valid."""
    n = rep.n
    out = []
    if n < 3:
        out.append(f"need at least 3 generators, got {n}")
        return out
    centers = []
    for i, (g, a) in enumerate(zip(rep.gens, rep.alpha)):
        try:
            c, ang = elliptic_data(g)
        except NotElliptic as exc:
            out.append(f"generator {i + 1}: {exc}")
            continue
        centers.append(c)
        gap = abs((ang - a + math.pi) % TWO_PI - math.pi)
        if gap > tol:
            out.append(f"generator {i + 1}: rotation angle {ang:.12g} differs from alpha {a:.12g}")
    res = rep.relation_residual()
    if res > tol:
        out.append(f"product of generators is {res:.3g} from the identity")
    excess = sum(rep.alpha) - TWO_PI * (n - 1)
    if excess <= 0:
        out.append(f"sum of alpha falls short of 2pi(n-1) by {-excess:.6g}")
    if len(centers) == n and all(dist(c, centers[0]) < COLOR_TOL for c in centers):
        out.append("all generators share a fixed point")
    return out


def hurwitz(rep: DTRep, i: int, inverse: bool = False) -> DTRep:
    """Braid move on generators ``i, i+1`` (zero-based); keeps the relation."""
    g = list(rep.gens)
    a = list(rep.alpha)
    x, y = g[i], g[i + 1]
    if inverse:
        g[i], g[i + 1] = y, x.conj(y.inverse())
    else:
        g[i], g[i + 1] = y.conj(x), x
    a[i], a[i + 1] = a[i + 1], a[i]
    return DTRep(tuple(g), tuple(a))


# -- runs of consecutive punctures -----------------------------------------

def run(start: int, length: int, n: int) -> tuple[int, ...]:
    return tuple((start + k) % n for k in range(length))


def set_element(rep: DTRep, I) -> Isometry:
    """``rho(c_I)`` for a run ``I`` listed counterclockwise."""
    return product(rep.gens[i] for i in I)


def set_rotation(rep: DTRep, I) -> tuple[HPoint, float]:
    """Fixed point and rotation angle of ``rho(c_I)``."""
    I = tuple(I)
    n = rep.n
    if not 0 < len(I) < n:
        raise ValueError(f"run {I} must be nonempty and proper")
    if any((I[k] + 1) % n != I[k + 1] for k in range(len(I) - 1)):
        raise ValueError(f"{I} is not a counterclockwise run of punctures")
    return elliptic_data(set_element(rep, I))


class Coloring:
    """Colors of runs: the fixed point of ``rho(c_I)``, cached by run."""

    def __init__(self, rep: DTRep, tol: float = COLOR_TOL):
        self.rep = rep
        self.tol = tol
        self._cache: dict[tuple[int, int], HPoint] = {}

    def color(self, start: int, length: int) -> HPoint:
        key = (start % self.rep.n, length)
        if key not in self._cache:
            self._cache[key] = set_rotation(self.rep, run(start, length, self.rep.n))[0]
        return self._cache[key]

    def same(self, a: tuple[int, int], b: tuple[int, int]) -> bool:
        return dist(self.color(*a), self.color(*b)) < self.tol


# -- the game ------------------------------------------------------------------

@dataclass(frozen=True)
class Move:
    removed: tuple[int, ...]
    side: str  # "first", "ccw" or "cw"
    gap: tuple[int, int]  # (start, length) of the missing run after the move


@dataclass
class GameState:
    n: int
    log: list[Move] = field(default_factory=list)
    revisions: int = 0

    @property
    def gap(self) -> tuple[int, int]:
        return self.log[-1].gap

    @property
    def removed(self) -> frozenset[int]:
        return frozenset(run(*self.gap, self.n)) if self.log else frozenset()

    @property
    def remaining(self) -> tuple[int, ...]:
        """Punctures still on the table, counterclockwise from just after the gap."""
        if not self.log:
            return tuple(range(self.n))
        start, length = self.gap
        return run(start + length, self.n - length, self.n)

    @property
    def finished(self) -> bool:
        return bool(self.log) and self.gap[1] == self.n - 2

    def order(self) -> list[int]:
        """Removed punctures in removal order, then the two left over."""
        out = list(self.log[0].removed)
        for mv in self.log[1:]:
            out += mv.removed
        return out + list(self.remaining)


def _options(state: GameState) -> list[Move]:
    n = state.n
    start, length = state.gap
    ccw = (start + length) % n
    cw = (start - 1) % n
    return [Move((ccw,), "ccw", (start, length + 1)), Move((cw,), "cw", (cw, length + 1))]


def _hopeless(state: GameState, col: Coloring) -> bool:
    if state.finished:
        start, length = state.gap
        return col.same(state.gap, ((start + length) % state.n, 1))
    return all(col.same(state.gap, (mv.removed[0], 1)) for mv in _options(state))


def _revise(state: GameState, col: Coloring) -> None:
    """Take the other neighbour of the gap on the previous move."""
    n = state.n
    last = state.log[-1]
    start, length = last.gap
    if last.side == "first":
        # I = {start}, z = start + 1; y sits clockwise of I
        y = (start - 1) % n
        new = Move((y, start), "first", (y, 2))
        z = (start + 1) % n
    elif last.side == "ccw":
        y = (start - 1) % n
        new = Move((y,), "cw", (y, length))
        z = last.removed[0]
    else:
        y = (start + length) % n
        new = Move((y,), "ccw", (start + 1, length))
        z = last.removed[0]
    if col.same(new.gap, (z, 1)):
        raise ImpossiblePosition(f"revising move {len(state.log)} did not separate colors")
    state.log[-1] = new
    state.revisions += 1


def play_game(rep: DTRep, tol: float = COLOR_TOL) -> GameState:
    """Removal order whose chained pants decomposition has no degenerate triangle.

    Moves greedily (counterclockwise neighbour first).  When a position is
    hopeless the previous move is redone with the other neighbour of the gap,
    which always rescues the position for a DT representation.
    """
    n = rep.n
    if n < 4:
        raise ValueError("the game needs at least 4 punctures")
    col = Coloring(rep, tol)
    state = GameState(n)
    for i in range(n):
        if not col.same((i, 1), ((i + 1) % n, 1)):
            state.log.append(Move((i, (i + 1) % n), "first", (i, 2)))
            break
    else:
        raise ImpossiblePosition("every pair of neighbours shares a color")
    just_revised = False
    while True:
        if not _hopeless(state, col):
            if state.finished:
                return state
            for mv in _options(state):
                if not col.same(state.gap, (mv.removed[0], 1)):
                    state.log.append(mv)
                    break
            just_revised = False
            continue
        if just_revised:
            raise ImpossiblePosition("hopeless right after a revision")
        _revise(state, col)
        just_revised = True


def game_plays(n: int):
    """Every complete play, as gap sequences; for exhaustive checks."""
    def extend(log):
        start, length = log[-1].gap
        if length == n - 2:
            yield list(log)
            return
        st = GameState(n, list(log))
        for mv in _options(st):
            yield from extend(log + [mv])

    for i in range(n):
        yield from extend([Move((i, (i + 1) % n), "first", (i, 2))])


# -- standard presentations -----------------------------------------------------

def standardize(rep: DTRep, state: GameState) -> DTRep:
    """Generators for which the game's pants decomposition is the standard one."""
    if not state.finished:
        raise ValueError("the game has not finished")
    g = rep.gens
    first = state.log[0].removed
    gens = [g[first[0]], g[first[1]]]
    alpha = [rep.alpha[first[0]], rep.alpha[first[1]]]
    b = (gens[0] @ gens[1]).inverse()
    for mv in state.log[1:]:
        z = mv.removed[0]
        c = g[z] if mv.side == "ccw" else g[z].conj(b)
        gens.append(c)
        alpha.append(rep.alpha[z])
        b = c.inverse() @ b
    x, y = state.remaining
    gens += [g[x], g[y]]
    alpha += [rep.alpha[x], rep.alpha[y]]
    return DTRep(tuple(gens), tuple(alpha))


def chain_areas(rep: DTRep) -> list[float]:
    """Signed areas of the standard chain's triangles (positive = clockwise)."""
    chain = chain_from_rep(rep)
    out = []
    for k in range(rep.n - 2):
        p, q, r = chain.triangle_vertices(k)
        o = orientation(p, q, r)
        out.append(-o * triangle_from_points(p, q, r).area if o else 0.0)
    return out


def action_angle(rep: DTRep) -> ActionAngle:
    """Action-angle coordinates of the standard chain; needs a non-degenerate chain."""
    areas = chain_areas(rep)
    for k, a in enumerate(areas):
        if a < AREA_TOL:
            raise DegenerateTriangle(k, f"signed area {a:.3g} in the standard chain")
    return read_coords(chain_from_rep(rep), rep.alpha)


def twist(rep: DTRep, i: int, power: int) -> DTRep:
    """Apply the Dehn twist automorphism along ``b_i`` (one-based) ``power`` times."""
    center, angle = elliptic_data(rep.b_elements()[i - 1])
    # an exact rotation keeps the twisted generators as well conditioned as b
    b = elliptic(center, power * angle)
    gens = tuple(g if j <= i else g.conj(b) for j, g in enumerate(rep.gens))
    return DTRep(gens, rep.alpha)


def untwist(rep: DTRep) -> DTRep:
    """Twist along each pants curve until every angle coordinate is in [0, pi)."""
    for i in range(1, rep.n - 2):
        coords = action_angle(rep)
        beta, gamma = coords.beta[i - 1], coords.gamma[i - 1]
        if gamma < math.pi:
            continue
        if beta <= math.pi:
            m = math.floor((gamma - math.pi) / beta) + 1
            rep = twist(rep, i, m)
        else:
            m = math.floor((gamma - math.pi) / (TWO_PI - beta)) + 1
            rep = twist(rep, i, -m)
    return rep


def prepare(rep: DTRep) -> DTRep:
    """Non-degenerate, overlap-free standard presentation of ``rep``."""
    return untwist(standardize(rep, play_game(rep)))


# -- hamantash synthesis and holonomy ----------------------------------------

def slit_angles(beta: float, gamma: float) -> tuple[float, float]:
    """Canonical ``(phi, phi_prime)`` with ``phi_prime + beta/2 - phi = gamma``."""
    margin = min(SYNTH_MARGIN, 0.5 * (math.pi - gamma))
    phi_prime = min(gamma, 0.5 * (TWO_PI - beta) - margin)
    phi = 0.5 * beta - (gamma - phi_prime)
    return phi, phi_prime


def synth_from_coords(coords: ActionAngle) -> SamosaAssembly:
    m = coords.n - 3
    phi, phi_prime = zip(*(slit_angles(b, g) for b, g in zip(coords.beta, coords.gamma)))
    skeleton = SamosaAssembly.north(coords.alpha, coords.beta, [1.0] * m, phi, phi_prime)
    bound = [math.inf] * m
    for s in range(coords.n - 2):
        for curve, b in slit_bounds(samosa_view(skeleton, s)).items():
            bound[curve] = min(bound[curve], b)
    return skeleton.replace(ell=[0.5 * b for b in bound])


def synth(rep: DTRep) -> SamosaAssembly:
    """A north hamantash assembly whose holonomy is conjugate to ``rep``.

    The holonomy is expressed in the presentation returned by :func:`prepare`.
    """
    problems = validate_rep(rep)
    if problems:
        raise InvalidRep("; ".join(problems))
    return synth_from_coords(action_angle(prepare(rep)))


def holonomy_chain(a: SamosaAssembly) -> TriangleChain:
    """Triangle chain left over after erasing the flaps of the unfolded net."""
    from .net import placed_chain

    return placed_chain(a)


def holonomy(a: SamosaAssembly) -> DTRep:
    chain = holonomy_chain(a)
    gens = tuple(elliptic(c, al) for c, al in zip(chain.C, a.alpha))
    return DTRep(gens, a.alpha)
