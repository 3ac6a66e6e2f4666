"""Triangle chains and their action-angle coordinates.

A chain for ``n`` punctures has vertices ``C[0..n-1]`` (fixed points of the
puncture rotations) and ``B[0..n-4]`` (fixed points of the pants curves),
arranged in ``n - 2`` clockwise triangles::

    (C1, C2, B1), (B1, C3, B2), ..., (B_{n-4}, C_{n-2}, B_{n-3}), (B_{n-3}, C_{n-1}, C_n)

The angle at ``C_p`` is ``pi - alpha_p / 2``.  At ``B_i`` the earlier
triangle has angle ``pi - beta_i / 2`` and the later one ``beta_i / 2``.
``gamma_i`` is the clockwise angle at ``B_i`` from ``C_{i+1}`` to ``C_{i+2}``.
Indices in code are zero-based; the docstrings use the one-based labels.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .hyp_core import (TWO_PI, AngleSum, GeometryError, HPoint, HTriangle, I_POINT,
                       ccw_angle, direction, elliptic, orientation,
                       triangle_from_angles, vertex_angle)

AREA_MARGIN = 1e-9


class DegenerateTriangle(GeometryError):
    def __init__(self, index: int, detail: str):
        super().__init__(f"triangle {index}: {detail}")
        self.index = index


@dataclass(frozen=True)
class ActionAngle:
    alpha: tuple[float, ...]
    beta: tuple[float, ...]
    gamma: tuple[float, ...]

    def __post_init__(self):
        object.__setattr__(self, "alpha", tuple(float(v) for v in self.alpha))
        object.__setattr__(self, "beta", tuple(float(v) for v in self.beta))
        object.__setattr__(self, "gamma", tuple(float(v) for v in self.gamma))
        n = len(self.alpha)
        if n < 3 or len(self.beta) != n - 3 or len(self.gamma) != n - 3:
            raise ValueError(f"need n >= 3 defects and n - 3 actions and angles, got "
                             f"{n}, {len(self.beta)}, {len(self.gamma)}")
        if not all(0 < a < TWO_PI for a in self.alpha):
            raise ValueError("defects must lie in (0, 2pi)")
        if sum(self.alpha) <= TWO_PI * (n - 1):
            raise ValueError("defects do not satisfy the large-angle condition sum > 2pi(n-1)")
        if not all(0 < b < TWO_PI for b in self.beta):
            raise ValueError("actions must lie in (0, 2pi)")

    @property
    def n(self) -> int:
        return len(self.alpha)

    def triangle_angles(self) -> list[tuple[float, float, float]]:
        return chain_triangle_angles(self.alpha, self.beta)


def chain_triangle_angles(alpha, beta) -> list[tuple[float, float, float]]:
    """Interior angles of each chain triangle, in its vertex order."""
    n = len(alpha)
    corner = [math.pi - 0.5 * a for a in alpha]
    if n == 3:
        return [tuple(corner)]
    out = [(corner[0], corner[1], math.pi - 0.5 * beta[0])]
    for i in range(1, n - 3):
        out.append((0.5 * beta[i - 1], corner[i + 1], math.pi - 0.5 * beta[i]))
    out.append((0.5 * beta[-1], corner[n - 2], corner[n - 1]))
    return out


def in_action_polytope(alpha, beta, margin: float = 0.0) -> bool:
    """Whether every chain triangle has angle sum below ``pi - margin``."""
    return all(sum(t) < math.pi - margin and min(t) > 0
               for t in chain_triangle_angles(alpha, beta))


@dataclass(frozen=True)
class TriangleChain:
    C: tuple[HPoint, ...]
    B: tuple[HPoint, ...]
    triangles: tuple[HTriangle, ...]

    @property
    def n(self) -> int:
        return len(self.C)

    def triangle_vertices(self, k: int) -> tuple[HPoint, HPoint, HPoint]:
        n = self.n
        if n == 3:
            return self.C
        if k == 0:
            return self.C[0], self.C[1], self.B[0]
        if k == n - 3:
            return self.B[-1], self.C[n - 2], self.C[n - 1]
        return self.B[k - 1], self.C[k + 1], self.B[k]

    def area(self) -> float:
        return sum(t.area for t in self.triangles)


def build_chain(coords: ActionAngle, anchor: HPoint = I_POINT, heading: float = 0.0) -> TriangleChain:
    """Lay out the chain with ``C1`` at ``anchor`` and ``C1 -> C2`` along ``heading``."""
    angles = coords.triangle_angles()
    for k, t in enumerate(angles):
        if min(t) <= 0 or math.pi - sum(t) < AREA_MARGIN:
            raise DegenerateTriangle(k, f"angles {t} leave area {math.pi - sum(t):.3g}")
    try:
        first = triangle_from_angles(*angles[0], anchor=anchor, heading=heading, orient="cw")
    except AngleSum as exc:
        raise DegenerateTriangle(0, str(exc)) from exc
    tris = [first]
    C = list(first.vertices[:2])
    B: list[HPoint] = []
    if coords.n == 3:
        C.append(first.vertices[2])
        return TriangleChain(tuple(C), (), (first,))
    B.append(first.vertices[2])
    for i, gamma in enumerate(coords.gamma):
        b = B[i]
        h = direction(b, C[i + 1]) - gamma
        t = triangle_from_angles(*angles[i + 1], anchor=b, heading=h, orient="cw")
        tris.append(t)
        C.append(t.vertices[1])
        if i + 1 < coords.n - 3:
            B.append(t.vertices[2])
        else:
            C.append(t.vertices[2])
    return TriangleChain(tuple(C), tuple(B), tuple(tris))


def read_coords(chain: TriangleChain, alpha) -> ActionAngle:
    """Measure ``(beta, gamma)`` on a placed chain."""
    n = chain.n
    for k in range(n - 2):
        p, q, r = chain.triangle_vertices(k)
        if orientation(p, q, r) >= 0:
            raise DegenerateTriangle(k, "vertices are not in clockwise order")
    beta, gamma = [], []
    for i in range(n - 3):
        b = chain.B[i]
        nxt = chain.C[n - 1] if i == n - 4 else chain.B[i + 1]
        beta.append(2.0 * vertex_angle(b, chain.C[i + 2], nxt))
        gamma.append(ccw_angle(b, chain.C[i + 2], chain.C[i + 1]))
    return ActionAngle(tuple(alpha), tuple(beta), tuple(gamma))


def chain_rep(chain: TriangleChain, alpha):
    """Rotations by ``alpha_i`` about the chain's ``C_i``."""
    from .dtrep import DTRep

    gens = tuple(elliptic(c, a) for c, a in zip(chain.C, alpha))
    return DTRep(gens, tuple(float(a) for a in alpha))


def chain_from_rep(rep) -> TriangleChain:
    """The chain of fixed points of a rep's generators and of its ``b_i``."""
    from .hyp_core import elliptic_data, triangle_from_points

    C = tuple(elliptic_data(g)[0] for g in rep.gens)
    B = tuple(elliptic_data(b)[0] for b in rep.b_elements())
    n = len(C)
    probe = TriangleChain(C, B, ())
    tris = tuple(triangle_from_points(*probe.triangle_vertices(k)) for k in range(n - 2))
    return TriangleChain(C, B, tris)


def chain_distance_profile(chain: TriangleChain) -> np.ndarray:
    """Pairwise distances of all chain vertices; equal profiles mean congruent chains."""
    from .hyp_core import dist

    pts = list(chain.C) + list(chain.B)
    m = len(pts)
    out = np.zeros((m, m))
    for i in range(m):
        for j in range(i + 1, m):
            out[i, j] = out[j, i] = dist(pts[i], pts[j])
    return out
