"""Chained samosa assemblies.

Samosa ``s`` (zero-based, ``0 <= s <= n-3``) sits over chain triangle ``s``
and its corners are listed in the same cyclic order as that triangle's
vertices::

    s = 0          (2pi - alpha_1, 2pi - alpha_2, beta'_1)
    0 < s < n-3    (beta_s,        2pi - alpha_{s+2}, beta'_{s+1})
    s = n-3        (beta_{n-3},    2pi - alpha_{n-1}, 2pi - alpha_n)

with ``beta' = 2pi - beta``.  Curve ``k`` therefore has its ``beta'`` corner
(slit angle ``phi_prime``) on samosa ``k`` and its ``beta`` corner (slit
angle ``phi``) on samosa ``k + 1``.

A slit angle is measured at its corner from the equator segment running to
the previous corner in cyclic order ("reference corner"): ``phi`` from the
segment toward corner 3, ``phi_prime`` from the segment toward corner 2.
Northern slits have non-negative angles, southern slits non-positive ones.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .hyp_core import TWO_PI
from .hyp_trig import DegenerateSlitDirection, loa_side, slit_max_one, slit_max_two

NORTH, SOUTH = "north", "south"
MARGIN = 1e-9


@dataclass(frozen=True)
class Slit:
    corner: int
    ref: int
    other: int
    ell: float
    phi: float
    hem: str
    curve: int
    kind: str  # "phi" or "phi_prime"


@dataclass(frozen=True)
class SamosaView:
    """One samosa's corner data, equator lengths and slits."""

    index: int
    theta: tuple[float, float, float]
    d: tuple[float, float, float]
    slits: tuple[Slit, ...]
    punctures: tuple[int, ...]

    def segment(self, i: int, j: int) -> float:
        return self.d[3 - i - j]

    @property
    def unslit(self) -> tuple[int, ...]:
        taken = {sl.corner for sl in self.slits}
        return tuple(i for i in range(3) if i not in taken)


@dataclass(frozen=True)
class SamosaAssembly:
    alpha: tuple[float, ...]
    beta: tuple[float, ...]
    ell: tuple[float, ...]
    phi: tuple[float, ...]
    phi_prime: tuple[float, ...]
    hem_phi: tuple[str, ...]
    hem_phi_prime: tuple[str, ...]

    def __post_init__(self):
        for name in ("alpha", "beta", "ell", "phi", "phi_prime"):
            object.__setattr__(self, name, tuple(float(v) for v in getattr(self, name)))
        for name in ("hem_phi", "hem_phi_prime"):
            object.__setattr__(self, name, tuple(getattr(self, name)))
        n = len(self.alpha)
        if n < 4:
            raise ValueError(f"an assembly needs n >= 4 punctures, got {n}")
        for name in ("beta", "ell", "phi", "phi_prime", "hem_phi", "hem_phi_prime"):
            if len(getattr(self, name)) != n - 3:
                raise ValueError(f"{name} must have n - 3 = {n - 3} entries")
        for h in self.hem_phi + self.hem_phi_prime:
            if h not in (NORTH, SOUTH):
                raise ValueError(f"hemisphere flag {h!r} is not 'north' or 'south'")

    @classmethod
    def north(cls, alpha, beta, ell, phi, phi_prime) -> SamosaAssembly:
        m = len(beta)
        return cls(alpha, beta, ell, phi, phi_prime, (NORTH,) * m, (NORTH,) * m)

    @property
    def n(self) -> int:
        return len(self.alpha)

    @property
    def eps(self) -> tuple[str, ...]:
        """Hemisphere flags in the order phi_1, phi'_1, phi_2, phi'_2, ..."""
        out = []
        for h, hp in zip(self.hem_phi, self.hem_phi_prime):
            out += [h, hp]
        return tuple(out)

    def replace(self, **kw) -> SamosaAssembly:
        fields = dict(alpha=self.alpha, beta=self.beta, ell=self.ell, phi=self.phi,
                      phi_prime=self.phi_prime, hem_phi=self.hem_phi,
                      hem_phi_prime=self.hem_phi_prime)
        fields.update(kw)
        return SamosaAssembly(**fields)


def corner_angles(a: SamosaAssembly, k: int) -> tuple[float, float, float]:
    n = a.n
    if not 0 <= k <= n - 3:
        raise IndexError(f"samosa index {k} outside 0..{n - 3}")
    al, be = a.alpha, a.beta
    if k == 0:
        return TWO_PI - al[0], TWO_PI - al[1], TWO_PI - be[0]
    if k == n - 3:
        return be[n - 4], TWO_PI - al[n - 2], TWO_PI - al[n - 1]
    return be[k - 1], TWO_PI - al[k + 1], TWO_PI - be[k]


def equator_lengths(a: SamosaAssembly, k: int) -> tuple[float, float, float]:
    """Equator segments of samosa ``k``; entry ``i`` is opposite corner ``i``."""
    return _equator(corner_angles(a, k))


def _equator(theta) -> tuple[float, float, float]:
    h = [0.5 * t for t in theta]
    return tuple(loa_side(h[(i + 1) % 3], h[(i + 2) % 3], h[i]) for i in range(3))


def samosa_view(a: SamosaAssembly, k: int) -> SamosaView:
    n = a.n
    theta = corner_angles(a, k)
    d = _equator(theta)
    slits = []
    if k > 0:
        c = k - 1
        slits.append(Slit(0, 2, 1, a.ell[c], a.phi[c], a.hem_phi[c], c, "phi"))
    if k < n - 3:
        slits.append(Slit(2, 1, 0, a.ell[k], a.phi_prime[k], a.hem_phi_prime[k], k, "phi_prime"))
    if k == 0:
        punct = (0, 1)
    elif k == n - 3:
        punct = (n - 2, n - 1)
    else:
        punct = (k + 1,)
    return SamosaView(k, theta, d, tuple(slits), punct)


# -- validation --------------------------------------------------------------

@dataclass(frozen=True)
class Violation:
    condition: str
    index: int
    margin: float
    message: str


@dataclass
class ValidationReport:
    violations: list[Violation] = field(default_factory=list)
    defect_excess: float = 0.0

    @property
    def ok(self) -> bool:
        return not self.violations

    def add(self, condition, index, margin, message):
        self.violations.append(Violation(condition, index, margin, message))

    def lines(self) -> list[str]:
        out = [f"defect sum excess over 2pi(n-1): {self.defect_excess:.6g}"]
        out += [f"{v.condition}[{v.index}]: {v.message} (margin {v.margin:.3g})"
                for v in self.violations]
        return out


def slit_bounds(view: SamosaView) -> dict[int, float]:
    """Applicable length bound for each slit of the samosa, keyed by curve.

    Two slits sharing a hemisphere get the two-slit bounds unless a direction
    is degenerate; otherwise each slit only has to stay in its hemisphere.
    """
    bounds = {}
    if len(view.slits) == 2:
        sa, sb = view.slits
        same = sa.hem == sb.hem
        if same:
            try:
                la, lb = slit_max_two(view.segment(0, 2), sa.phi, sb.phi, view.theta[2])
                return {sa.curve: la, sb.curve: lb}
            except DegenerateSlitDirection:
                pass
    for sl in view.slits:
        bounds[sl.curve] = slit_max_one(view.segment(sl.corner, sl.ref), sl.phi, view.theta[sl.ref])
    return bounds


def validate(a: SamosaAssembly) -> ValidationReport:
    rep = ValidationReport()
    n = a.n
    rep.defect_excess = sum(a.alpha) - TWO_PI * (n - 1)
    for i, x in enumerate(a.alpha):
        if not 0 < x < TWO_PI:
            rep.add("defect-range", i, min(x, TWO_PI - x), f"alpha = {x:.12g} not in (0, 2pi)")
    for k in range(n - 3):
        if not 0 < a.beta[k] < TWO_PI:
            rep.add("action-range", k, 0.0, f"beta = {a.beta[k]:.12g} not in (0, 2pi)")
        if not a.ell[k] > 0:
            rep.add("slit-length", k, a.ell[k], "slit length must be positive")
        for kind, ph, hem in (("phi", a.phi[k], a.hem_phi[k]),
                              ("phi_prime", a.phi_prime[k], a.hem_phi_prime[k])):
            if (hem == "north" and ph < 0) or (hem == "south" and ph > 0):
                rep.add("slit-sign", k, abs(ph), f"{kind} = {ph:.12g} disagrees with hemisphere {hem}")
    if rep.defect_excess <= 0:
        rep.add("defect-sum", -1, rep.defect_excess, "sum of defects is not above 2pi(n-1)")
    if not rep.ok:
        return rep
    for s in range(n - 2):
        theta = corner_angles(a, s)
        slack = TWO_PI - sum(theta)
        if slack <= MARGIN or min(theta) <= 0:
            rep.add("cone-angle", s, slack, f"corner angles {theta} do not sum below 2pi")
    if not rep.ok:
        return rep
    for s in range(n - 2):
        view = samosa_view(a, s)
        for sl in view.slits:
            half = 0.5 * view.theta[sl.corner]
            if abs(sl.phi) > half + 1e-12:
                rep.add("slit-angle", sl.curve, half - abs(sl.phi),
                        f"{sl.kind} = {sl.phi:.12g} exceeds half the corner angle {half:.12g}")
        if any(v.condition == "slit-angle" for v in rep.violations):
            continue
        for curve, bound in slit_bounds(view).items():
            ell = a.ell[curve]
            if ell >= bound - MARGIN:
                rep.add("slit-length", curve, bound - ell,
                        f"slit of length {ell:.12g} reaches the bound {bound:.12g} in samosa {s}")
        if len(view.slits) == 2:
            sa, sb = view.slits
            on_ab = abs(sa.phi) < MARGIN and abs(abs(sb.phi) - 0.5 * view.theta[2]) < MARGIN
            if on_ab and a.ell[sa.curve] + a.ell[sb.curve] >= view.segment(0, 2) - MARGIN:
                rep.add("slit-collision", s, view.segment(0, 2) - a.ell[sa.curve] - a.ell[sb.curve],
                        "slits along the same equator segment meet")
    return rep


# -- classification -----------------------------------------------------------

@dataclass(frozen=True)
class Classification:
    is_hamantash: bool
    is_north: bool
    is_generic: bool


def hamantash_bounds(view: SamosaView) -> dict[int, float] | None:
    """Length bounds that make the samosa unfoldable, or None if no length works."""
    if len(view.slits) == 2:
        sa, sb = view.slits
        if sa.hem != sb.hem:
            return None
        try:
            la, lb = slit_max_two(view.segment(0, 2), sa.phi, sb.phi, view.theta[2])
        except DegenerateSlitDirection:
            return None
        return {sa.curve: la, sb.curve: lb}
    sl = view.slits[0]
    return {sl.curve: slit_max_one(view.segment(sl.corner, sl.ref), sl.phi, view.theta[sl.ref])}


def is_generic_view(view: SamosaView) -> bool:
    unslit = view.unslit
    for sl in view.slits:
        half = 0.5 * view.theta[sl.corner]
        # lying along the segment toward the reference corner or the other corner
        if abs(sl.phi) < MARGIN and (3 - sl.corner - sl.ref) in unslit:
            return False
        if abs(abs(sl.phi) - half) < MARGIN and (3 - sl.corner - sl.other) in unslit:
            return False
    return True


def classify(a: SamosaAssembly) -> Classification:
    ham = True
    generic = True
    for s in range(a.n - 2):
        view = samosa_view(a, s)
        bounds = hamantash_bounds(view)
        if bounds is None or any(a.ell[c] >= b - MARGIN for c, b in bounds.items()):
            ham = False
        generic = generic and is_generic_view(view)
    north = all(h == NORTH for h in a.eps)
    return Classification(ham, north, generic)
