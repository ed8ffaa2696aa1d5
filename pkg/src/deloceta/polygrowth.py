"""Lexicographic retraction onto centralizers and growth-bound machinery.

``lex_min_f`` sends g to the shortlex-least element of Z_gamma among
those at minimal word distance from g (any admissible candidate z has
||z|| <= 2||g|| by the triangle inequality, so the ball search is
complete once the centralizer is enumerated to twice the radius). The
coset version picks, over the coset members inside the ball, the f-value
minimizing d(x, f(x)); the simplex map applies f vertex-wise. Growth
bounds |phi| <= R prod (1+||g_i||)^{2k} are certified on sampled tuples
with k from {0..8} and R on the rational grid {p/64}.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from .cochains import Cochain
from .groups import ConjugacyClassHandle, Element, Group, RadiusExceededError
GROWTH_K_GRID = range(0, 9)
GROWTH_R_DENOM = 64
GROWTH_R_MAX = Fraction(2)


def lex_min_f(
    g: Element, cls: ConjugacyClassHandle, radius: int
) -> Element:
    """The shortlex-least distance minimizer to g inside Z_gamma."""
    grp = cls.group
    lg = grp.word_length(g, max_radius=radius)
    if cls.radius < 2 * lg:
        raise RadiusExceededError(cls.radius, "lex_min_f centralizer enumeration")
    if cls.in_centralizer(g):
        return g  # distance-0 candidate is g itself
    best_d: Optional[int] = None
    best: List[Element] = []
    for z in cls.centralizer:
        if grp.word_length(z, max_radius=cls.radius) > 2 * lg:
            continue
        d = grp.distance(z, g, max_radius=4 * max(radius, 1))
        if d > lg:
            continue
        if best_d is None or d < best_d:
            best_d, best = d, [z]
        elif d == best_d:
            best.append(z)
    if not best:
        raise RadiusExceededError(radius, "lex_min_f found no admissible candidate")
    return min(best, key=lambda z: grp.shortlex_key(z, max_radius=2 * radius))


def coset_members(
    h: Element, cls: ConjugacyClassHandle, radius: int
) -> List[Element]:
    """h Z_gamma intersected with the radius ball (representative-free)."""
    grp = cls.group
    gamma = cls.gamma
    out = []
    for x in grp.ball(radius):
        w = grp.multiply(grp.inverse(h), x)
        if grp.multiply(w, gamma) == grp.multiply(gamma, w):
            out.append(x)
    return out


def coset_min_f(h: Element, cls: ConjugacyClassHandle, radius: int) -> Element:
    """f-tilde on the coset h Z_gamma: the f-value present in the
    minimization of d(x, f(x)) over coset members in the ball."""
    grp = cls.group
    candidates = coset_members(h, cls, radius)
    if not candidates:
        raise RadiusExceededError(radius, "coset enumeration")
    scored = []
    for x in candidates:
        fx = lex_min_f(x, cls, radius)
        scored.append((grp.distance(x, fx, max_radius=2 * radius), grp.shortlex_key(fx), grp.shortlex_key(x), fx))
    scored.sort(key=lambda item: item[:3])
    return scored[0][3]


@dataclass
class SimplexPoint:
    """A point of a finite-level simplex: barycentric weights over group
    vertices, plus the coset representative of the second factor."""

    weights: List[Fraction]
    vertices: List[Element]
    coset_rep: Element

    def __post_init__(self):
        if len(self.weights) != len(self.vertices):
            raise ValueError("weights and vertices must align")
        if any(w < 0 for w in self.weights):
            raise ValueError("barycentric weights must be nonnegative")
        if sum(self.weights, Fraction(0)) != 1:
            raise ValueError("barycentric weights must sum to one")

    def translated(self, group: Group, z: Element) -> "SimplexPoint":
        return SimplexPoint(
            list(self.weights),
            [group.multiply(z, v) for v in self.vertices],
            self.coset_rep,
        )


def simplex_map_psi(
    point: SimplexPoint, cls: ConjugacyClassHandle, radius: int
) -> SimplexPoint:
    """Vertex-wise f, with the coset slot replaced by f-tilde."""
    return SimplexPoint(
        list(point.weights),
        [lex_min_f(v, cls, radius) for v in point.vertices],
        coset_min_f(point.coset_rep, cls, radius),
    )


# ---------------------------------------------------------------------------
# growth bounds
# ---------------------------------------------------------------------------


@dataclass
class GrowthBound:
    """Certificate |phi(g_0..g_n)| <= R * prod (1+||g_i||)^{2k} on every
    tuple whose entries stay within max_radius_checked."""

    r_value: Fraction
    k: int
    max_radius_checked: int
    grid_exceeded: bool = False

    def check(self, phi: Cochain, tuples: Sequence[Tuple]) -> bool:
        grp = phi.group
        r2 = self.r_value * self.r_value
        for t in tuples:
            w = Fraction(1)
            for g in t:
                w *= (1 + grp.word_length(g, max_radius=self.max_radius_checked)) ** (
                    2 * self.k
                )
            if phi(t).abs2() > r2 * w * w:
                return False
        return True


def _sample_tuples(phi: Cochain, radius: int, cap: int = 20_000) -> List[Tuple]:
    grp = phi.group
    ball = grp.ball(radius)
    arity = phi.arity
    if len(ball) ** arity <= cap:
        return list(itertools.product(ball, repeat=arity))
    tuples: List[Tuple] = []
    if phi.entries is not None:
        tuples.extend(phi.entries.keys())
    # deterministic skeleton: diagonal tuples and sphere-spread pairs
    for g in ball:
        tuples.append((g,) * arity)
    step = max(1, (len(ball) ** arity) // cap)
    flat = list(itertools.islice(itertools.product(ball, repeat=arity), 0, cap * step, step))
    tuples.extend(flat)
    return tuples


def growth_bound_estimate(phi: Cochain, radius: int) -> GrowthBound:
    """Smallest k on the grid whose rational R-certificate stays on the
    grid; falls back to k = 8 with the exact max ratio when none does."""
    grp = phi.group
    tuples = _sample_tuples(phi, radius)
    weights: Dict[Tuple, Fraction] = {}
    sq_values = []
    for t in tuples:
        v2 = phi(t).abs2()
        lens = tuple(1 + grp.word_length(g, max_radius=radius) for g in t)
        sq_values.append((v2, lens))
    for k in GROWTH_K_GRID:
        # max over tuples of |phi| / prod (1+len)^{2k}, as an exact squared ratio
        max_ratio2 = Fraction(0)
        for v2, lens in sq_values:
            if v2 == 0:
                continue
            w = Fraction(1)
            for L in lens:
                w *= Fraction(L) ** (2 * k)
            max_ratio2 = max(max_ratio2, v2 / (w * w))
        r = _grid_ceil_sqrt(max_ratio2)
        if r <= GROWTH_R_MAX:
            return GrowthBound(r_value=r, k=k, max_radius_checked=radius)
    return GrowthBound(
        r_value=_grid_ceil_sqrt(max_ratio2, clamp=False),
        k=max(GROWTH_K_GRID),
        max_radius_checked=radius,
        grid_exceeded=True,
    )


def _grid_ceil_sqrt(ratio2: Fraction, clamp: bool = True) -> Fraction:
    """Least p/64 with (p/64)^2 >= ratio2 (p >= 1)."""
    p = 1
    while Fraction(p, GROWTH_R_DENOM) ** 2 < ratio2:
        p += 1
        if clamp and Fraction(p, GROWTH_R_DENOM) > GROWTH_R_MAX:
            break
    return Fraction(p, GROWTH_R_DENOM)


# ---------------------------------------------------------------------------
# Lipschitz verification
# ---------------------------------------------------------------------------


@dataclass
class LipschitzReport:
    max_ratio: Fraction
    witness_pair: Optional[Tuple[Element, Element]]
    radius: int
    passed: bool

    def as_dict(self, group: Group) -> dict:
        return {
            "check": "lipschitz",
            "radius": self.radius,
            "bound": str(self.max_ratio),
            "passed": self.passed,
            "witness_pair": (
                [group.element_name(self.witness_pair[0]), group.element_name(self.witness_pair[1])]
                if self.witness_pair
                else None
            ),
        }


def lipschitz_check(cls: ConjugacyClassHandle, radius: int) -> LipschitzReport:
    """max over pairs in the ball of d(f(g), f(h)) / d(g, h); the
    acceptance bound is 4."""
    grp = cls.group
    if cls.radius < 2 * radius:
        cls = grp.conjugacy_class(cls.gamma, 2 * radius)
    ball = grp.ball(radius)
    f_of: Dict[Element, Element] = {g: lex_min_f(g, cls, radius) for g in ball}
    best = Fraction(0)
    witness: Optional[Tuple[Element, Element]] = None
    for i, g in enumerate(ball):
        for h in ball[i + 1 :]:
            d = grp.distance(g, h, max_radius=2 * radius)
            if d == 0:
                continue
            df = grp.distance(f_of[g], f_of[h], max_radius=4 * radius)
            ratio = Fraction(df, d)
            if ratio > best:
                best = ratio
                witness = (g, h)
    return LipschitzReport(best, witness, radius, passed=best <= 4)
