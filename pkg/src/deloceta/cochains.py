"""Cochain complexes on group algebras and the maps between them.

Degree-n cochains are multilinear functionals on (n+1)-tuples of group
elements, carried sparsely or as lazy pointwise formulas, always with
exact rational-complex values. Flavors:

* ``cyclic``              -- functionals on tuples of group elements,
* ``cyclic-delocalized``  -- vanishing unless g_0...g_n lies in cl(gamma),
* ``homogeneous-group``   -- group cohomology cochains (diagonal invariance
                             and skewness are testable conditions),
* ``relative``            -- skew, centralizer-invariant, gamma-invariant,
* ``relative-pre``        -- relative without the gamma-invariance.

The coboundaries::

    (b f)(a_0,...,a_{n+1})  = sum_{i<=n} (-1)^i f(..., a_i a_{i+1}, ...)
                              + (-1)^{n+1} f(a_{n+1} a_0, a_1, ..., a_n)
    (bhat f)(h_0,...,h_{k+1}) = sum_i (-1)^i f(h_0,..., h_i omitted, ..., h_{k+1})

and the signed cyclic operator ``(t f)(a_0,...,a_n) = (-1)^n f(a_n, a_0,
..., a_{n-1})``. Skew-symmetrization F, the chain homotopy between F and
the identity, the averaging map R, explicit delocalized cocycle
construction, the degree-raising operator beta and the periodicity
operator S are all provided as operators returning lazily evaluated
cochains.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from functools import reduce
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from .groups import ConjugacyClassHandle, Group, WitnessNotFoundError
from .rational import QC, QC_ZERO

FLAVOR_CYCLIC = "cyclic"
FLAVOR_DELOCALIZED = "cyclic-delocalized"
FLAVOR_GROUP = "homogeneous-group"
FLAVOR_RELATIVE = "relative"
FLAVOR_RELATIVE_PRE = "relative-pre"

FLAVORS = (
    FLAVOR_CYCLIC,
    FLAVOR_DELOCALIZED,
    FLAVOR_GROUP,
    FLAVOR_RELATIVE,
    FLAVOR_RELATIVE_PRE,
)

CYCLIC_FLAVORS = (FLAVOR_CYCLIC, FLAVOR_DELOCALIZED)
GROUP_FLAVORS = (FLAVOR_GROUP, FLAVOR_RELATIVE, FLAVOR_RELATIVE_PRE)

PERMUTATION_DEGREE_CAP = 6


class FlavorError(TypeError):
    pass


class PermutationCapError(RuntimeError):
    def __init__(self, degree: int):
        super().__init__(
            f"permutation sum at degree {degree} exceeds the cap "
            f"{PERMUTATION_DEGREE_CAP} ((degree+1)! terms per tuple)"
        )


class UnsupportedOrderError(RuntimeError):
    pass


class Cochain:
    """A degree-n multilinear functional, sparse or lazily evaluated."""

    def __init__(
        self,
        group: Group,
        degree: int,
        flavor: str,
        entries: Optional[Dict[Tuple, QC]] = None,
        fn: Optional[Callable[[Tuple], QC]] = None,
        cls: Optional[ConjugacyClassHandle] = None,
        relative_rep: Optional["Cochain"] = None,
    ):
        if flavor not in FLAVORS:
            raise FlavorError(f"unknown flavor {flavor!r}")
        if degree < 0:
            raise ValueError("degree must be >= 0")
        if (entries is None) == (fn is None):
            raise ValueError("exactly one of entries/fn must be given")
        if flavor == FLAVOR_DELOCALIZED and cls is None:
            raise FlavorError("delocalized cochains need a conjugacy class handle")
        self.group = group
        self.degree = degree
        self.flavor = flavor
        self.cls = cls
        self.relative_rep = relative_rep
        self._fn = fn
        if entries is not None:
            self.entries: Optional[Dict[Tuple, QC]] = {
                tuple(k): v for k, v in entries.items() if v
            }
            for key in self.entries:
                if len(key) != degree + 1:
                    raise ValueError(
                        f"entry key {key!r} has arity {len(key)}, expected {degree + 1}"
                    )
        else:
            self.entries = None

    @property
    def arity(self) -> int:
        return self.degree + 1

    def __call__(self, tup: Sequence) -> QC:
        t = tuple(tup)
        if len(t) != self.arity:
            raise ValueError(f"expected {self.arity} arguments, got {len(t)}")
        if self.entries is not None:
            return self.entries.get(t, QC_ZERO)
        return self._fn(t)

    def support_radius(self) -> int:
        """Max word length appearing in stored keys (sparse cochains only)."""
        if self.entries is None:
            raise ValueError("support radius is defined for sparse cochains only")
        radius = 0
        for key in self.entries:
            for g in key:
                radius = max(radius, self.group.word_length(g, max_radius=64))
        return radius

    def materialize(self, tuples: Sequence[Tuple]) -> "Cochain":
        """Sparse copy with values taken on the given tuples."""
        return Cochain(
            self.group,
            self.degree,
            self.flavor,
            entries={t: self(t) for t in tuples},
            cls=self.cls,
            relative_rep=self.relative_rep,
        )

    def scaled(self, c) -> "Cochain":
        return derived(self, self.degree, lambda t: self(t) * c)

    def __add__(self, other: "Cochain") -> "Cochain":
        if (self.group, self.degree) != (other.group, other.degree):
            raise ValueError("cochain mismatch in addition")
        return derived(self, self.degree, lambda t: self(t) + other(t))

    def __sub__(self, other: "Cochain") -> "Cochain":
        return self + other.scaled(-1)


def derived(
    template: Cochain,
    degree: int,
    fn: Callable[[Tuple], QC],
    flavor: Optional[str] = None,
    cls: Optional[ConjugacyClassHandle] = None,
) -> Cochain:
    return Cochain(
        template.group,
        degree,
        flavor or template.flavor,
        fn=fn,
        cls=cls if cls is not None else template.cls,
    )


def zero_cochain(group: Group, degree: int, flavor: str = FLAVOR_CYCLIC, cls=None) -> Cochain:
    return Cochain(group, degree, flavor, entries={}, cls=cls)


def all_tuples(group: Group, arity: int):
    """All arity-tuples over a finite group."""
    return itertools.product(list(group.elements()), repeat=arity)


# ---------------------------------------------------------------------------
# face maps and the cyclic operator
# ---------------------------------------------------------------------------


def face_contract(group: Group, tup: Tuple, i: int) -> Tuple:
    """d_i on an (n+2)-tuple: merge slots i, i+1; i = n+1 wraps to the front."""
    n1 = len(tup) - 1  # = n+1
    if not 0 <= i <= n1:
        raise ValueError(f"face index {i} out of range for arity {len(tup)}")
    if i < n1:
        return tup[:i] + (group.multiply(tup[i], tup[i + 1]),) + tup[i + 2 :]
    return (group.multiply(tup[n1], tup[0]),) + tup[1:n1]


def cyclic_shift(phi: Cochain) -> Cochain:
    """The operator t: (t phi)(a_0..a_n) = (-1)^n phi(a_n, a_0..a_{n-1})."""
    n = phi.degree
    sign = QC(-1) if n % 2 else QC(1)
    return derived(phi, n, lambda t: sign * phi((t[-1],) + t[:-1]))


def cyclic_symmetrize(phi: Cochain) -> Cochain:
    """Projection onto t-invariant cochains (average of the n+1 shifts)."""
    n = phi.degree
    arity = n + 1
    sgn = -1 if n % 2 else 1

    def fn(t: Tuple) -> QC:
        total = QC_ZERO
        cur = t
        s = 1
        for _ in range(arity):
            total = total + (phi(cur) if s > 0 else -phi(cur))
            cur = (cur[-1],) + cur[:-1]
            s *= sgn
        return total * Fraction(1, arity)

    return derived(phi, n, fn)


def is_cyclic_on(phi: Cochain, tuples) -> bool:
    t_phi = cyclic_shift(phi)
    return all(t_phi(t) == phi(t) for t in tuples)


# ---------------------------------------------------------------------------
# coboundaries
# ---------------------------------------------------------------------------


def cyclic_coboundary(phi: Cochain) -> Cochain:
    """Hochschild-style coboundary b on the cyclic module."""
    if phi.flavor not in CYCLIC_FLAVORS:
        raise FlavorError(f"b expects a cyclic-flavor cochain, got {phi.flavor}")
    n = phi.degree
    grp = phi.group

    def fn(t: Tuple) -> QC:
        total = QC_ZERO
        for i in range(n + 2):
            v = phi(face_contract(grp, t, i))
            total = total + (v if i % 2 == 0 else -v)
        return total

    return derived(phi, n + 1, fn)


def group_coboundary(phi: Cochain) -> Cochain:
    """Bar-resolution coboundary bhat (alternating deletion sum)."""
    if phi.flavor not in GROUP_FLAVORS:
        raise FlavorError(f"bhat expects a group-flavor cochain, got {phi.flavor}")
    k = phi.degree

    def fn(t: Tuple) -> QC:
        total = QC_ZERO
        for i in range(k + 2):
            v = phi(t[:i] + t[i + 1 :])
            total = total + (v if i % 2 == 0 else -v)
        return total

    return derived(phi, k + 1, fn)


def coboundary(phi: Cochain) -> Cochain:
    return cyclic_coboundary(phi) if phi.flavor in CYCLIC_FLAVORS else group_coboundary(phi)


# ---------------------------------------------------------------------------
# skew symmetrization and the chain homotopy to the identity
# ---------------------------------------------------------------------------


def _check_permutation_cap(degree: int) -> None:
    if degree > PERMUTATION_DEGREE_CAP:
        raise PermutationCapError(degree)


def skew_symmetrize(phi: Cochain) -> Cochain:
    """F: average of sgn(sigma) phi(sigma(tuple)) over all permutations."""
    if phi.flavor not in GROUP_FLAVORS:
        raise FlavorError("F acts on group-flavor cochains")
    n = phi.degree
    _check_permutation_cap(n)
    perms = _signed_permutations(n + 1)
    norm = Fraction(1, len(perms))

    def fn(t: Tuple) -> QC:
        total = QC_ZERO
        for perm, sgn in perms:
            v = phi(tuple(t[p] for p in perm))
            total = total + (v if sgn > 0 else -v)
        return total * norm

    return derived(phi, n, fn)


def _signed_permutations(k: int) -> List[Tuple[Tuple[int, ...], int]]:
    out = []
    for perm in itertools.permutations(range(k)):
        sgn = 1
        seen = [False] * k
        for start in range(k):
            if seen[start]:
                continue
            length = 0
            j = start
            while not seen[j]:
                seen[j] = True
                j = perm[j]
                length += 1
            if length % 2 == 0:
                sgn = -sgn
        out.append((perm, sgn))
    return out


# Chain-level homotopy H_n with dH + Hd = Alt - Id, built recursively from
# the bar-resolution contraction s(tuple) = (e,) + tuple. The explicit
# permutation-sum homotopy printed alongside F in the source material does
# not satisfy the identity exactly (its skew sum dies on the repeated
# argument), so the contraction recursion is used instead; the dual maps
# p_n below make F - Id = bhat p_n + p_{n+1} bhat hold on the nose.

FormalChain = Dict[Tuple, Fraction]


def _chain_alt_minus_id(tup: Tuple) -> FormalChain:
    k = len(tup)
    _check_permutation_cap(k - 1)
    chain: FormalChain = {}
    norm = Fraction(1, len(_signed_permutations(k)))
    for perm, sgn in _signed_permutations(k):
        key = tuple(tup[p] for p in perm)
        chain[key] = chain.get(key, Fraction(0)) + sgn * norm
    chain[tup] = chain.get(tup, Fraction(0)) - 1
    return {k_: v for k_, v in chain.items() if v}


def _homotopy_chain(group: Group, tup: Tuple, memo: Dict[Tuple, FormalChain]) -> FormalChain:
    """H_n applied to a basis (n+1)-tuple; output lives in (n+2)-tuples."""
    if tup in memo:
        return memo[tup]
    if len(tup) == 1:
        memo[tup] = {}
        return {}
    chain = dict(_chain_alt_minus_id(tup))
    for i in range(len(tup)):
        face = tup[:i] + tup[i + 1 :]
        sign = 1 if i % 2 == 0 else -1
        for key, coeff in _homotopy_chain(group, face, memo).items():
            chain[key] = chain.get(key, Fraction(0)) - sign * coeff
    e = group.identity()
    out = {}
    for key, coeff in chain.items():
        if coeff:
            out[(e,) + key] = out.get((e,) + key, Fraction(0)) + coeff
    memo[tup] = out
    return out


def chain_homotopy_p(phi: Cochain) -> Cochain:
    """p_n: degree n -> n-1 with F - Id = bhat p_n + p_{n+1} bhat."""
    if phi.flavor not in GROUP_FLAVORS:
        raise FlavorError("the chain homotopy acts on group-flavor cochains")
    n = phi.degree
    if n < 1:
        raise ValueError("p_n needs degree >= 1")
    _check_permutation_cap(n)
    grp = phi.group
    memo: Dict[Tuple, FormalChain] = {}

    def fn(t: Tuple) -> QC:
        total = QC_ZERO
        for key, coeff in _homotopy_chain(grp, t, memo).items():
            total = total + phi(key) * coeff
        return total

    return derived(phi, n - 1, fn)


# ---------------------------------------------------------------------------
# averaging map R and the inclusion iota
# ---------------------------------------------------------------------------


def inclusion_iota(alpha: Cochain) -> Cochain:
    """Forget the gamma-invariance condition (relative -> relative-pre)."""
    if alpha.flavor != FLAVOR_RELATIVE:
        raise FlavorError("iota includes relative cochains into the pre-complex")
    return derived(alpha, alpha.degree, alpha, flavor=FLAVOR_RELATIVE_PRE)


def averaging_R(alpha: Cochain, cls: ConjugacyClassHandle) -> Cochain:
    """R alpha = sum over r_0..r_n in 1..ord(gamma) of alpha(gamma^{r_i} g_i).

    Evaluates the displayed sum verbatim. On gamma-invariant input this
    gives ord(gamma)^{n+1} * alpha (direct evaluation), not the
    ord(ord+1)/2 coefficient stated alongside the source construction;
    reports downstream record that discrepancy.
    """
    if alpha.flavor not in (FLAVOR_RELATIVE, FLAVOR_RELATIVE_PRE):
        raise FlavorError("R acts on relative(-pre) cochains")
    if cls.order == 0:
        raise UnsupportedOrderError("averaging needs gamma of finite order")
    grp = alpha.group
    powers = [grp.power(cls.gamma, r) for r in range(1, cls.order + 1)]
    arity = alpha.arity

    def fn(t: Tuple) -> QC:
        total = QC_ZERO
        for combo in itertools.product(powers, repeat=arity):
            total = total + alpha(tuple(grp.multiply(p, g) for p, g in zip(combo, t)))
        return total

    return derived(alpha, alpha.degree, fn, flavor=FLAVOR_RELATIVE, cls=cls)


AVERAGING_COEFFICIENT_NOTE = (
    "R o iota = ord(gamma)^(n+1) * Id by direct evaluation; the stated "
    "coefficient (ord(gamma)(ord(gamma)+1)/2)^(n+1) disagrees and is "
    "recorded, not adopted"
)


# ---------------------------------------------------------------------------
# explicit delocalized cocycles
# ---------------------------------------------------------------------------


def _class_membership(cls: ConjugacyClassHandle, prod) -> bool:
    """Whether prod lies in cl(gamma), erring on witness-not-found when the
    enumeration is radius-truncated and cannot decide."""
    if prod in cls.members:
        return True
    grp = cls.group
    if grp.is_abelian:
        return False  # singleton class, enumeration complete
    if grp.is_finite and len(cls.members) > 0:
        full = len(grp.ball(cls.radius)) == grp.order
        if full:
            return False
    raise WitnessNotFoundError(grp.element_name(prod))


def build_delocalized_cocycle(alpha: Cochain, cls: ConjugacyClassHandle) -> Cochain:
    """phi_{alpha,gamma}(g_0..g_n) = alpha(h, h g_0, ..., h g_0...g_{n-1})
    for g_0...g_n = h^{-1} gamma h, and 0 off the conjugacy class."""
    if alpha.flavor != FLAVOR_RELATIVE:
        raise FlavorError("the explicit cocycle is built from a relative cochain")
    if not cls.nontrivial:
        raise ValueError("delocalized construction needs a nontrivial class")
    grp = alpha.group
    n = alpha.degree

    def fn(t: Tuple) -> QC:
        prod = reduce(grp.multiply, t)
        if not _class_membership(cls, prod):
            return QC_ZERO
        h = cls.witness(prod)
        args = [h]
        acc = h
        for g in t[:-1]:
            acc = grp.multiply(acc, g)
            args.append(acc)
        return alpha(tuple(args))

    return Cochain(
        grp,
        n,
        FLAVOR_DELOCALIZED,
        fn=fn,
        cls=cls,
        relative_rep=alpha,
    )


def relative_from_delocalized(phi: Cochain, cls: ConjugacyClassHandle) -> Cochain:
    """Recover a relative representative from a delocalized cochain via
    alpha(k_0..k_n) = phi(k_0^{-1}k_1, ..., k_{n-1}^{-1}k_n, k_n^{-1} gamma k_0)."""
    grp = phi.group
    gamma = cls.gamma

    def fn(t: Tuple) -> QC:
        args = [
            grp.multiply(grp.inverse(t[i]), t[i + 1]) for i in range(len(t) - 1)
        ]
        args.append(grp.multiply(grp.inverse(t[-1]), grp.multiply(gamma, t[0])))
        return phi(tuple(args))

    return Cochain(grp, phi.degree, FLAVOR_RELATIVE, fn=fn, cls=cls)


def normalize_cocycle(phi: Cochain, cls: ConjugacyClassHandle) -> Cochain:
    """Precompose with the normalization move F(g_i) = h (g_i...g_n)^{-1} y_i.

    The composed arguments collapse to (h, h g_0, ..., h g_0..g_{n-1}),
    so the result re-expresses phi through its relative representative
    (reconstructed when the cochain does not carry one) and vanishes
    whenever some g_i = e for i < n.
    """
    if phi.flavor != FLAVOR_DELOCALIZED:
        raise FlavorError("normalization acts on delocalized cochains")
    grp = phi.group
    alpha = phi.relative_rep
    if alpha is None:
        alpha = relative_from_delocalized(phi, cls)
    e = grp.identity()
    n = phi.degree

    def fn(t: Tuple) -> QC:
        if any(g == e for g in t[:-1]):
            return QC_ZERO
        prod = reduce(grp.multiply, t)
        if not _class_membership(cls, prod):
            return QC_ZERO
        h = cls.witness(prod)
        args = [h]
        acc = h
        for g in t[:-1]:
            acc = grp.multiply(acc, g)
            args.append(acc)
        return alpha(tuple(args))

    return Cochain(grp, n, FLAVOR_DELOCALIZED, fn=fn, cls=cls, relative_rep=alpha)


# ---------------------------------------------------------------------------
# beta and the periodicity operator S
# ---------------------------------------------------------------------------


def connes_beta(phi: Cochain) -> Cochain:
    """(beta phi)(g_0..g_{k+1}) = sum_i (-1)^i i (delta^i phi)(g_0..g_{k+1})."""
    if phi.flavor not in CYCLIC_FLAVORS:
        raise FlavorError("beta acts on cyclic-flavor cochains")
    n = phi.degree
    grp = phi.group

    def fn(t: Tuple) -> QC:
        total = QC_ZERO
        for i in range(1, n + 2):
            v = phi(face_contract(grp, t, i)) * i
            total = total + (v if i % 2 == 0 else -v)
        return total

    return derived(phi, n + 1, fn)


def _double_face_sum(phi: Cochain, weight: Callable[[int, int], int]) -> Cochain:
    """sum over 0 <= i < j <= n+2 of (-1)^{i+j} weight(i,j) delta^i delta^j,
    with delta^i applied first (at degree n) and delta^j second."""
    n = phi.degree
    grp = phi.group

    def fn(t: Tuple) -> QC:
        total = QC_ZERO
        for j in range(1, n + 3):
            inner = face_contract(grp, t, j)
            for i in range(0, min(j, n + 2)):
                w = weight(i, j)
                if w == 0:
                    continue
                v = phi(face_contract(grp, inner, i)) * w
                total = total + (v if (i + j) % 2 == 0 else -v)
        return total

    return derived(phi, n + 2, fn)


def beta_after_b(phi: Cochain) -> Cochain:
    """The double face sum with weight (j - i): equals the composition
    beta(b(phi)) (operator products read left to right in the source)."""
    return _double_face_sum(phi, lambda i, j: j - i)


def b_after_beta(phi: Cochain) -> Cochain:
    """The double face sum with weight (i - j + 1): equals b(beta(phi))."""
    return _double_face_sum(phi, lambda i, j: i - j + 1)


def periodicity_S(phi: Cochain, delocalized: Optional[bool] = None) -> Cochain:
    """Connes periodicity S = (beta b + b beta) / ((n+1)(n+2)), degree n -> n+2.

    The two double sums add up to sum_{i<j} (-1)^{i+j} delta^i delta^j.
    The delocalized flag only tags the output; the operator itself
    preserves cl(gamma)-support because every face map conjugates the
    tuple product.
    """
    if phi.flavor not in CYCLIC_FLAVORS:
        raise FlavorError("S acts on cyclic-flavor cochains")
    if delocalized is None:
        delocalized = phi.flavor == FLAVOR_DELOCALIZED
    if delocalized and phi.cls is None:
        raise FlavorError("delocalized S needs a class handle")
    n = phi.degree
    norm = Fraction(1, (n + 1) * (n + 2))
    total = _double_face_sum(phi, lambda i, j: 1)
    flavor = FLAVOR_DELOCALIZED if delocalized else FLAVOR_CYCLIC
    return derived(total, n + 2, lambda t: total(t) * norm, flavor=flavor)


# ---------------------------------------------------------------------------
# exact group-algebra elements and unitized evaluation
# ---------------------------------------------------------------------------


@dataclass
class ExactAlgebraElement:
    """Element of the group algebra with exact coefficients, plus a
    unitization scalar: the pair (A, lambda) representing A + lambda*1."""

    group: Group
    coeffs: Dict[object, QC] = field(default_factory=dict)
    scalar: QC = field(default_factory=lambda: QC_ZERO)

    def __post_init__(self):
        self.coeffs = {g: v for g, v in self.coeffs.items() if v}

    def convolve(self, other: "ExactAlgebraElement") -> "ExactAlgebraElement":
        grp = self.group
        out: Dict[object, QC] = {}
        for g, a in self.coeffs.items():
            for h, b in other.coeffs.items():
                k = grp.multiply(g, h)
                out[k] = out.get(k, QC_ZERO) + a * b
        for g, a in self.coeffs.items():
            if other.scalar:
                out[g] = out.get(g, QC_ZERO) + a * other.scalar
        for h, b in other.coeffs.items():
            if self.scalar:
                out[h] = out.get(h, QC_ZERO) + self.scalar * b
        return ExactAlgebraElement(grp, out, self.scalar * other.scalar)

    def __add__(self, other: "ExactAlgebraElement") -> "ExactAlgebraElement":
        out = dict(self.coeffs)
        for g, b in other.coeffs.items():
            out[g] = out.get(g, QC_ZERO) + b
        return ExactAlgebraElement(self.group, out, self.scalar + other.scalar)

    def scaled(self, c) -> "ExactAlgebraElement":
        return ExactAlgebraElement(
            self.group,
            {g: v * c for g, v in self.coeffs.items()},
            self.scalar * c,
        )


def evaluate_multilinear(
    phi: Cochain, elements: Sequence[ExactAlgebraElement], unitized: bool = True
) -> QC:
    """phi(A_0 x ... x A_n) by exact multilinear expansion over supports.

    In unitized mode the scalar parts are dropped first (the unitized
    cocycle of the delocalized theory); with ``unitized=False`` scalars
    must be zero.
    """
    if len(elements) != phi.arity:
        raise ValueError(f"need {phi.arity} tensor factors, got {len(elements)}")
    if not unitized and any(a.scalar for a in elements):
        raise ValueError("non-unitized evaluation requires scalar-free elements")
    supports = [sorted(a.coeffs, key=phi.group.shortlex_key) for a in elements]
    if any(not s for s in supports):
        return QC_ZERO
    total = QC_ZERO
    for combo in itertools.product(*supports):
        c = reduce(lambda acc, gv: acc * gv[0].coeffs[gv[1]], zip(elements, combo), QC(1))
        v = phi(combo)
        if v:
            total = total + c * v
    return total


def unitize_cocycle(phi: Cochain) -> Callable[[Sequence[ExactAlgebraElement]], QC]:
    """The unitized functional: evaluate on the non-scalar parts only."""

    def evaluator(elements: Sequence[ExactAlgebraElement]) -> QC:
        return evaluate_multilinear(phi, elements, unitized=True)

    return evaluator


# ---------------------------------------------------------------------------
# construction helpers (random and structured cochains)
# ---------------------------------------------------------------------------


def trace_indicator(cls: ConjugacyClassHandle) -> Cochain:
    """tr_gamma as a degree-0 delocalized cocycle: indicator of cl(gamma)."""
    return Cochain(
        cls.group,
        0,
        FLAVOR_DELOCALIZED,
        entries={(y,): QC(1) for y in cls.members},
        cls=cls,
    )


def random_cochain(
    group: Group,
    degree: int,
    flavor: str,
    rng,
    n_entries: int = 6,
    cls: Optional[ConjugacyClassHandle] = None,
    make_cyclic: bool = False,
) -> Cochain:
    """Seeded random sparse cochain with small rational values."""
    elems = list(group.elements())
    entries: Dict[Tuple, QC] = {}
    for _ in range(n_entries):
        if flavor == FLAVOR_DELOCALIZED:
            prefix = tuple(rng.choice(elems) for _ in range(degree))
            member = rng.choice(sorted(cls.members, key=group.shortlex_key))
            inv = group.inverse(reduce(group.multiply, prefix, group.identity()))
            key = prefix + (group.multiply(inv, member),)
        else:
            key = tuple(rng.choice(elems) for _ in range(degree + 1))
        entries[key] = QC(
            Fraction(rng.randint(-8, 8), rng.randint(1, 4)),
            Fraction(rng.randint(-8, 8), rng.randint(1, 4)),
        )
    phi = Cochain(group, degree, flavor, entries=entries, cls=cls)
    if make_cyclic:
        phi = cyclic_symmetrize(phi)
    return phi


def left_translation_average(phi: Cochain, translators: Sequence) -> Cochain:
    grp = phi.group
    norm = Fraction(1, len(translators))

    def fn(t: Tuple) -> QC:
        total = QC_ZERO
        for z in translators:
            total = total + phi(tuple(grp.multiply(z, g) for g in t))
        return total * norm

    return derived(phi, phi.degree, fn)


def make_relative_cochain(
    group: Group, cls: ConjugacyClassHandle, degree: int, rng, n_entries: int = 6
) -> Cochain:
    """Random cochain projected onto the relative complex: skew, then
    centralizer-invariant, then gamma-invariant in every slot."""
    if cls.order == 0:
        raise UnsupportedOrderError("relative projection needs finite ord(gamma)")
    raw = random_cochain(group, degree, FLAVOR_GROUP, rng, n_entries=n_entries)
    skew = skew_symmetrize(raw)
    z_avg = left_translation_average(skew, cls.centralizer)
    grp = group
    powers = [grp.power(cls.gamma, r) for r in range(cls.order)]
    norm = Fraction(1, cls.order ** (degree + 1))

    def fn(t: Tuple) -> QC:
        total = QC_ZERO
        for combo in itertools.product(powers, repeat=degree + 1):
            total = total + z_avg(tuple(grp.multiply(p, g) for p, g in zip(combo, t)))
        return total * norm

    out = Cochain(group, degree, FLAVOR_RELATIVE, fn=fn, cls=cls)
    if group.is_finite:
        out = out.materialize(list(all_tuples(group, degree + 1)))
    return out


# ---------------------------------------------------------------------------
# invariant checks (testable conditions per flavor)
# ---------------------------------------------------------------------------


def check_flavor_conditions(phi: Cochain, tuples, cls: Optional[ConjugacyClassHandle] = None) -> List[str]:
    """Return human-readable violations of the flavor's conditions on the
    sampled tuples (empty list = all conditions hold)."""
    grp = phi.group
    cls = cls or phi.cls
    problems: List[str] = []
    if phi.flavor in CYCLIC_FLAVORS:
        shifted = cyclic_shift(phi)
        for t in tuples:
            if shifted(t) != phi(t):
                problems.append(f"not t-invariant at {t}")
                break
    if phi.flavor == FLAVOR_DELOCALIZED:
        for t in tuples:
            prod = reduce(grp.multiply, t)
            if prod not in cls.members and phi(t):
                problems.append(f"nonzero off cl(gamma) at {t}")
                break
    if phi.flavor in (FLAVOR_GROUP, FLAVOR_RELATIVE, FLAVOR_RELATIVE_PRE):
        for t in tuples:
            for i in range(len(t) - 1):
                swapped = list(t)
                swapped[i], swapped[i + 1] = swapped[i + 1], swapped[i]
                if phi(tuple(swapped)) != -phi(t):
                    problems.append(f"not skew at {t} (swap {i})")
                    break
            else:
                continue
            break
    if phi.flavor in (FLAVOR_RELATIVE, FLAVOR_RELATIVE_PRE):
        for t in tuples:
            for z in cls.centralizer[: min(4, len(cls.centralizer))]:
                tz = tuple(grp.multiply(z, g) for g in t)
                if phi(tz) != phi(t):
                    problems.append(f"not centralizer-invariant at {t}")
                    break
            else:
                continue
            break
    if phi.flavor == FLAVOR_RELATIVE:
        for t in tuples:
            tg = (grp.multiply(cls.gamma, t[0]),) + tuple(t[1:])
            if phi(tg) != phi(t):
                problems.append(f"not gamma-invariant at {t}")
                break
    return problems
