"""Concrete finitely generated groups with word metrics.

Groups are given by evaluable normal forms rather than presentations:

* ``finite-table`` -- element index into an explicit multiplication table,
* ``cyclic(k)``    -- residue in ``[0, k)``,
* ``free-abelian(n)`` -- integer n-vector,
* ``heisenberg``   -- integer triple ``(a, b, c)`` with
  ``(a,b,c)*(a',b',c') = (a+a', b+b', c+c'+a*b')``,
* ``product``      -- tuple of factor normal forms.

Elements are plain hashable Python data; all operations go through the
owning :class:`Group`. Word lengths come from a memoized breadth-first
search over the Cayley graph of the stored ordered symmetric generating
set (closed form for free-abelian kinds with standard generators); the
BFS also fixes the shortlex order used by every lexicographic operation
downstream.
"""

from __future__ import annotations

import itertools
import threading
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

Element = object  # int | tuple, hashable normal form

DEFAULT_RADIUS = 8
ORDER_CAP = 10_000
BALL_CAP = 2_000_000


class GroupError(ValueError):
    """Structural misuse: mismatched groups, bad element data."""


class RadiusExceededError(RuntimeError):
    def __init__(self, radius: int, what: str = "word-length search"):
        super().__init__(f"{what} exceeded configured radius {radius}")
        self.radius = radius


class CapacityError(RuntimeError):
    pass


class Group:
    """Base class; subclasses implement the normal-form arithmetic."""

    kind: str = "abstract"
    is_finite: bool = False
    is_abelian: bool = False

    def __init__(self, generators: Optional[Sequence[Element]] = None):
        self._generators: List[Element] = list(
            generators if generators is not None else self.default_generators()
        )
        for s in self._generators:
            if self.inverse(s) not in self._generators:
                raise GroupError(f"generating set not symmetric: missing inverse of {s!r}")
        # element -> (length, canonical minimal word as generator-index tuple)
        self._word_cache: Dict[Element, Tuple[int, Tuple[int, ...]]] = {
            self.identity(): (0, ())
        }
        self._bfs_frontier: List[Element] = [self.identity()]
        self._bfs_radius = 0
        self._lock = threading.Lock()

    # -- abstract normal-form arithmetic ------------------------------

    def multiply(self, g: Element, h: Element) -> Element:
        raise NotImplementedError

    def inverse(self, g: Element) -> Element:
        raise NotImplementedError

    def identity(self) -> Element:
        raise NotImplementedError

    def contains(self, g: Element) -> bool:
        raise NotImplementedError

    def element_name(self, g: Element) -> str:
        return str(g)

    def parse_element(self, text: str) -> Element:
        raise NotImplementedError

    def default_generators(self) -> List[Element]:
        raise NotImplementedError

    def spec(self) -> dict:
        """JSON-serializable group description (see External Interfaces)."""
        raise NotImplementedError

    # -- generic derived operations ------------------------------------

    @property
    def generators(self) -> List[Element]:
        return list(self._generators)

    def check_element(self, g: Element) -> Element:
        if not self.contains(g):
            raise GroupError(f"{g!r} is not an element of {self.describe()}")
        return g

    def describe(self) -> str:
        return self.kind

    def conjugate(self, h: Element, g: Element) -> Element:
        """h^{-1} g h."""
        return self.multiply(self.multiply(self.inverse(h), g), h)

    def commutator(self, g: Element, h: Element) -> Element:
        return self.multiply(
            self.multiply(g, h), self.multiply(self.inverse(g), self.inverse(h))
        )

    def power(self, g: Element, k: int) -> Element:
        if k < 0:
            return self.power(self.inverse(g), -k)
        out = self.identity()
        base = g
        while k:
            if k & 1:
                out = self.multiply(out, base)
            base = self.multiply(base, base)
            k >>= 1
        return out

    def element_order(self, g: Element, cap: int = ORDER_CAP) -> int:
        """ord(g); 0 means infinite (iteration cap hit without closure)."""
        e = self.identity()
        x = g
        for k in range(1, cap + 1):
            if x == e:
                return k
            x = self.multiply(x, g)
        return 0

    # -- word metric ----------------------------------------------------

    def _bfs_expand(self, radius: int) -> None:
        """Grow the layered BFS (lex order within layers) to ``radius``."""
        while self._bfs_radius < radius:
            if not self._bfs_frontier:
                # Cayley graph exhausted (finite group).
                self._bfs_radius = radius
                return
            new_frontier: List[Element] = []
            for g in self._bfs_frontier:
                _, word = self._word_cache[g]
                for idx, s in enumerate(self._generators):
                    h = self.multiply(g, s)
                    if h not in self._word_cache:
                        self._word_cache[h] = (self._bfs_radius + 1, word + (idx,))
                        new_frontier.append(h)
                        if len(self._word_cache) > BALL_CAP:
                            raise CapacityError(
                                f"ball enumeration exceeded cap {BALL_CAP}"
                            )
            self._bfs_frontier = new_frontier
            self._bfs_radius += 1

    def word_length(self, g: Element, max_radius: int = DEFAULT_RADIUS) -> int:
        """l(g): minimal number of generators whose product is g."""
        self.check_element(g)
        with self._lock:
            hit = self._word_cache.get(g)
            if hit is None:
                self._bfs_expand(max_radius)
                hit = self._word_cache.get(g)
        if hit is None:
            raise RadiusExceededError(max_radius)
        return hit[0]

    def shortlex_key(self, g: Element, max_radius: int = DEFAULT_RADIUS):
        """(length, canonical minimal word); total order fixing all ties."""
        self.word_length(g, max_radius)
        return self._word_cache[g]

    def distance(self, g: Element, h: Element, max_radius: int = DEFAULT_RADIUS) -> int:
        """Left-invariant word metric d(g, h) = l(g^{-1} h)."""
        return self.word_length(self.multiply(self.inverse(g), h), max_radius)

    def ball(self, radius: int) -> List[Element]:
        """Elements of word length <= radius, in shortlex order."""
        if radius < 0:
            raise GroupError("radius must be >= 0")
        with self._lock:
            self._bfs_expand(radius)
            items = [
                (lw, g) for g, lw in self._word_cache.items() if lw[0] <= radius
            ]
        items.sort(key=lambda t: t[0])
        return [g for _, g in items]

    def sphere(self, radius: int) -> List[Element]:
        return [g for g in self.ball(radius) if self.word_length(g) == radius]

    # -- conjugacy ------------------------------------------------------

    def conjugacy_class(self, gamma: Element, radius: int) -> "ConjugacyClassHandle":
        """Class members h^{-1} gamma h for ||h|| <= radius, with witnesses.

        Witnesses are shortlex-minimal conjugators (ball order makes the
        first witness found the minimal one).
        """
        self.check_element(gamma)
        members: Dict[Element, Element] = {}
        for h in self.ball(radius):
            y = self.conjugate(h, gamma)
            if y not in members:
                members[y] = h
        order = self.element_order(gamma)
        centralizer = self.centralizer(gamma, radius)
        return ConjugacyClassHandle(
            group=self,
            gamma=gamma,
            order=order,
            radius=radius,
            members=members,
            centralizer=centralizer,
        )

    def centralizer(self, gamma: Element, radius: int) -> List[Element]:
        """{z : ||z|| <= radius, z gamma = gamma z}, shortlex order."""
        self.check_element(gamma)
        return [
            z
            for z in self.ball(radius)
            if self.multiply(z, gamma) == self.multiply(gamma, z)
        ]

    # -- growth ----------------------------------------------------------

    def growth_degree_fit(self, max_radius: int) -> Tuple[int, int]:
        """Fit (C0, m) with |B(r)| <= C0 (r+1)^m on all r <= max_radius.

        The bound alone is degenerate (large C0 certifies any m), so C0 is
        calibrated on the first half of the radii and required to hold on
        the rest; m is the smallest degree that extrapolates.
        """
        if max_radius < 3:
            raise GroupError("growth fit needs max_radius >= 3")
        sizes = [len(self.ball(r)) for r in range(max_radius + 1)]
        half = max(1, max_radius // 2)
        for m in range(0, 16):
            c0 = max(-(-sizes[r] // (r + 1) ** m) for r in range(half + 1))
            if all(sizes[r] <= c0 * (r + 1) ** m for r in range(max_radius + 1)):
                return c0, m
        raise CapacityError("growth degree fit did not stabilize below degree 16")


@dataclass
class ConjugacyClassHandle:
    """cl(gamma) enumerated within a radius, with conjugating witnesses.

    ``members[y] = h`` satisfies h^{-1} gamma h = y; the centralizer is
    enumerated within the same radius. ``order`` is ord(gamma) with 0
    meaning infinite (iteration cap hit).
    """

    group: Group
    gamma: Element
    order: int
    radius: int
    members: Dict[Element, Element]
    centralizer: List[Element]
    _centralizer_set: set = field(init=False, repr=False)

    def __post_init__(self):
        self._centralizer_set = set(self.centralizer)

    @property
    def nontrivial(self) -> bool:
        return self.gamma != self.group.identity()

    def __contains__(self, y: Element) -> bool:
        return y in self.members

    def witness(self, y: Element) -> Element:
        try:
            return self.members[y]
        except KeyError:
            raise WitnessNotFoundError(self.group.element_name(y)) from None

    def in_centralizer(self, z: Element) -> bool:
        return z in self._centralizer_set

    def centralizer_quotient(self) -> List[List[Element]]:
        """Cosets of <gamma> in the enumerated centralizer (finite kinds)."""
        if self.order == 0:
            raise GroupError("quotient enumeration needs gamma of finite order")
        grp = self.group
        powers = [grp.power(self.gamma, k) for k in range(self.order)]
        seen: set = set()
        cosets: List[List[Element]] = []
        for z in self.centralizer:
            if z in seen:
                continue
            coset = sorted(
                {grp.multiply(p, z) for p in powers} & self._centralizer_set,
                key=grp.shortlex_key,
            )
            seen.update(coset)
            cosets.append(coset)
        return cosets

    def validate(self) -> None:
        """Check the stored witnesses and centralizer by multiplication."""
        grp = self.group
        assert self.members.get(self.gamma) == grp.identity()
        for y, h in self.members.items():
            if grp.conjugate(h, self.gamma) != y:
                raise GroupError("stored witness fails h^-1 gamma h = member")
        for z in self.centralizer:
            if grp.multiply(z, self.gamma) != grp.multiply(self.gamma, z):
                raise GroupError("stored centralizer element does not commute")


class WitnessNotFoundError(KeyError):
    def __init__(self, name: str):
        super().__init__(f"no conjugating witness stored for class member {name}")


# ---------------------------------------------------------------------------
# concrete kinds
# ---------------------------------------------------------------------------


class CyclicGroup(Group):
    kind = "cyclic"
    is_finite = True
    is_abelian = True

    def __init__(self, k: int, generators=None):
        if k < 1:
            raise GroupError("cyclic group needs k >= 1")
        self.k = k
        super().__init__(generators)

    def default_generators(self):
        if self.k == 1:
            return []
        return [1] if self.k == 2 else [1, self.k - 1]

    def multiply(self, g, h):
        return (g + h) % self.k

    def inverse(self, g):
        return (-g) % self.k

    def identity(self):
        return 0

    def contains(self, g):
        return isinstance(g, int) and 0 <= g < self.k

    def parse_element(self, text):
        return int(text) % self.k

    def elements(self):
        return range(self.k)

    @property
    def order(self):
        return self.k

    def element_order(self, g, cap=ORDER_CAP):
        from math import gcd

        return self.k // gcd(self.k, g % self.k) if g % self.k else 1

    def describe(self):
        return f"cyclic:{self.k}"

    def spec(self):
        return {"kind": "cyclic", "k": self.k}


class FreeAbelianGroup(Group):
    kind = "free_abelian"
    is_abelian = True

    def __init__(self, n: int, generators=None):
        if n < 1:
            raise GroupError("free abelian group needs n >= 1")
        self.n = n
        super().__init__(generators)
        std = []
        for i in range(n):
            std.extend([self._unit(i, 1), self._unit(i, -1)])
        self._standard_gens = self._generators == std

    def _unit(self, i, sign):
        return tuple(sign if j == i else 0 for j in range(self.n))

    def default_generators(self):
        gens = []
        for i in range(self.n):
            gens.extend([self._unit(i, 1), self._unit(i, -1)])
        return gens

    def multiply(self, g, h):
        return tuple(a + b for a, b in zip(g, h))

    def inverse(self, g):
        return tuple(-a for a in g)

    def identity(self):
        return (0,) * self.n

    def contains(self, g):
        return (
            isinstance(g, tuple)
            and len(g) == self.n
            and all(isinstance(a, int) for a in g)
        )

    def parse_element(self, text):
        parts = text.strip("() ").split(",")
        v = tuple(int(p) for p in parts)
        if len(v) != self.n:
            raise GroupError(f"expected {self.n} coordinates, got {text!r}")
        return v

    def word_length(self, g, max_radius=DEFAULT_RADIUS):
        # L1 norm is forced by +-standard generators; BFS otherwise.
        self.check_element(g)
        if self._standard_gens:
            return sum(abs(a) for a in g)
        return super().word_length(g, max_radius)

    def shortlex_key(self, g, max_radius=DEFAULT_RADIUS):
        if self._standard_gens:
            # lex-least minimal word lists generator indices in ascending
            # order: index 2i for +e_i, 2i+1 for -e_i.
            word = []
            for i, a in enumerate(g):
                word.extend([2 * i if a > 0 else 2 * i + 1] * abs(a))
            return (sum(abs(a) for a in g), tuple(word))
        return super().shortlex_key(g, max_radius)

    def element_order(self, g, cap=ORDER_CAP):
        return 1 if g == self.identity() else 0

    def describe(self):
        return f"free_abelian:{self.n}"

    def spec(self):
        return {"kind": "free_abelian", "n": self.n}


class HeisenbergGroup(Group):
    """Integer Heisenberg group H3(Z) in normal-form triples."""

    kind = "heisenberg"

    def default_generators(self):
        return [(1, 0, 0), (-1, 0, 0), (0, 1, 0), (0, -1, 0)]

    def multiply(self, g, h):
        a, b, c = g
        x, y, z = h
        return (a + x, b + y, c + z + a * y)

    def inverse(self, g):
        a, b, c = g
        return (-a, -b, a * b - c)

    def identity(self):
        return (0, 0, 0)

    def contains(self, g):
        return (
            isinstance(g, tuple)
            and len(g) == 3
            and all(isinstance(a, int) for a in g)
        )

    def parse_element(self, text):
        parts = text.strip("() ").split(",")
        v = tuple(int(p) for p in parts)
        if len(v) != 3:
            raise GroupError(f"expected 3 coordinates, got {text!r}")
        return v

    def element_order(self, g, cap=ORDER_CAP):
        return 1 if g == self.identity() else 0

    def describe(self):
        return "heisenberg"

    def spec(self):
        return {"kind": "heisenberg"}


class FiniteTableGroup(Group):
    kind = "finite_table"
    is_finite = True

    def __init__(self, names: Sequence[str], table: Sequence[Sequence[int]], generators=None):
        n = len(names)
        if len(set(names)) != n:
            raise GroupError("element names must be distinct")
        if len(table) != n or any(len(row) != n for row in table):
            raise GroupError("multiplication table must be square")
        for row in table:
            for v in row:
                if not 0 <= v < n:
                    raise GroupError("table entry out of range (not closed)")
        self.names = list(names)
        self.table = [list(row) for row in table]
        self._index = {nm: i for i, nm in enumerate(self.names)}
        ident = self._find_identity()
        if ident != 0:
            raise GroupError("identity must be element 0 of the table")
        self._inverses = self._find_inverses()
        self._check_associative_sample()
        super().__init__(generators)
        self.is_abelian = all(
            self.table[a][b] == self.table[b][a] for a in range(n) for b in range(n)
        )

    def _find_identity(self) -> int:
        n = len(self.names)
        for e in range(n):
            if all(self.table[e][g] == g and self.table[g][e] == g for g in range(n)):
                return e
        raise GroupError("table has no identity element")

    def _find_inverses(self) -> List[int]:
        n = len(self.names)
        inv = [-1] * n
        for g in range(n):
            for h in range(n):
                if self.table[g][h] == 0 and self.table[h][g] == 0:
                    inv[g] = h
                    break
            if inv[g] < 0:
                raise GroupError(f"element {self.names[g]} has no inverse")
        return inv

    def _check_associative_sample(self) -> None:
        n = len(self.names)
        triples = (
            itertools.product(range(n), repeat=3)
            if n <= 8
            else itertools.islice(itertools.product(range(n), repeat=3), 512)
        )
        for a, b, c in triples:
            if self.table[self.table[a][b]][c] != self.table[a][self.table[b][c]]:
                raise GroupError("multiplication table is not associative")

    def default_generators(self):
        return list(range(1, len(self.names)))

    def multiply(self, g, h):
        return self.table[g][h]

    def inverse(self, g):
        return self._inverses[g]

    def identity(self):
        return 0

    def contains(self, g):
        return isinstance(g, int) and 0 <= g < len(self.names)

    def element_name(self, g):
        return self.names[g]

    def parse_element(self, text):
        try:
            return self._index[text]
        except KeyError:
            raise GroupError(f"unknown element name {text!r}") from None

    def elements(self):
        return range(len(self.names))

    @property
    def order(self):
        return len(self.names)

    def describe(self):
        return f"finite_table:{len(self.names)}"

    def spec(self):
        return {"kind": "finite_table", "elements": list(self.names), "table": self.table}


class ProductGroup(Group):
    kind = "product"

    def __init__(self, factors: Sequence[Group], generators=None):
        if not factors:
            raise GroupError("product needs at least one factor")
        self.factors = list(factors)
        self.is_finite = all(f.is_finite for f in factors)
        self.is_abelian = all(f.is_abelian for f in factors)
        super().__init__(generators)

    def default_generators(self):
        gens = []
        for i, f in enumerate(self.factors):
            for s in f.generators:
                gens.append(self._embed(i, s))
        return gens

    def _embed(self, i, s):
        return tuple(
            s if j == i else f.identity() for j, f in enumerate(self.factors)
        )

    def multiply(self, g, h):
        return tuple(f.multiply(a, b) for f, a, b in zip(self.factors, g, h))

    def inverse(self, g):
        return tuple(f.inverse(a) for f, a in zip(self.factors, g))

    def identity(self):
        return tuple(f.identity() for f in self.factors)

    def contains(self, g):
        return (
            isinstance(g, tuple)
            and len(g) == len(self.factors)
            and all(f.contains(a) for f, a in zip(self.factors, g))
        )

    def element_name(self, g):
        return "|".join(f.element_name(a) for f, a in zip(self.factors, g))

    def parse_element(self, text):
        parts = text.split("|")
        if len(parts) != len(self.factors):
            raise GroupError(f"expected {len(self.factors)} components in {text!r}")
        return tuple(f.parse_element(p) for f, p in zip(self.factors, parts))

    def elements(self):
        if not self.is_finite:
            raise GroupError("cannot enumerate an infinite product")
        return (
            tuple(t) for t in itertools.product(*[f.elements() for f in self.factors])
        )

    @property
    def order(self):
        if not self.is_finite:
            raise GroupError("infinite product has no order")
        n = 1
        for f in self.factors:
            n *= f.order
        return n

    def element_order(self, g, cap=ORDER_CAP):
        from math import lcm

        orders = [f.element_order(a, cap) for f, a in zip(self.factors, g)]
        if any(o == 0 for o in orders):
            return 0
        return lcm(*orders)

    def describe(self):
        return "x".join(f.describe() for f in self.factors)

    def spec(self):
        return {"kind": "product", "factors": [f.spec() for f in self.factors]}


# ---------------------------------------------------------------------------
# spec parsing
# ---------------------------------------------------------------------------


def group_from_spec(spec: dict) -> Group:
    """Build a group from its JSON spec (External Interfaces schema).

    Any kind accepts an optional ``generators`` list of element names;
    omitted, the documented per-kind defaults apply."""
    kind = spec.get("kind")
    if kind == "cyclic":
        base = CyclicGroup(int(spec["k"]))
    elif kind == "free_abelian":
        base = FreeAbelianGroup(int(spec["n"]))
    elif kind == "heisenberg":
        base = HeisenbergGroup()
    elif kind == "finite_table":
        base = FiniteTableGroup(spec["elements"], spec["table"])
    elif kind == "product":
        base = ProductGroup([group_from_spec(f) for f in spec["factors"]])
    else:
        raise GroupError(f"unknown group kind {kind!r}")
    names = spec.get("generators")
    if names is None:
        return base
    gens = [base.parse_element(s) for s in names]
    if kind == "cyclic":
        return CyclicGroup(int(spec["k"]), generators=gens)
    if kind == "free_abelian":
        return FreeAbelianGroup(int(spec["n"]), generators=gens)
    if kind == "heisenberg":
        return HeisenbergGroup(generators=gens)
    if kind == "finite_table":
        return FiniteTableGroup(spec["elements"], spec["table"], generators=gens)
    return ProductGroup([group_from_spec(f) for f in spec["factors"]], generators=gens)


def group_from_string(text: str) -> Group:
    """Parse CLI shorthand: ``cyclic:4``, ``free_abelian:2``, ``heisenberg``,
    ``product:cyclic:2,cyclic:3``."""
    if text == "heisenberg":
        return HeisenbergGroup()
    head, _, rest = text.partition(":")
    if head == "cyclic":
        return CyclicGroup(int(rest))
    if head == "free_abelian":
        return FreeAbelianGroup(int(rest))
    if head == "product":
        return ProductGroup([group_from_string(p) for p in rest.split(",")])
    raise GroupError(f"cannot parse group shorthand {text!r}")
