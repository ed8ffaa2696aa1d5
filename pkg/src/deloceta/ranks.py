"""Exact cohomology ranks of truncated cochain complexes over finite groups.

For each flavor the invariant subcomplex is given an explicit orbit basis:

* cyclic / cyclic-delocalized: orbits of the signed rotation
  phi(rho T) = (-1)^n phi(T) (orbits whose stabilizer forces a sign flip
  contribute nothing),
* homogeneous-group: orbits of the free diagonal left action, with
  representatives (e, x_1, ..., x_n).

Coboundary matrices have integer entries; ranks are computed by
fraction-free (Bareiss) elimination, so every rank is exact.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import reduce
from typing import Dict, List, Optional, Tuple

from .cochains import (
    CYCLIC_FLAVORS,
    FLAVOR_DELOCALIZED,
    FLAVOR_GROUP,
    Cochain,
    FlavorError,
    cyclic_coboundary,
    group_coboundary,
)
from .groups import ConjugacyClassHandle, Group
from .rational import QC

SIZE_CAP = 100_000


class SizeCapError(RuntimeError):
    pass


@dataclass
class OrbitBasis:
    """Basis of the invariant subspace at one degree: per basis vector, the
    expansion tuple -> integer coefficient (1 on the representative)."""

    degree: int
    vectors: List[Dict[Tuple, int]]
    representatives: List[Tuple]


@dataclass
class ComplexTruncation:
    """Finite truncation of a cochain complex with exact coboundaries."""

    group: Group
    flavor: str
    max_degree: int
    cls: Optional[ConjugacyClassHandle] = None
    _bases: Dict[int, OrbitBasis] = field(default_factory=dict, repr=False)
    _matrices: Dict[int, List[List[int]]] = field(default_factory=dict, repr=False)

    def __post_init__(self):
        if not self.group.is_finite:
            raise FlavorError("rank computation needs a finite group")
        if self.flavor == FLAVOR_DELOCALIZED and self.cls is None:
            raise FlavorError("delocalized truncation needs a class handle")

    # -- tuple enumeration ---------------------------------------------

    def _tuples(self, degree: int):
        elems = list(self.group.elements())
        n_tuples = len(elems) ** degree
        if self.flavor == FLAVOR_DELOCALIZED:
            n_tuples *= len(self.cls.members)
        else:
            n_tuples *= len(elems)
        if n_tuples > SIZE_CAP:
            raise SizeCapError(
                f"degree-{degree} basis needs {n_tuples} tuples (cap {SIZE_CAP})"
            )
        if self.flavor == FLAVOR_DELOCALIZED:
            grp = self.group
            members = sorted(self.cls.members, key=grp.shortlex_key)
            for prefix in itertools.product(elems, repeat=degree):
                inv = grp.inverse(reduce(grp.multiply, prefix, grp.identity()))
                for y in members:
                    yield prefix + (grp.multiply(inv, y),)
        else:
            yield from itertools.product(elems, repeat=degree + 1)

    # -- bases ------------------------------------------------------------

    def basis(self, degree: int) -> OrbitBasis:
        if degree not in self._bases:
            if self.flavor in CYCLIC_FLAVORS:
                self._bases[degree] = self._cyclic_basis(degree)
            elif self.flavor == FLAVOR_GROUP:
                self._bases[degree] = self._homogeneous_basis(degree)
            else:
                raise FlavorError(f"no rank basis for flavor {self.flavor}")
        return self._bases[degree]

    def _cyclic_basis(self, degree: int) -> OrbitBasis:
        sign = -1 if degree % 2 else 1
        seen = set()
        vectors, reps = [], []
        for t in self._tuples(degree):
            if t in seen:
                continue
            orbit = []
            cur, s = t, 1
            degenerate = False
            while True:
                orbit.append((cur, s))
                seen.add(cur)
                cur = (cur[-1],) + cur[:-1]
                s *= sign
                if cur == t:
                    if s != 1:
                        degenerate = True
                    break
            if degenerate:
                continue
            expansion: Dict[Tuple, int] = {}
            consistent = True
            for tup, s_ in orbit:
                if tup in expansion and expansion[tup] != s_:
                    consistent = False
                    break
                expansion[tup] = s_
            if consistent:
                vectors.append(expansion)
                reps.append(t)
        return OrbitBasis(degree, vectors, reps)

    def _homogeneous_basis(self, degree: int) -> OrbitBasis:
        grp = self.group
        elems = list(grp.elements())
        if len(elems) ** (degree + 1) > SIZE_CAP:
            raise SizeCapError(
                f"degree-{degree} homogeneous basis needs {len(elems) ** (degree + 1)}"
                f" tuples (cap {SIZE_CAP})"
            )
        e = grp.identity()
        vectors, reps = [], []
        for tail in itertools.product(elems, repeat=degree):
            rep = (e,) + tail
            expansion = {tuple(grp.multiply(h, g) for g in rep): 1 for h in elems}
            vectors.append(expansion)
            reps.append(rep)
        return OrbitBasis(degree, vectors, reps)

    # -- coboundary matrices ----------------------------------------------

    def coboundary_matrix(self, degree: int) -> List[List[int]]:
        """Integer matrix of the coboundary C^degree -> C^{degree+1} in the
        orbit bases; rows indexed by degree+1 representatives."""
        if degree not in self._matrices:
            src = self.basis(degree)
            dst = self.basis(degree + 1)
            columns: List[List[int]] = []
            for vec in src.vectors:
                phi = Cochain(
                    self.group,
                    degree,
                    self.flavor,
                    entries={t: QC(c) for t, c in vec.items()},
                    cls=self.cls,
                )
                d = (
                    cyclic_coboundary(phi)
                    if self.flavor in CYCLIC_FLAVORS
                    else group_coboundary(phi)
                )
                col = []
                for rep in dst.representatives:
                    v = d(rep)
                    if v.im != 0 or v.re.denominator != 1:
                        raise AssertionError("coboundary matrix entry not integral")
                    col.append(int(v.re))
                columns.append(col)
            n_rows = len(dst.representatives)
            self._matrices[degree] = [
                [col[i] for col in columns] for i in range(n_rows)
            ]
        return self._matrices[degree]

    def dimension(self, degree: int) -> int:
        return len(self.basis(degree).vectors)

    def cohomology_rank(self, degree: int) -> int:
        """dim ker(d at degree) - rank(d below)."""
        dim = self.dimension(degree)
        r_out = bareiss_rank(self.coboundary_matrix(degree))
        r_in = bareiss_rank(self.coboundary_matrix(degree - 1)) if degree > 0 else 0
        return dim - r_out - r_in

    def verify_composition_zero(self, degree: int) -> bool:
        """Consecutive coboundary matrices compose to zero."""
        a = self.coboundary_matrix(degree)
        b = self.coboundary_matrix(degree + 1)
        cols_a = len(a[0]) if a else 0
        for i in range(len(b)):
            for j in range(cols_a):
                s = sum(b[i][k] * a[k][j] for k in range(len(a)))
                if s != 0:
                    return False
        return True


def bareiss_rank(matrix: List[List[int]]) -> int:
    """Rank of an integer matrix by fraction-free Gaussian elimination."""
    if not matrix or not matrix[0]:
        return 0
    m = [row[:] for row in matrix]
    n_rows, n_cols = len(m), len(m[0])
    rank = 0
    prev = 1
    row = 0
    for col in range(n_cols):
        pivot = next((r for r in range(row, n_rows) if m[r][col] != 0), None)
        if pivot is None:
            continue
        m[row], m[pivot] = m[pivot], m[row]
        for r in range(row + 1, n_rows):
            for c in range(col + 1, n_cols):
                m[r][c] = (m[row][col] * m[r][c] - m[r][col] * m[row][c]) // prev
            m[r][col] = 0
        prev = m[row][col]
        rank += 1
        row += 1
        if row == n_rows:
            break
    return rank


def cohomology_ranks(
    group: Group,
    flavor: str,
    max_degree: int,
    cls: Optional[ConjugacyClassHandle] = None,
) -> List[int]:
    trunc = ComplexTruncation(group, flavor, max_degree, cls=cls)
    return [trunc.cohomology_rank(d) for d in range(max_degree + 1)]
