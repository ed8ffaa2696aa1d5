"""Finite-dimensional equivariant spectral models.

Elements of the group algebra tensored with N x N complex matrices are
sparse maps g -> matrix plus a unitization scalar. For finite groups the
left regular representation realizes them as dense |G|N x |G|N matrices
(block (h, g) = A_{h g^{-1}}); Hermitian elements are eigendecomposed
there and the spectral projections averaged back to group-algebra form.
The delocalized trace, multilinear cocycle evaluation, and the
normalizing-function path u_t = exp(2 pi i F_t) all live here.
"""

from __future__ import annotations

import cmath
import itertools
import json
import math
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np

from . import kernels
from .cochains import Cochain
from .groups import ConjugacyClassHandle, Element, Group
EIG_CLUSTER_TOL = 1e-10
HERMITIAN_TOL = 1e-10
IDEMPOTENT_TOL = 1e-8


class ModelError(ValueError):
    pass


class GapError(RuntimeError):
    """Spectral gap too small for an invertibility-requiring operation."""


@dataclass
class AlgebraElement:
    """Sparse element of CG tensor M_N, with unitization scalar."""

    group: Group
    n: int
    coeffs: Dict[Element, np.ndarray] = field(default_factory=dict)
    scalar: complex = 0j

    def __post_init__(self):
        clean = {}
        for g, m in self.coeffs.items():
            arr = np.asarray(m, dtype=np.complex128)
            if arr.shape != (self.n, self.n):
                raise ModelError(f"coefficient at {g!r} has shape {arr.shape}")
            if np.any(arr != 0):
                clean[self.group.check_element(g)] = arr
        self.coeffs = clean
        self.scalar = complex(self.scalar)

    # -- algebra -----------------------------------------------------

    def _check_compat(self, other: "AlgebraElement") -> None:
        if self.group is not other.group or self.n != other.n:
            raise ModelError("algebra elements live in different algebras")

    def __add__(self, other: "AlgebraElement") -> "AlgebraElement":
        self._check_compat(other)
        out = {g: m.copy() for g, m in self.coeffs.items()}
        for g, m in other.coeffs.items():
            out[g] = out.get(g, 0) + m
        return AlgebraElement(self.group, self.n, out, self.scalar + other.scalar)

    def __sub__(self, other: "AlgebraElement") -> "AlgebraElement":
        return self + other.scaled(-1)

    def scaled(self, c: complex) -> "AlgebraElement":
        return AlgebraElement(
            self.group, self.n, {g: c * m for g, m in self.coeffs.items()}, c * self.scalar
        )

    def __mul__(self, other: "AlgebraElement") -> "AlgebraElement":
        self._check_compat(other)
        grp = self.group
        out: Dict[Element, np.ndarray] = {}
        for g, a in self.coeffs.items():
            for h, b in other.coeffs.items():
                k = grp.multiply(g, h)
                prod = a @ b
                out[k] = out.get(k, 0) + prod
        if other.scalar:
            for g, a in self.coeffs.items():
                out[g] = out.get(g, 0) + other.scalar * a
        if self.scalar:
            for h, b in other.coeffs.items():
                out[h] = out.get(h, 0) + self.scalar * b
        return AlgebraElement(grp, self.n, out, self.scalar * other.scalar)

    def adjoint(self) -> "AlgebraElement":
        grp = self.group
        out = {grp.inverse(g): m.conj().T for g, m in self.coeffs.items()}
        return AlgebraElement(grp, self.n, out, self.scalar.conjugate())

    def is_hermitian(self, tol: float = HERMITIAN_TOL) -> bool:
        adj = self.adjoint()
        keys = set(self.coeffs) | set(adj.coeffs)
        scale = max((np.abs(m).max() for m in self.coeffs.values()), default=0.0) or 1.0
        for g in keys:
            a = self.coeffs.get(g, np.zeros((self.n, self.n)))
            b = adj.coeffs.get(g, np.zeros((self.n, self.n)))
            if np.abs(a - b).max() > tol * scale:
                return False
        return abs(self.scalar - self.scalar.conjugate()) <= tol * scale

    def norm_max(self) -> float:
        return max((np.abs(m).max() for m in self.coeffs.values()), default=0.0)

    def drop_scalar(self) -> "AlgebraElement":
        return AlgebraElement(self.group, self.n, dict(self.coeffs), 0j)

    # -- constructors ----------------------------------------------------

    @staticmethod
    def unit(group: Group, n: int) -> "AlgebraElement":
        return AlgebraElement(group, n, {group.identity(): np.eye(n)}, 0j)

    @staticmethod
    def from_scalar_coeffs(group: Group, coeffs: Dict[Element, complex], n: int = 1) -> "AlgebraElement":
        return AlgebraElement(
            group, n, {g: c * np.eye(n) for g, c in coeffs.items()}, 0j
        )

    # -- serialization ----------------------------------------------------

    def to_json(self) -> dict:
        grp = self.group
        entries = []
        for g in sorted(self.coeffs, key=grp.shortlex_key):
            m = self.coeffs[g]
            entries.append(
                {
                    "g": grp.element_name(g),
                    "matrix": [[[float(v.real), float(v.imag)] for v in row] for row in m],
                }
            )
        out = {"group": grp.spec(), "N": self.n, "D": entries}
        if self.scalar:
            out["scalar"] = [self.scalar.real, self.scalar.imag]
        return out

    @staticmethod
    def from_json(doc: dict, group: Optional[Group] = None) -> "AlgebraElement":
        from .groups import group_from_spec

        grp = group if group is not None else group_from_spec(doc["group"])
        n = int(doc["N"])
        coeffs = {}
        for entry in doc["D"]:
            g = grp.parse_element(entry["g"])
            m = np.array(
                [[complex(v[0], v[1]) for v in row] for row in entry["matrix"]],
                dtype=np.complex128,
            )
            coeffs[g] = coeffs.get(g, 0) + m
        scalar = 0j
        if "scalar" in doc:
            scalar = complex(doc["scalar"][0], doc["scalar"][1])
        return AlgebraElement(grp, n, coeffs, scalar)


# ---------------------------------------------------------------------------
# the regular representation and eigendecomposition
# ---------------------------------------------------------------------------


def regular_representation(group: Group, a: AlgebraElement) -> np.ndarray:
    """Dense matrix with block (h, g) = A_{h g^{-1}}, plus scalar * identity."""
    if not group.is_finite:
        raise ModelError("the regular representation needs a finite group")
    elems = list(group.elements())
    index = {g: i for i, g in enumerate(elems)}
    size = len(elems) * a.n
    out = np.zeros((size, size), dtype=np.complex128)
    for x, m in a.coeffs.items():
        for g in elems:
            h = group.multiply(x, g)
            i, j = index[h], index[g]
            out[i * a.n : (i + 1) * a.n, j * a.n : (j + 1) * a.n] = m
    if a.scalar:
        out += a.scalar * np.eye(size)
    return out


def algebra_element_from_matrix(
    group: Group, n: int, dense: np.ndarray
) -> AlgebraElement:
    """Inverse of the regular representation on its image, by block average:
    A_x = (1/|G|) sum_k block(x k, k)."""
    elems = list(group.elements())
    index = {g: i for i, g in enumerate(elems)}
    order = len(elems)
    coeffs: Dict[Element, np.ndarray] = {}
    for x in elems:
        acc = np.zeros((n, n), dtype=np.complex128)
        for k in elems:
            i = index[group.multiply(x, k)]
            j = index[k]
            acc += dense[i * n : (i + 1) * n, j * n : (j + 1) * n]
        coeffs[x] = acc / order
    return AlgebraElement(group, n, coeffs)


@dataclass
class SpectralModel:
    """Hermitian element with eigendecomposition and spectral projections
    pulled back to group-algebra form."""

    element: AlgebraElement
    eigenvalues: List[float]
    projections: List[AlgebraElement]
    gap: float

    @property
    def group(self) -> Group:
        return self.element.group

    @property
    def n(self) -> int:
        return self.element.n

    def functional_calculus(self, f: Callable[[float], complex]) -> AlgebraElement:
        """f(D) = sum_j f(lambda_j) P_j."""
        out = AlgebraElement(self.group, self.n, {}, 0j)
        for lam, proj in zip(self.eigenvalues, self.projections):
            out = out + proj.scaled(complex(f(lam)))
        return out

    def require_gap(self, minimum: float = 1e-6) -> None:
        if self.gap < minimum:
            raise GapError(
                f"spectral gap {self.gap:.3e} below the invertibility threshold {minimum:.1e}"
            )

    def delocalized_multiplicities(self, cls: ConjugacyClassHandle) -> List[complex]:
        """m_j^gamma = tr_gamma(P_j)."""
        return [delocalized_trace(p, cls) for p in self.projections]


def eigendecompose(element: AlgebraElement) -> SpectralModel:
    """Cluster the spectrum of the regular representation and average the
    eigenprojections back to AlgebraElements."""
    if not element.is_hermitian():
        raise ModelError("eigendecompose needs a Hermitian element")
    group = element.group
    dense = regular_representation(group, element)
    evals, evecs = np.linalg.eigh(dense)
    scale = max(1.0, float(np.abs(evals).max()))
    clusters: List[List[int]] = []
    for i, lam in enumerate(evals):
        if clusters and abs(lam - evals[clusters[-1][-1]]) <= EIG_CLUSTER_TOL * scale:
            clusters[-1].append(i)
        else:
            clusters.append([i])
    eigenvalues: List[float] = []
    projections: List[AlgebraElement] = []
    for idxs in clusters:
        lam = float(np.mean(evals[idxs]))
        v = evecs[:, idxs]
        p_dense = v @ v.conj().T
        p = algebra_element_from_matrix(group, element.n, p_dense)
        back = regular_representation(group, p)
        if np.abs(back - p_dense).max() > 1e-8 * scale:
            raise ModelError("projection failed to average back to the algebra")
        eigenvalues.append(lam)
        projections.append(p)
    gap = min(abs(l) for l in eigenvalues)
    return SpectralModel(element, eigenvalues, projections, gap)


# ---------------------------------------------------------------------------
# delocalized trace and multilinear evaluation
# ---------------------------------------------------------------------------


def delocalized_trace(a: AlgebraElement, cls: ConjugacyClassHandle) -> complex:
    """tr_gamma(A) = sum over g in cl(gamma) of the matrix trace of A_g."""
    if not cls.nontrivial:
        raise ModelError("the delocalized trace needs a nontrivial class")
    total = 0j
    for g in sorted(cls.members, key=cls.group.shortlex_key):
        m = a.coeffs.get(g)
        if m is not None:
            total += complex(np.trace(m))
    return total


def class_truncation_warning(a: AlgebraElement, cls: ConjugacyClassHandle) -> bool:
    """True when the class enumeration might miss support of ``a``."""
    grp = cls.group
    if grp.is_abelian:
        return False
    if grp.is_finite and len(grp.ball(cls.radius)) == grp.order:
        return False
    return any(g not in cls.members for g in a.coeffs)


def _dense_phi(phi: Cochain, group: Group, arity: int) -> Tuple[np.ndarray, Dict[Element, int]]:
    elems = list(group.elements())
    index = {g: i for i, g in enumerate(elems)}
    order = len(elems)
    flat = np.zeros(order**arity, dtype=np.complex128)
    if phi.entries is not None:
        for key, val in phi.entries.items():
            pos = 0
            for g in key:
                pos = pos * order + index[g]
            flat[pos] = val.to_complex()
    else:
        for pos, tup in enumerate(itertools.product(elems, repeat=arity)):
            v = phi(tup)
            if v:
                flat[pos] = v.to_complex()
    return flat, index


class CocycleEvaluator:
    """Cached dense table of a cochain, for repeated multilinear evaluation
    through the contraction kernel."""

    def __init__(self, phi: Cochain, group: Group, n: int):
        self.phi = phi
        self.group = group
        self.nmat = n
        self.arity = phi.arity
        self.order = len(list(group.elements()))
        self._flat, self._index = _dense_phi(phi, group, self.arity)

    def __call__(self, elements: Sequence[AlgebraElement], unitized: bool = True) -> complex:
        if len(elements) != self.arity:
            raise ValueError(f"need {self.arity} tensor factors")
        supports, mats = [], []
        for a in elements:
            if not unitized and a.scalar:
                raise ValueError("non-unitized evaluation requires scalar-free factors")
            keys = sorted(a.coeffs, key=self.group.shortlex_key)
            if not keys:
                return 0j
            supports.append(np.array([self._index[g] for g in keys], dtype=np.int32))
            mats.append(np.stack([a.coeffs[g] for g in keys]))
        return kernels.contract(supports, mats, self._flat, self.order, self.nmat)


def extend_cocycle_eval(
    phi: Cochain,
    elements: Sequence[AlgebraElement],
    unitized: bool = True,
) -> complex:
    """phi(A_0 x ... x A_n) = sum tr(A_0(g_0)...A_n(g_n)) phi(g_0..g_n);
    unitized mode evaluates on the non-scalar parts (eq. of the unitized
    cocycle), so any purely scalar factor gives 0."""
    if not elements:
        raise ValueError("need at least one tensor factor")
    group = elements[0].group
    if group.is_finite:
        return CocycleEvaluator(phi, group, elements[0].n)(elements, unitized=unitized)
    # sparse fallback for infinite groups
    total = 0j
    supports = [sorted(a.coeffs, key=group.shortlex_key) for a in elements]
    if any(not s for s in supports):
        return 0j
    for combo in itertools.product(*supports):
        v = phi(combo)
        if not v:
            continue
        m = elements[0].coeffs[combo[0]]
        for a, g in zip(elements[1:], combo[1:]):
            m = m @ a.coeffs[g]
        total += complex(np.trace(m)) * v.to_complex()
    return total


# ---------------------------------------------------------------------------
# the normalizing-function path
# ---------------------------------------------------------------------------


def gauss_F(t: float, x: float) -> float:
    """F_t(x) = (1/sqrt(pi)) * integral of exp(-s^2) over (-inf, t x]."""
    return 0.5 * (1.0 + math.erf(t * x))


def u_dot_u_inv_scalar(t: float, x: float) -> complex:
    """The closed form du_t/dt * u_t^{-1} = 2 i sqrt(pi) x exp(-t^2 x^2)."""
    return 2j * math.sqrt(math.pi) * x * math.exp(-(t * x) ** 2)


def eta_path_u(
    model: SpectralModel, t: float
) -> Tuple[AlgebraElement, AlgebraElement, AlgebraElement]:
    """(u_t(D), u_t(D)^{-1}, du_t/dt u_t^{-1}(D)) with the unitized parts
    stored as (u - 1, lambda=1)."""
    model.require_gap()
    u = model.functional_calculus(lambda x: cmath.exp(2j * math.pi * gauss_F(t, x)) - 1)
    u.scalar = 1.0 + 0j
    u_inv = model.functional_calculus(
        lambda x: cmath.exp(-2j * math.pi * gauss_F(t, x)) - 1
    )
    u_inv.scalar = 1.0 + 0j
    k = model.functional_calculus(lambda x: u_dot_u_inv_scalar(t, x))
    return u, u_inv, k


# ---------------------------------------------------------------------------
# spectrum files
# ---------------------------------------------------------------------------


@dataclass
class SpectrumFile:
    """Externally computed equivariant spectrum: modes (lambda_j, per-class
    delocalized multiplicities)."""

    class_ids: List[str]
    modes: List[Tuple[float, Dict[str, complex]]]
    metadata: dict = field(default_factory=dict)

    def validate_for_eta(self) -> None:
        for lam, _ in self.modes:
            if lam == 0:
                raise ModelError("spectrum contains lambda = 0; eta needs a gap")

    def gap(self) -> float:
        return min((abs(lam) for lam, _ in self.modes), default=0.0)

    def sign_sum(self, class_id: str) -> complex:
        return sum(
            math.copysign(1.0, lam) * mult.get(class_id, 0j) for lam, mult in self.modes
        )

    def to_json(self) -> dict:
        return {
            "classes": list(self.class_ids),
            "modes": [
                {
                    "lambda": lam,
                    "mult": {k: [v.real, v.imag] for k, v in sorted(mult.items())},
                }
                for lam, mult in self.modes
            ],
            "metadata": self.metadata,
        }

    @staticmethod
    def from_json(doc: dict) -> "SpectrumFile":
        class_ids = [str(c) for c in doc["classes"]]
        modes = []
        for mode in doc["modes"]:
            mult = {}
            for k, v in mode["mult"].items():
                if isinstance(v, (int, float)):
                    mult[str(k)] = complex(v)
                else:
                    mult[str(k)] = complex(v[0], v[1])
            modes.append((float(mode["lambda"]), mult))
        return SpectrumFile(class_ids, modes, dict(doc.get("metadata", {})))


def load_spectrum(path: str, eta_mode: bool = False) -> SpectrumFile:
    with open(path) as fh:
        doc = json.load(fh)
    spec = SpectrumFile.from_json(doc)
    if eta_mode:
        spec.validate_for_eta()
    return spec
