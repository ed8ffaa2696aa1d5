"""Secondary-invariant pairings on finite spectral models.

The delocalized higher eta invariant of an invertible Hermitian model D
against a degree-2m delocalized cocycle phi::

    eta = c_m * integral over (0, inf) of
          phi( u'_t u_t^{-1} (x) ((u_t - 1) (x) (u_t^{-1} - 1))^{(x) m} ) dt

with u_t = exp(2 pi i F_t(D)), F_t the Gaussian error integral, and
c_m = (-1)^m m! / (pi i). The sign (-1)^m (absent from the plain
m=0 normalization, which this reduces to) is forced by S-invariance:
with the coefficient m!/(pi i) alone, eta flips sign under the
periodicity operator while the Chern character stays fixed, which is
inconsistent with the determinant-map identities tying the three
pairings together. The determinant map tau uses the same coefficient on
invertible paths, the Chern character pairs cocycles with idempotents,
and the verification routines check the transgression formula,
S-invariance, the connecting-path identity tau = -2 ch, and the
rho-path/eta comparison (both path orientations are computed and the
matching one flagged; the source leaves the orientation implicit).
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np

from .cochains import (
    Cochain,
    all_tuples,
    cyclic_coboundary,
    periodicity_S,
)
from .groups import ConjugacyClassHandle, Group
from .quadrature import adaptive_quad, gaussian_tail_bound, tail_cutoff
from .spectral import (
    IDEMPOTENT_TOL,
    AlgebraElement,
    CocycleEvaluator,
    GapError,
    SpectralModel,
    SpectrumFile,
    algebra_element_from_matrix,
    eta_path_u,
    gauss_F,
    regular_representation,
    u_dot_u_inv_scalar,
)

MIN_SINGULAR = 1e-8


@dataclass
class PairingReport:
    """Value of an invariant plus the context needed to reproduce it."""

    invariant: str
    value: complex
    error: float
    truncation: float
    tolerance: float
    checks: Dict[str, object] = field(default_factory=dict)
    provenance: Dict[str, object] = field(default_factory=dict)

    def __post_init__(self):
        if self.error < 0:
            raise ValueError("error estimate must be nonnegative")

    def as_dict(self) -> dict:
        return {
            "invariant": self.invariant,
            "value": {"re": self.value.real, "im": self.value.imag},
            "error": self.error,
            "truncation": self.truncation,
            "tolerance": self.tolerance,
            "checks": self.checks,
            "provenance": self.provenance,
        }


class DegreeError(ValueError):
    pass


M_CAP = 2  # tensor arity 2m+1 <= 5 keeps the enumeration |G|^(2m+1)-bounded


def _check_even_degree(phi: Cochain, m: int) -> None:
    if m < 0 or m > M_CAP:
        raise DegreeError(f"m = {m} outside the supported range 0..{M_CAP}")
    if phi.degree != 2 * m:
        raise DegreeError(f"cocycle degree {phi.degree} does not match 2m = {2 * m}")
    if phi.cls is not None and phi.cls.order == 0:
        raise DegreeError(
            "delocalized pairings refuse infinite-order gamma (the cohomology "
            "pipeline restricts to torsion classes)"
        )


def _eta_coefficient(m: int) -> complex:
    return ((-1) ** m * math.factorial(m)) / (math.pi * 1j)


def _provenance(phi: Cochain, model: Optional[SpectralModel], extra: Optional[dict] = None) -> dict:
    grp = phi.group
    out: Dict[str, object] = {
        "group": grp.spec(),
        "generators": [grp.element_name(s) for s in grp.generators],
        "cocycle_degree": phi.degree,
        "cocycle_flavor": phi.flavor,
    }
    if phi.cls is not None:
        out["gamma"] = grp.element_name(phi.cls.gamma)
        out["class_radius"] = phi.cls.radius
        out["witnesses"] = {
            grp.element_name(y): grp.element_name(h)
            for y, h in sorted(
                phi.cls.members.items(), key=lambda kv: grp.shortlex_key(kv[0])
            )
        }
    if model is not None:
        out["model_gap"] = model.gap
        out["model_n"] = model.n
    from .kernels import BACKEND

    out["kernel_backend"] = BACKEND
    if extra:
        out.update(extra)
    return out


# ---------------------------------------------------------------------------
# eta
# ---------------------------------------------------------------------------


def eta_integrand(
    phi: Cochain, model: SpectralModel, m: int, t: float,
    evaluator: Optional[CocycleEvaluator] = None,
) -> complex:
    """phi(u'_t u_t^{-1} (x) ((u_t-1) (x) (u_t^{-1}-1))^{(x) m}) at one t."""
    _check_even_degree(phi, m)
    model.require_gap()
    u, u_inv, k = eta_path_u(model, t)
    args = [k] + [u.drop_scalar(), u_inv.drop_scalar()] * m
    ev = evaluator or CocycleEvaluator(phi, model.group, model.n)
    return ev(args, unitized=False)


def eta_invariant(
    phi: Cochain, model: SpectralModel, m: int, tol: float = 1e-9
) -> PairingReport:
    """Adaptive quadrature of the eta integrand over (0, T] plus the
    gap-driven Gaussian tail bound."""
    _check_even_degree(phi, m)
    if tol <= 0:
        raise ValueError("tolerance must be positive")
    model.require_gap()
    ev = CocycleEvaluator(phi, model.group, model.n)

    def f(t: float) -> complex:
        return eta_integrand(phi, model, m, t, evaluator=ev)

    c_max = max(abs(f(t)) for t in np.linspace(0.0, 1.0, 17))
    T = tail_cutoff(c_max, model.gap, 0.1 * tol)
    inner = adaptive_quad(f, 0.0, 1.0, tol=0.25 * tol)
    outer = adaptive_quad(f, 1.0, T, tol=0.25 * tol)
    tail = gaussian_tail_bound(c_max, model.gap, T)
    coef = _eta_coefficient(m)
    value = coef * (inner.value + outer.value)
    error = abs(coef) * (inner.error + outer.error + tail)
    return PairingReport(
        invariant="eta",
        value=value,
        error=error,
        truncation=T,
        tolerance=tol,
        checks={"coefficient_m0_is_2_over_sqrt_pi": abs(_eta_coefficient(0) * 2j * math.sqrt(math.pi) - 2 / math.sqrt(math.pi)) < 1e-15},
        provenance=_provenance(phi, model, {"m": m, "quad_evals": inner.evaluations + outer.evaluations}),
    )


def eta_sign_sum(model: SpectralModel, cls: ConjugacyClassHandle) -> complex:
    """The m = 0 oracle: sum of sign(lambda_j) tr_gamma(P_j)."""
    return sum(
        math.copysign(1.0, lam) * mult
        for lam, mult in zip(model.eigenvalues, model.delocalized_multiplicities(cls))
    )


def eta_from_spectrum(
    spectrum: SpectrumFile, class_id: str, tol: float = 1e-9
) -> PairingReport:
    """m = 0 eta from an ingested spectrum file (trace pairing only)."""
    spectrum.validate_for_eta()
    gap = spectrum.gap()
    if gap <= 0:
        raise GapError("spectrum file has no gap")

    def f(t: float) -> complex:
        return sum(
            u_dot_u_inv_scalar(t, lam) * mult.get(class_id, 0j)
            for lam, mult in spectrum.modes
        )

    c_max = max(abs(f(t)) for t in np.linspace(0.0, 1.0, 17))
    T = tail_cutoff(c_max, gap, 0.1 * tol)
    inner = adaptive_quad(f, 0.0, 1.0, tol=0.25 * tol)
    outer = adaptive_quad(f, 1.0, T, tol=0.25 * tol)
    coef = _eta_coefficient(0)
    value = coef * (inner.value + outer.value)
    sign_sum = spectrum.sign_sum(class_id)
    return PairingReport(
        invariant="eta",
        value=value,
        error=abs(coef) * (inner.error + outer.error + gaussian_tail_bound(c_max, gap, T)),
        truncation=T,
        tolerance=tol,
        checks={"sign_sum": {"re": sign_sum.real, "im": sign_sum.imag}},
        provenance={"source": "spectrum-file", "class_id": class_id, "gap": gap},
    )


# ---------------------------------------------------------------------------
# invertible paths
# ---------------------------------------------------------------------------


@dataclass
class InvertiblePath:
    """A path of invertible unitized elements starting at the unit.

    Analytic paths carry closures for w, w^{-1} and w^{-1} w'; grid paths
    fall back to finite differences. ``kind`` is one of ``none``,
    ``connecting``, ``rho``.
    """

    group: Group
    n: int
    grid: np.ndarray
    samples: List[AlgebraElement]
    kind: str = "none"
    w_fn: Optional[Callable[[float], AlgebraElement]] = None
    w_inv_fn: Optional[Callable[[float], AlgebraElement]] = None
    w_inv_dot_fn: Optional[Callable[[float], AlgebraElement]] = None
    # rho paths: the same data in the substituted variable r = 1/t
    subst_u: Optional[Callable[[float], AlgebraElement]] = None
    subst_u_inv: Optional[Callable[[float], AlgebraElement]] = None
    subst_k: Optional[Callable[[float], AlgebraElement]] = None
    gap: float = 0.0

    @property
    def derivative_mode(self) -> str:
        return "analytic" if self.w_inv_dot_fn is not None else "central-differences"

    def validate(self, tol_unit: float = 1e-8) -> None:
        if len(self.grid) != len(self.samples):
            raise ValueError("grid and samples must align")
        start = self.samples[0]
        if abs(start.scalar - 1) > tol_unit or start.norm_max() > tol_unit:
            raise ValueError("path must start at the unit")
        if self.group.is_finite:
            for t, w in zip(self.grid, self.samples):
                rep = regular_representation(self.group, w)
                smin = float(np.linalg.svd(rep, compute_uv=False)[-1])
                if smin <= MIN_SINGULAR:
                    raise ValueError(
                        f"sample at t={t:g} is numerically singular (s_min={smin:.2e})"
                    )

    def reversed_orientation(self) -> "InvertiblePath":
        """The pointwise-inverse path (the other K-theory orientation).

        Scalar functional calculus commutes, so v^{-1} v' = -(w^{-1} w');
        the substituted derivative slot flips sign the same way.
        """
        inv_samples = (
            [self.w_inv_fn(t) for t in self.grid]
            if self.w_inv_fn is not None
            else [invert_element(w) for w in self.samples]
        )

        def w_inv_dot(t: float) -> AlgebraElement:
            return self.w_inv_dot_fn(t).scaled(-1.0)

        return InvertiblePath(
            group=self.group,
            n=self.n,
            grid=self.grid,
            samples=inv_samples,
            kind=self.kind,
            w_fn=self.w_inv_fn,
            w_inv_fn=self.w_fn,
            w_inv_dot_fn=None if self.w_inv_dot_fn is None else w_inv_dot,
            subst_u=self.subst_u_inv,
            subst_u_inv=self.subst_u,
            subst_k=(
                None
                if self.subst_k is None
                else (lambda r: self.subst_k(r).scaled(-1.0))
            ),
            gap=self.gap,
        )


def path_to_json(path: InvertiblePath) -> dict:
    return {
        "grid": [float(t) for t in path.grid],
        "samples": [w.to_json() for w in path.samples],
        "analytic": path.kind,
    }


def path_from_json(doc: dict, group=None) -> InvertiblePath:
    """Load a sampled path; file paths always integrate by finite
    differences on the stored grid (closures do not serialize)."""
    if not doc.get("samples"):
        raise ValueError("path file has no samples")
    if group is None:
        from .groups import group_from_spec

        group = group_from_spec(doc["samples"][0]["group"])
    samples = [AlgebraElement.from_json(s, group=group) for s in doc["samples"]]
    return InvertiblePath(
        group=group,
        n=samples[0].n,
        grid=np.asarray(doc["grid"], dtype=float),
        samples=samples,
        kind="none",
    )


def invert_element(w: AlgebraElement) -> AlgebraElement:
    """Invert through the regular representation (finite groups)."""
    grp = w.group
    rep = regular_representation(grp, w)
    inv = np.linalg.inv(rep)
    lam_inv = 1.0 / w.scalar if w.scalar else 0j
    body = algebra_element_from_matrix(grp, w.n, inv - lam_inv * np.eye(rep.shape[0]))
    body.scalar = lam_inv
    return body


def check_idempotent(p: AlgebraElement, tol: float = IDEMPOTENT_TOL) -> float:
    rep = regular_representation(p.group, p)
    defect = float(np.abs(rep @ rep - rep).max())
    if defect > tol:
        raise ValueError(f"not an idempotent: |p^2 - p| = {defect:.3e}")
    return defect


def connecting_path(p: AlgebraElement, grid_points: int = 33) -> InvertiblePath:
    """w(t) = exp(2 pi i (1-t) p) on [0, 1], the unit afterward; satisfies
    w(0) = w(1) = unit and w^{-1} w' = -2 pi i p."""
    check_idempotent(p)
    grp, n = p.group, p.n

    def w(t: float) -> AlgebraElement:
        c = cmath.exp(2j * math.pi * (1.0 - t)) - 1.0
        out = p.scaled(c)
        out.scalar = 1.0 + 0j
        return out

    def w_inv(t: float) -> AlgebraElement:
        c = cmath.exp(-2j * math.pi * (1.0 - t)) - 1.0
        out = p.scaled(c)
        out.scalar = 1.0 + 0j
        return out

    def w_inv_dot(t: float) -> AlgebraElement:
        return p.scaled(-2j * math.pi)

    grid = np.linspace(0.0, 1.0, grid_points)
    return InvertiblePath(
        group=grp,
        n=n,
        grid=grid,
        samples=[w(t) for t in grid],
        kind="connecting",
        w_fn=w,
        w_inv_fn=w_inv,
        w_inv_dot_fn=w_inv_dot,
    )


def rho_path(model: SpectralModel, grid: Optional[np.ndarray] = None) -> InvertiblePath:
    """U(t) = exp(2 pi i F_{1/t}(D)) for t > 0, U(0) = unit.

    Carries closures both in t and in the substituted variable r = 1/t
    (the substitution turns the slow 1/t^2 tail into the same Gaussian
    integrand as eta, which is how tau integrates it).
    """
    model.require_gap()
    grp, n = model.group, model.n

    def u_at(r: float) -> AlgebraElement:
        out = model.functional_calculus(
            lambda x: cmath.exp(2j * math.pi * gauss_F(r, x)) - 1.0
        )
        out.scalar = 1.0 + 0j
        return out

    def u_inv_at(r: float) -> AlgebraElement:
        out = model.functional_calculus(
            lambda x: cmath.exp(-2j * math.pi * gauss_F(r, x)) - 1.0
        )
        out.scalar = 1.0 + 0j
        return out

    def k_at(r: float) -> AlgebraElement:
        return model.functional_calculus(lambda x: u_dot_u_inv_scalar(r, x))

    def w_unit(_: float) -> AlgebraElement:
        return AlgebraElement(grp, n, {}, 1.0 + 0j)

    def w_of(t: float) -> AlgebraElement:
        return w_unit(t) if t <= 0 else u_at(1.0 / t)

    def w_inv_of(t: float) -> AlgebraElement:
        return w_unit(t) if t <= 0 else u_inv_at(1.0 / t)

    def w_inv_dot_of(t: float) -> AlgebraElement:
        if t <= 0:
            return AlgebraElement(grp, n, {}, 0j)
        r = 1.0 / t
        # d/dt U_t = -r^2 u'_r, so U^{-1} dU/dt = -r^2 (u^{-1} u')(r)
        return k_at(r).scaled(-(r * r))

    if grid is None:
        positive = np.geomspace(0.05, 32.0, 48)
        grid = np.concatenate(([0.0], positive))
    # numeric check of the t -> 0 limit: below the gap-derived threshold
    # the path must already be within 1e-8 of the unit
    threshold = model.gap / 8.0
    probe = w_of(threshold)
    if probe.norm_max() > 1e-8:
        raise GapError(
            f"rho path fails to reach the unit at t = {threshold:g} "
            f"(residual {probe.norm_max():.2e})"
        )
    samples = [w_of(t) for t in grid]
    return InvertiblePath(
        group=grp,
        n=n,
        grid=np.asarray(grid, dtype=float),
        samples=samples,
        kind="rho",
        w_fn=w_of,
        w_inv_fn=w_inv_of,
        w_inv_dot_fn=w_inv_dot_of,
        subst_u=u_at,
        subst_u_inv=u_inv_at,
        subst_k=k_at,
        gap=model.gap,
    )


# ---------------------------------------------------------------------------
# the determinant map tau
# ---------------------------------------------------------------------------


def _tau_integrand_factory(
    phi: Cochain, path: InvertiblePath, m: int
) -> Callable[[float], complex]:
    ev = CocycleEvaluator(phi, path.group, path.n)

    def f(t: float) -> complex:
        w_inv_dot = path.w_inv_dot_fn(t)
        w_inv = path.w_inv_fn(t)
        w = path.w_fn(t)
        args = [w_inv_dot] + [w_inv, w] * m
        return ev(args, unitized=True)

    return f


def determinant_tau(
    phi: Cochain, path: InvertiblePath, m: int, tol: float = 1e-9
) -> PairingReport:
    """tau = ((-1)^m m! / pi i) * integral of
    phi_bar((w^{-1} w') (x) (w^{-1} (x) w)^{(x) m}) over the path domain."""
    _check_even_degree(phi, m)
    coef = _eta_coefficient(m)
    checks: Dict[str, object] = {}
    if path.kind == "connecting":
        f = _tau_integrand_factory(phi, path, m)
        quad = adaptive_quad(f, 0.0, 1.0, tol=0.5 * tol)
        value = coef * quad.value
        error = abs(coef) * quad.error
        T = 1.0
    elif path.kind == "rho":
        ev = CocycleEvaluator(phi, path.group, path.n)

        def f(r: float) -> complex:
            # t = 1/r substitution: integrand in r is
            # -phi_bar((u^{-1} u')(r) (x) (u^{-1} (x) u)^{(x) m})
            args = [path.subst_k(r)] + [path.subst_u_inv(r), path.subst_u(r)] * m
            return -ev(args, unitized=True)

        c_max = max(abs(f(r)) for r in np.linspace(0.0, 1.0, 17))
        T = tail_cutoff(c_max, path.gap, 0.1 * tol)
        inner = adaptive_quad(f, 0.0, 1.0, tol=0.25 * tol)
        outer = adaptive_quad(f, 1.0, T, tol=0.25 * tol)
        tail = gaussian_tail_bound(c_max, path.gap, T)
        value = coef * (inner.value + outer.value)
        error = abs(coef) * (inner.error + outer.error + tail)
        checks["integration_variable"] = "r = 1/t"
    else:
        value_arr, err, step = _tau_on_grid(phi, path, m)
        value = coef * value_arr
        error = abs(coef) * err
        T = float(path.grid[-1])
        checks["derivative_step"] = step
    return PairingReport(
        invariant="tau",
        value=value,
        error=error,
        truncation=T,
        tolerance=tol,
        checks=checks,
        provenance=_provenance(phi, None, {"m": m, "path_kind": path.kind, "derivative_mode": path.derivative_mode}),
    )


def _fd_weights(npts: int) -> Tuple[np.ndarray, int]:
    # 4th-order central stencil where possible
    if npts >= 5:
        return np.array([1.0, -8.0, 0.0, 8.0, -1.0]) / 12.0, 2
    return np.array([-0.5, 0.0, 0.5]), 1


def _tau_on_grid(phi: Cochain, path: InvertiblePath, m: int) -> Tuple[complex, float, float]:
    grid = np.asarray(path.grid, dtype=float)
    if len(grid) < 3:
        raise ValueError("grid paths need at least three samples")
    steps = np.diff(grid)
    uniform = np.allclose(steps, steps[0], rtol=1e-9)
    if not uniform:
        raise ValueError("finite-difference tau needs a uniform grid")
    h = float(steps[0])
    ev = CocycleEvaluator(phi, path.group, path.n)
    inverses = [invert_element(w) for w in path.samples]
    weights, half = _fd_weights(len(grid))
    values = []
    for i in range(len(grid)):
        # one-sided 2nd-order stencils at the edges
        if i < half or i >= len(grid) - half:
            if i == 0:
                dot = path.samples[0].scaled(-1.5) + path.samples[1].scaled(2.0) + path.samples[2].scaled(-0.5)
            elif i == len(grid) - 1:
                dot = path.samples[-1].scaled(1.5) + path.samples[-2].scaled(-2.0) + path.samples[-3].scaled(0.5)
            else:
                dot = path.samples[i + 1].scaled(0.5) + path.samples[i - 1].scaled(-0.5)
        else:
            dot = AlgebraElement(path.group, path.n, {}, 0j)
            for k, wgt in enumerate(weights):
                if wgt:
                    dot = dot + path.samples[i - half + k].scaled(wgt)
        dot = dot.scaled(1.0 / h)
        args = [inverses[i] * dot] + [inverses[i], path.samples[i]] * m
        values.append(ev(args, unitized=True))
    vals = np.array(values)
    trapezoid = float(h) * (vals.sum() - 0.5 * (vals[0] + vals[-1]))
    if len(grid) % 2 == 1:
        simpson = complex(h / 3.0 * (vals[0] + vals[-1] + 4 * vals[1:-1:2].sum() + 2 * vals[2:-1:2].sum()))
        return simpson, abs(simpson - trapezoid), h
    return complex(trapezoid), abs(h * h), h


# ---------------------------------------------------------------------------
# the Chern character
# ---------------------------------------------------------------------------


def chern_character(phi: Cochain, p: AlgebraElement, m: int) -> complex:
    """ch(p) = ((-1)^m (2m)! / m!) phi(p^{(x) 2m+1})."""
    _check_even_degree(phi, m)
    check_idempotent(p)
    coef = ((-1) ** m) * math.factorial(2 * m) / math.factorial(m)
    ev = CocycleEvaluator(phi, p.group, p.n)
    return coef * ev([p] * (2 * m + 1), unitized=True)


# ---------------------------------------------------------------------------
# verification routines
# ---------------------------------------------------------------------------


def verify_transgression(
    phi: Cochain,
    model: SpectralModel,
    m: int,
    grid: Optional[np.ndarray] = None,
    fd_step: float = 1e-3,
) -> PairingReport:
    """Check m * eta_{b phi}(D, t) = d/dt phi_bar((u_t (x) u_t^{-1})^{(x) m})
    pointwise, with a 4th-order central difference on the right side."""
    if m < 1:
        raise ValueError("the transgression check needs m >= 1")
    if phi.degree != 2 * m - 1:
        raise DegreeError(f"need a degree {2 * m - 1} cochain for m = {m}")
    model.require_gap()
    if grid is None:
        grid = np.linspace(0.3, 2.5, 12)
    b_phi = cyclic_coboundary(phi)
    ev_b = CocycleEvaluator(b_phi, model.group, model.n)
    ev = CocycleEvaluator(phi, model.group, model.n)

    def pair_value(t: float) -> complex:
        u, u_inv, _ = eta_path_u(model, t)
        return ev([u.drop_scalar(), u_inv.drop_scalar()] * m, unitized=False)

    max_disc = 0.0
    h = fd_step
    for t in grid:
        lhs = m * eta_integrand(b_phi, model, m, float(t), evaluator=ev_b)
        rhs = (
            -pair_value(t + 2 * h)
            + 8 * pair_value(t + h)
            - 8 * pair_value(t - h)
            + pair_value(t - 2 * h)
        ) / (12 * h)
        max_disc = max(max_disc, abs(lhs - rhs))
    return PairingReport(
        invariant="transgression",
        value=max_disc,
        error=0.0,
        truncation=float(grid[-1]),
        tolerance=1e-6,
        checks={"max_discrepancy": max_disc, "fd_step": h, "passed": max_disc < 1e-6},
        provenance=_provenance(phi, model, {"m": m}),
    )


def verify_exact_cocycle(phi: Cochain) -> bool:
    """b phi = 0 on every tuple (finite groups, exact arithmetic)."""
    b_phi = cyclic_coboundary(phi)
    return all(not b_phi(t) for t in all_tuples(phi.group, phi.degree + 2))


def verify_s_invariance(
    phi: Cochain,
    model: SpectralModel,
    m: int,
    idempotents: Sequence[AlgebraElement] = (),
    tol: float = 1e-9,
) -> PairingReport:
    """eta and ch are unchanged when phi is replaced by S phi (computed at
    level m+1); the input must be an exact cocycle."""
    _check_even_degree(phi, m)
    if not verify_exact_cocycle(phi):
        raise ValueError("S-invariance needs an exact cocycle (b phi = 0)")
    s_phi = periodicity_S(phi).materialize(list(all_tuples(phi.group, 2 * m + 3)))
    eta_base = eta_invariant(phi, model, m, tol=tol)
    eta_s = eta_invariant(s_phi, model, m + 1, tol=tol)
    eta_diff = abs(eta_base.value - eta_s.value)
    checks: Dict[str, object] = {
        "eta_base": {"re": eta_base.value.real, "im": eta_base.value.imag},
        "eta_S": {"re": eta_s.value.real, "im": eta_s.value.imag},
        "eta_difference": eta_diff,
        "eta_passed": eta_diff < 1e-6,
    }
    ch_rows = []
    for i, p in enumerate(idempotents):
        ch_base = chern_character(phi, p, m)
        ch_s = chern_character(s_phi, p, m + 1)
        ch_rows.append(
            {
                "idempotent": i,
                "ch_base": {"re": ch_base.real, "im": ch_base.imag},
                "ch_S": {"re": ch_s.real, "im": ch_s.imag},
                "difference": abs(ch_base - ch_s),
                "passed": abs(ch_base - ch_s) < 1e-8,
            }
        )
    checks["chern"] = ch_rows
    passed = checks["eta_passed"] and all(r["passed"] for r in ch_rows)
    checks["passed"] = passed
    return PairingReport(
        invariant="s-invariance",
        value=eta_diff,
        error=eta_base.error + eta_s.error,
        truncation=max(eta_base.truncation, eta_s.truncation),
        tolerance=tol,
        checks=checks,
        provenance=_provenance(phi, model, {"m": m}),
    )


def verify_rho_eta(
    phi: Cochain, model: SpectralModel, m: int, tol: float = 1e-8
) -> PairingReport:
    """tau of the rho path against (-1)^m eta, for both path orientations;
    the matching orientation is flagged rather than assumed."""
    _check_even_degree(phi, m)
    path = rho_path(model)
    eta = eta_invariant(phi, model, m, tol=tol)
    target = ((-1) ** m) * eta.value
    tau_fwd = determinant_tau(phi, path, m, tol=tol)
    tau_rev = determinant_tau(phi, path.reversed_orientation(), m, tol=tol)
    d_fwd = abs(tau_fwd.value - target)
    d_rev = abs(tau_rev.value - target)
    matching = "as-constructed" if d_fwd <= d_rev else "reversed"
    tau_match = tau_fwd.value if d_fwd <= d_rev else tau_rev.value
    checks = {
        "eta": {"re": eta.value.real, "im": eta.value.imag},
        "target": {"re": target.real, "im": target.imag},
        "tau_as_constructed": {"re": tau_fwd.value.real, "im": tau_fwd.value.imag},
        "tau_reversed": {"re": tau_rev.value.real, "im": tau_rev.value.imag},
        "matching_orientation": matching,
        "difference": min(d_fwd, d_rev),
        "passed": min(d_fwd, d_rev) < 1e-6,
    }
    return PairingReport(
        invariant="rho-eta",
        value=tau_match,
        error=tau_fwd.error + eta.error,
        truncation=max(eta.truncation, tau_fwd.truncation),
        tolerance=tol,
        checks=checks,
        provenance=_provenance(phi, model, {"m": m}),
    )


def aps_model_check(
    phi: Cochain,
    p: AlgebraElement,
    model: SpectralModel,
    m: int,
    tol: float = 1e-9,
) -> PairingReport:
    """The composite index identity at model scale: with the connecting
    path of p standing in for the rho path,

        tau(connecting(p)) = -2 ch(p)   and   ch(p) = ((-1)^{m+1}/2) eta*

    where eta* = (-1)^m tau(connecting(p)) is the eta value the rho-path
    identity assigns to the stand-in."""
    _check_even_degree(phi, m)
    ch = chern_character(phi, p, m)
    tau = determinant_tau(phi, connecting_path(p), m, tol=tol)
    eta_standin = ((-1) ** m) * tau.value
    coef = ((-1) ** (m + 1)) / 2.0
    lhs = ch
    rhs = coef * eta_standin
    checks = {
        "ch": {"re": ch.real, "im": ch.imag},
        "tau_connecting": {"re": tau.value.real, "im": tau.value.imag},
        "tau_plus_2ch": abs(tau.value + 2 * ch),
        "eta_standin": {"re": eta_standin.real, "im": eta_standin.imag},
        "aps_coefficient": coef,
        "aps_difference": abs(lhs - rhs),
        "passed": abs(tau.value + 2 * ch) < 1e-8 and abs(lhs - rhs) < 1e-8,
    }
    return PairingReport(
        invariant="aps-model",
        value=ch,
        error=tau.error,
        truncation=tau.truncation,
        tolerance=tol,
        checks=checks,
        provenance=_provenance(phi, model, {"m": m}),
    )
