import math
import random
from fractions import Fraction

import numpy as np
import pytest

from deloceta.cochains import (
    FLAVOR_DELOCALIZED,
    Cochain,
    ExactAlgebraElement,
    all_tuples,
    b_after_beta,
    beta_after_b,
    cyclic_coboundary,
    cyclic_symmetrize,
    evaluate_multilinear,
    periodicity_S,
    random_cochain,
    trace_indicator,
)
from deloceta.groups import CyclicGroup
from deloceta.pairings import (
    DegreeError,
    InvertiblePath,
    aps_model_check,
    chern_character,
    connecting_path,
    determinant_tau,
    eta_from_spectrum,
    eta_integrand,
    eta_invariant,
    eta_sign_sum,
    rho_path,
    verify_exact_cocycle,
    verify_rho_eta,
    verify_s_invariance,
    verify_transgression,
)
from deloceta.quadrature import adaptive_quad
from deloceta.rational import QC
from deloceta.spectral import AlgebraElement, SpectrumFile, eigendecompose, GapError


def _random_model(group, n, rng, shift=0.75):
    elems = list(group.elements())
    coeffs = {}
    for g in elems:
        m = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
        coeffs[g] = m
    a = AlgebraElement(group, n, coeffs)
    a = a + a.adjoint()
    base = eigendecompose(a)
    pushed = base.functional_calculus(lambda x: x + shift if x >= 0 else x - shift)
    return eigendecompose(pushed)


# -- quadrature ----------------------------------------------------------------


def test_adaptive_quad_gaussian():
    res = adaptive_quad(lambda t: math.exp(-t * t), 0.0, 6.0, tol=1e-12)
    assert abs(res.value - math.sqrt(math.pi) / 2) < 1e-12
    assert res.error < 1e-12


def test_adaptive_quad_deterministic():
    f = lambda t: math.sin(3 * t) * math.exp(-t)
    a = adaptive_quad(f, 0.0, 5.0, tol=1e-10)
    b = adaptive_quad(f, 0.0, 5.0, tol=1e-10)
    assert a.value == b.value and a.panels == b.panels


# -- eta -------------------------------------------------------------------------


def test_eta_integrand_worked_value(z2_model, z2_class):
    tr = trace_indicator(z2_class)
    value = eta_integrand(tr, z2_model, 0, 1.0)
    expected = 2j * math.sqrt(math.pi) * (3 * math.exp(-9) + math.exp(-1)) / 2
    assert abs(value - expected) < 1e-12


def test_eta_integrand_degree_mismatch(z2_model, z2_class):
    with pytest.raises(DegreeError):
        eta_integrand(trace_indicator(z2_class), z2_model, 1, 1.0)


def test_eta_worked_example(z2_model, z2_class):
    report = eta_invariant(trace_indicator(z2_class), z2_model, 0, tol=1e-9)
    assert abs(report.value - 1.0) < 1e-8
    assert report.error < 1e-8
    assert abs(eta_sign_sum(z2_model, z2_class) - 1.0) < 1e-10


def test_eta_scalar_model_vanishes():
    grp = CyclicGroup(3)
    cl = grp.conjugacy_class(1, radius=3)
    model = eigendecompose(AlgebraElement.from_scalar_coeffs(grp, {0: 2.0}))
    report = eta_invariant(trace_indicator(cl), model, 0, tol=1e-9)
    assert abs(report.value) < 1e-12


def test_eta_coefficient_normalization():
    # m!/(pi i) * 2 i sqrt(pi) = 2/sqrt(pi) at m = 0
    coef = math.factorial(0) / (math.pi * 1j) * 2j * math.sqrt(math.pi)
    assert abs(coef - 2 / math.sqrt(math.pi)) < 1e-15


def test_eta_matches_sign_sum_on_random_models():
    rng = np.random.default_rng(42)
    for k, n in [(2, 1), (3, 2), (4, 1), (6, 2)]:
        grp = CyclicGroup(k)
        cl = grp.conjugacy_class(1, radius=k)
        model = _random_model(grp, n, rng)
        assert model.gap >= 0.5
        report = eta_invariant(trace_indicator(cl), model, 0, tol=1e-9)
        oracle = eta_sign_sum(model, cl)
        assert abs(report.value - oracle) < 1e-8


def test_eta_integrand_gaussian_decay(z2_model, z2_class):
    tr = trace_indicator(z2_class)
    c = abs(eta_integrand(tr, z2_model, 0, 0.0))
    gap = z2_model.gap
    for t in (1.0, 1.5, 2.0, 3.0):
        bound = (c + 1.0) * math.exp(-(t * t - 1) * gap * gap / 2)
        assert abs(eta_integrand(tr, z2_model, 0, t)) <= bound


def test_eta_from_spectrum_file():
    spec = SpectrumFile(
        class_ids=["c"], modes=[(3.0, {"c": 0.5}), (-1.0, {"c": -0.5})]
    )
    report = eta_from_spectrum(spec, "c", tol=1e-9)
    assert abs(report.value - 1.0) < 1e-8


# -- representative independence ---------------------------------------------------


def test_eta_representative_independence(z2_model, z2_class):
    # phi has even degree 2m; coboundaries b psi shift it within its class
    # (m = 1: psi of degree 1)
    grp = z2_model.group
    phi = periodicity_S(trace_indicator(z2_class)).materialize(list(all_tuples(grp, 3)))
    base = eta_invariant(phi, z2_model, 1, tol=1e-9)
    rng = random.Random(23)
    for seed in range(3):
        rng.seed(seed)
        psi = cyclic_symmetrize(
            random_cochain(grp, 1, FLAVOR_DELOCALIZED, rng, cls=z2_class)
        ).materialize(list(all_tuples(grp, 2)))
        shifted = (phi + cyclic_coboundary(psi)).materialize(list(all_tuples(grp, 3)))
        moved = eta_invariant(shifted, z2_model, 1, tol=1e-9)
        assert abs(base.value - moved.value) < 1e-6


# -- tau -----------------------------------------------------------------------------


def test_tau_constant_unit_path_is_zero(z2_model, z2_class):
    grp = z2_model.group
    unit = AlgebraElement(grp, 1, {}, 1.0)
    grid = np.linspace(0.0, 1.0, 9)
    path = InvertiblePath(
        group=grp, n=1, grid=grid, samples=[unit for _ in grid], kind="none"
    )
    path.validate()
    report = determinant_tau(trace_indicator(z2_class), path, 0, tol=1e-8)
    assert abs(report.value) < 1e-12


def test_tau_connecting_closed_form(z2_model, z2_class):
    p = z2_model.projections[z2_model.eigenvalues.index(3.0)]
    report = determinant_tau(trace_indicator(z2_class), connecting_path(p), 0)
    assert abs(report.value - (-1.0)) < 1e-10


def test_tau_connecting_on_grid_matches_analytic(z2_model, z2_class):
    # the same path integrated from samples alone (finite differences)
    p = z2_model.projections[z2_model.eigenvalues.index(3.0)]
    analytic = connecting_path(p, grid_points=65)
    grid_only = InvertiblePath(
        group=z2_model.group, n=1, grid=analytic.grid,
        samples=list(analytic.samples), kind="none",
    )
    grid_only.validate()
    tr = trace_indicator(z2_class)
    a = determinant_tau(tr, analytic, 0)
    b = determinant_tau(tr, grid_only, 0)
    assert abs(a.value - b.value) < 1e-4


def test_tau_representative_independence(z2_model, z2_class):
    grp = z2_model.group
    phi = periodicity_S(trace_indicator(z2_class)).materialize(list(all_tuples(grp, 3)))
    p = z2_model.projections[z2_model.eigenvalues.index(3.0)]
    path = connecting_path(p)
    rng = random.Random(29)
    psi = cyclic_symmetrize(
        random_cochain(grp, 1, FLAVOR_DELOCALIZED, rng, cls=z2_class)
    ).materialize(list(all_tuples(grp, 2)))
    shifted = (phi + cyclic_coboundary(psi)).materialize(list(all_tuples(grp, 3)))
    a = determinant_tau(phi, path, 1)
    b = determinant_tau(shifted, path, 1)
    assert abs(a.value - b.value) < 1e-6


def test_path_invariant_rejects_singular():
    grp = CyclicGroup(2)
    zero = AlgebraElement(grp, 1, {}, 0.0)
    grid = np.linspace(0.0, 1.0, 3)
    unit = AlgebraElement(grp, 1, {}, 1.0)
    path = InvertiblePath(group=grp, n=1, grid=grid, samples=[unit, zero, unit])
    with pytest.raises(ValueError):
        path.validate()
    bad_start = InvertiblePath(group=grp, n=1, grid=grid, samples=[zero, unit, unit])
    with pytest.raises(ValueError):
        bad_start.validate()


# -- Chern character -----------------------------------------------------------------


def test_chern_examples(z2_model, z2_class):
    tr = trace_indicator(z2_class)
    zero = AlgebraElement(z2_model.group, 1, {}, 0.0)
    assert chern_character(tr, zero, 0) == 0
    p = z2_model.projections[z2_model.eigenvalues.index(3.0)]
    assert abs(chern_character(tr, p, 0) - 0.5) < 1e-12
    assert ((-1) ** 1) * math.factorial(2) / math.factorial(1) == -2  # m = 1 coefficient


def test_chern_rejects_non_idempotent(z2_model, z2_class):
    d = z2_model.element
    with pytest.raises(ValueError):
        chern_character(trace_indicator(z2_class), d, 0)


def test_chern_vanishes_on_coboundaries_exactly(z2_class):
    # exact rational evaluation of ch_{b psi}(p) for the rational idempotent
    grp = z2_class.group
    rng = random.Random(31)
    psi = cyclic_symmetrize(
        random_cochain(grp, 1, FLAVOR_DELOCALIZED, rng, cls=z2_class)
    ).materialize(list(all_tuples(grp, 2)))
    b_psi = cyclic_coboundary(psi).materialize(list(all_tuples(grp, 3)))
    p = ExactAlgebraElement(grp, {0: QC(Fraction(1, 2)), 1: QC(Fraction(1, 2))})
    assert evaluate_multilinear(b_psi, [p, p, p]) == QC(0)


def test_chern_homotopy_invariance(z2_model, z2_class):
    # conjugate the projection along a unitary path; ch is constant
    grp = z2_model.group
    tr = trace_indicator(z2_class)
    p = z2_model.projections[z2_model.eigenvalues.index(3.0)]
    values = []
    for s in (0.0, 0.3, 0.7, 1.0):
        u = z2_model.functional_calculus(lambda x: np.exp(1j * s * x))
        u_inv = z2_model.functional_calculus(lambda x: np.exp(-1j * s * x))
        values.append(chern_character(tr, (u * p) * u_inv, 0))
    assert max(abs(v - values[0]) for v in values) < 1e-8


# -- connecting path and the index identity ---------------------------------------


def test_connecting_path_endpoints(z2_model):
    p = z2_model.projections[z2_model.eigenvalues.index(3.0)]
    path = connecting_path(p)
    path.validate()
    w0, w1 = path.w_fn(0.0), path.w_fn(1.0)
    assert w0.norm_max() < 1e-12 and abs(w0.scalar - 1) < 1e-12
    assert w1.norm_max() < 1e-12 and abs(w1.scalar - 1) < 1e-12


def test_lemma_tau_equals_minus_two_ch(z2_model, z2_class):
    rng = np.random.default_rng(7)
    tr = trace_indicator(z2_class)
    for n in (1, 2):
        model = _random_model(z2_model.group, n, rng)
        for j, p in enumerate(model.projections):
            tau = determinant_tau(tr, connecting_path(p), 0)
            ch = chern_character(tr, p, 0)
            assert abs(tau.value + 2 * ch) < 1e-8


def test_aps_model_check(z2_model, z2_class):
    tr = trace_indicator(z2_class)
    p = z2_model.projections[z2_model.eigenvalues.index(3.0)]
    report = aps_model_check(tr, p, z2_model, 0)
    assert report.checks["passed"]
    assert report.checks["aps_coefficient"] == -0.5
    assert abs(report.checks["tau_connecting"]["re"] - (-1.0)) < 1e-9
    assert abs(report.value - 0.5) < 1e-9  # ch
    # required eta for consistency is -1
    assert abs(report.checks["eta_standin"]["re"] - (-1.0)) < 1e-9


# -- rho path ---------------------------------------------------------------------


def test_rho_path_limits(z2_model):
    path = rho_path(z2_model)
    path.validate()
    small = path.w_fn(z2_model.gap / 8.0)
    assert small.norm_max() < 1e-8  # within 1e-8 of the unit below the gap threshold
    large = path.w_fn(1e8)  # F -> 1/2, so U -> exp(pi i) = -unit at rate O(1/t)
    e = z2_model.group.identity()
    assert abs(large.coeffs[e].item() + 2.0) < 1e-6
    assert abs(large.scalar - 1.0) < 1e-12


def test_rho_eta_identity_m0(z2_model, z2_class):
    report = verify_rho_eta(trace_indicator(z2_class), z2_model, 0)
    assert report.checks["passed"]
    assert report.checks["matching_orientation"] == "reversed"
    assert abs(report.value - 1.0) < 1e-6


def test_rho_eta_identity_m1(z2_model, z2_class):
    grp = z2_model.group
    s_tr = periodicity_S(trace_indicator(z2_class)).materialize(list(all_tuples(grp, 3)))
    report = verify_rho_eta(s_tr, z2_model, 1)
    assert report.checks["passed"]
    assert report.checks["matching_orientation"] == "as-constructed"


def test_rho_path_needs_gap():
    grp = CyclicGroup(2)
    d = AlgebraElement.from_scalar_coeffs(grp, {0: 1.0, 1: 1.0})
    with pytest.raises(GapError):
        rho_path(eigendecompose(d))


# -- transgression -----------------------------------------------------------------


def test_transgression_zero_cochain(z2_model):
    grp = z2_model.group
    zero = Cochain(grp, 1, FLAVOR_DELOCALIZED, entries={}, cls=grp.conjugacy_class(1, 2))
    report = verify_transgression(zero, z2_model, 1)
    assert report.checks["max_discrepancy"] == 0.0


def test_transgression_random_skew(z2_model, z2_class):
    grp = z2_model.group
    rng = random.Random(37)
    phi = cyclic_symmetrize(
        random_cochain(grp, 1, FLAVOR_DELOCALIZED, rng, cls=z2_class)
    ).materialize(list(all_tuples(grp, 2)))
    report = verify_transgression(phi, z2_model, 1)
    assert report.checks["max_discrepancy"] < 1e-6
    # consequence: eta of the coboundary vanishes
    b_phi = cyclic_coboundary(phi).materialize(list(all_tuples(grp, 3)))
    eta_b = eta_invariant(b_phi, z2_model, 1, tol=1e-9)
    assert abs(eta_b.value) < 1e-6


# -- S-invariance -------------------------------------------------------------------


def test_s_invariance_z2_and_z3(z2_model, z2_class):
    tr = trace_indicator(z2_class)
    p = z2_model.projections[z2_model.eigenvalues.index(3.0)]
    report = verify_s_invariance(tr, z2_model, 0, idempotents=[p])
    assert report.checks["passed"]
    assert report.checks["eta_difference"] < 1e-6

    grp3 = CyclicGroup(3)
    cl3 = grp3.conjugacy_class(1, radius=3)
    rng = np.random.default_rng(11)
    model3 = _random_model(grp3, 1, rng)
    report3 = verify_s_invariance(trace_indicator(cl3), model3, 0)
    assert report3.checks["passed"]


def test_s_invariance_rejects_non_cocycle(z2_model, z2_class):
    grp = z2_model.group
    non_cocycle = Cochain(
        grp, 2, FLAVOR_DELOCALIZED, entries={(0, 0, 1): QC(1)}, cls=z2_class
    )
    assert not verify_exact_cocycle(non_cocycle)
    with pytest.raises(ValueError):
        verify_s_invariance(non_cocycle, z2_model, 1)


def test_prop_cd2_exact_relations(z2_class):
    # beta(b phi)(p x p x p) = 0 and b(beta phi)(p x p x p) = -(m+1) phi(p),
    # evaluated in exact rational arithmetic
    grp = z2_class.group
    tr = trace_indicator(z2_class)
    p = ExactAlgebraElement(grp, {0: QC(Fraction(1, 2)), 1: QC(Fraction(1, 2))})
    bb = beta_after_b(tr).materialize(list(all_tuples(grp, 3)))
    assert evaluate_multilinear(bb, [p, p, p]) == QC(0)
    b_beta_tr = b_after_beta(tr).materialize(list(all_tuples(grp, 3)))
    phi_p = evaluate_multilinear(tr, [p])
    assert evaluate_multilinear(b_beta_tr, [p, p, p]) == -phi_p


def test_schwartz_decay_prop(z2_model, z2_class):
    # a Schwartz function exponentially flat at 0: values decay below 1e-6
    # along t = 1, 1/2, 1/4, 1/8
    tr = trace_indicator(z2_class)

    def flat(x: float) -> float:
        if x == 0:
            return 0.0
        return math.exp(-x * x - 1.0 / (x * x * x * x))

    from deloceta.spectral import extend_cocycle_eval

    values = []
    for t in (1.0, 0.5, 0.25, 0.125):
        f_td = z2_model.functional_calculus(lambda x: flat(t * x))
        values.append(abs(extend_cocycle_eval(tr, [f_td])))
    assert all(values[i + 1] < values[i] for i in range(3))
    assert values[-1] < 1e-6


def test_m_cap_and_infinite_order_refused(z2_model, z2_class):
    from deloceta.groups import FreeAbelianGroup

    tr = trace_indicator(z2_class)
    with pytest.raises(DegreeError):
        eta_invariant(Cochain(z2_model.group, 6, FLAVOR_DELOCALIZED, entries={},
                              cls=z2_class), z2_model, 3)
    grp = FreeAbelianGroup(1)
    cl_inf = grp.conjugacy_class((1,), radius=3)
    phi = trace_indicator(cl_inf)
    with pytest.raises(DegreeError):
        eta_invariant(phi, z2_model, 0)


def test_quadrature_plateau_raises():
    from deloceta.quadrature import QuadratureError, adaptive_quad

    def jagged(t: float) -> complex:
        return math.copysign(1.0, math.sin(5e8 * t))

    with pytest.raises(QuadratureError):
        adaptive_quad(jagged, 0.0, 1.0, tol=1e-14, max_depth=6)
