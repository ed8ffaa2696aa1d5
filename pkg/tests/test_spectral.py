import cmath
import json
import math
import random

import numpy as np
import pytest

from deloceta.cochains import trace_indicator
from deloceta.groups import CyclicGroup, FreeAbelianGroup
from deloceta.spectral import (
    AlgebraElement,
    GapError,
    ModelError,
    SpectrumFile,
    algebra_element_from_matrix,
    class_truncation_warning,
    delocalized_trace,
    eigendecompose,
    eta_path_u,
    extend_cocycle_eval,
    gauss_F,
    load_spectrum,
    regular_representation,
    u_dot_u_inv_scalar,
)


def _random_element(group, n, rng, herm=False):
    elems = list(group.elements())
    coeffs = {}
    for g in elems:
        m = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
        coeffs[g] = m
    a = AlgebraElement(group, n, coeffs)
    if herm:
        a = a + a.adjoint()
    return a


def test_regular_representation_examples():
    grp = CyclicGroup(2)
    unit = AlgebraElement.unit(grp, 1)
    assert np.allclose(regular_representation(grp, unit), np.eye(2))
    d = AlgebraElement.from_scalar_coeffs(grp, {0: 1.0, 1: 2.0})
    assert np.allclose(regular_representation(grp, d), [[1, 2], [2, 1]])


def test_representation_is_multiplicative_and_star():
    rng = np.random.default_rng(0)
    grp = CyclicGroup(3)
    a = _random_element(grp, 2, rng)
    b = _random_element(grp, 2, rng)
    ra, rb = regular_representation(grp, a), regular_representation(grp, b)
    assert np.abs(regular_representation(grp, a * b) - ra @ rb).max() < 1e-12
    assert np.abs(regular_representation(grp, a.adjoint()) - ra.conj().T).max() < 1e-12


def test_algebra_element_roundtrip_through_matrix():
    rng = np.random.default_rng(1)
    grp = CyclicGroup(3)
    a = _random_element(grp, 2, rng)
    back = algebra_element_from_matrix(grp, 2, regular_representation(grp, a))
    for g in grp.elements():
        assert np.abs(back.coeffs[g] - a.coeffs[g]).max() < 1e-12


def test_eigendecompose_worked_example(z2_model, z2_class):
    assert sorted(z2_model.eigenvalues) == [-1.0, 3.0]
    assert z2_model.gap == 1.0
    p3 = z2_model.projections[z2_model.eigenvalues.index(3.0)]
    assert np.allclose(p3.coeffs[0], 0.5, atol=1e-12)
    assert np.allclose(p3.coeffs[1], 0.5, atol=1e-12)
    mults = z2_model.delocalized_multiplicities(z2_class)
    assert abs(sum(mults)) < 1e-10  # unit has no class support
    assert abs(mults[z2_model.eigenvalues.index(3.0)] - 0.5) < 1e-12


def test_eigendecompose_scalar_model():
    grp = CyclicGroup(3)
    d = AlgebraElement.from_scalar_coeffs(grp, {0: 2.5})
    model = eigendecompose(d)
    assert model.eigenvalues == [2.5]
    assert np.allclose(
        regular_representation(grp, model.projections[0]), np.eye(3)
    )


def test_eigendecompose_rejects_non_hermitian():
    grp = CyclicGroup(3)
    d = AlgebraElement.from_scalar_coeffs(grp, {1: 1.0})
    with pytest.raises(ModelError):
        eigendecompose(d)


def test_projection_resolution_of_identity():
    rng = np.random.default_rng(2)
    grp = CyclicGroup(4)
    d = _random_element(grp, 2, rng, herm=True)
    model = eigendecompose(d)
    total = model.projections[0]
    for p in model.projections[1:]:
        total = total + p
    rep = regular_representation(grp, total)
    assert np.abs(rep - np.eye(8)).max() < 1e-10
    for i, p in enumerate(model.projections):
        for j, q in enumerate(model.projections):
            prod = regular_representation(grp, p * q)
            want = regular_representation(grp, p) if i == j else 0
            assert np.abs(prod - want).max() < 1e-10


def test_functional_calculus_examples(z2_model):
    d = z2_model.functional_calculus(lambda x: x)
    assert np.allclose(d.coeffs[0], 1.0) and np.allclose(d.coeffs[1], 2.0)
    unit = z2_model.functional_calculus(lambda x: 1.0)
    assert np.allclose(regular_representation(z2_model.group, unit), np.eye(2))
    f = z2_model.functional_calculus(lambda x: math.exp(-x * x))
    assert abs(f.coeffs[0].item() - (math.exp(-9) + math.exp(-1)) / 2) < 1e-12
    assert abs(f.coeffs[1].item() - (math.exp(-9) - math.exp(-1)) / 2) < 1e-12


def test_functional_calculus_multiplicative():
    rng = np.random.default_rng(3)
    grp = CyclicGroup(3)
    model = eigendecompose(_random_element(grp, 2, rng, herm=True))
    f = model.functional_calculus(math.cos)
    g = model.functional_calculus(math.sin)
    fg = model.functional_calculus(lambda x: math.cos(x) * math.sin(x))
    diff = regular_representation(grp, f * g) - regular_representation(grp, fg)
    assert np.abs(diff).max() < 1e-10


def test_delocalized_trace_examples(z2_class):
    grp = z2_class.group
    gamma_el = AlgebraElement.from_scalar_coeffs(grp, {1: 1.0})
    assert delocalized_trace(gamma_el, z2_class) == 1.0
    unit = AlgebraElement.unit(grp, 1)
    assert delocalized_trace(unit, z2_class) == 0.0
    half = AlgebraElement.from_scalar_coeffs(grp, {0: 0.5, 1: 0.5})
    assert delocalized_trace(half, z2_class) == 0.5


def test_delocalized_trace_is_tracial():
    rng = np.random.default_rng(4)
    grp = CyclicGroup(4)
    cl = grp.conjugacy_class(1, radius=4)
    a = _random_element(grp, 2, rng)
    b = _random_element(grp, 2, rng)
    assert abs(delocalized_trace(a * b, cl) - delocalized_trace(b * a, cl)) < 1e-10


def test_truncation_warning():
    from deloceta.groups import HeisenbergGroup

    grp = HeisenbergGroup()
    cl = grp.conjugacy_class((1, 0, 0), radius=1)
    far = AlgebraElement.from_scalar_coeffs(grp, {(1, 0, 7): 1.0})
    assert class_truncation_warning(far, cl)
    near = AlgebraElement.from_scalar_coeffs(grp, {(1, 0, 0): 1.0})
    assert not class_truncation_warning(near, cl)


# -- multilinear evaluation ------------------------------------------------------


def test_extend_eval_elementary_tensor(z2_class):
    # W_i = a_i tensor omega_i evaluates to tr(omega_0 omega_1) phi(a_0, a_1)
    grp = z2_class.group
    rng = np.random.default_rng(5)
    w0 = rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2))
    w1 = rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2))
    a0 = AlgebraElement(grp, 2, {0: w0})
    a1 = AlgebraElement(grp, 2, {1: w1})
    from deloceta.cochains import Cochain, FLAVOR_DELOCALIZED
    from deloceta.rational import QC

    phi = Cochain(
        grp, 1, FLAVOR_DELOCALIZED,
        entries={(0, 1): QC(3), (1, 0): QC(-3)}, cls=z2_class,
    )
    value = extend_cocycle_eval(phi, [a0, a1])
    assert abs(value - 3.0 * np.trace(w0 @ w1)) < 1e-10


def test_extend_eval_unit_slot_and_scalar(z2_class):
    grp = z2_class.group
    tr = trace_indicator(z2_class)
    pure_scalar = AlgebraElement(grp, 1, {}, 1.0)
    assert extend_cocycle_eval(tr, [pure_scalar]) == 0j
    half = AlgebraElement.from_scalar_coeffs(grp, {0: 0.5, 1: 0.5})
    assert abs(extend_cocycle_eval(tr, [half]) - 0.5) < 1e-12


def test_extend_eval_cyclic_shift_sign(z2_class):
    # cyclic invariance of phi + trace cyclicity: shifting the factors by
    # one position multiplies by the rotation sign (-1)^n
    grp = z2_class.group
    rng = np.random.default_rng(6)
    import random as pyrandom

    from deloceta.cochains import FLAVOR_DELOCALIZED, cyclic_symmetrize, random_cochain, all_tuples

    phi = cyclic_symmetrize(
        random_cochain(grp, 2, FLAVOR_DELOCALIZED, pyrandom.Random(7), cls=z2_class)
    ).materialize(list(all_tuples(grp, 3)))
    elems = [_random_element(grp, 2, rng) for _ in range(3)]
    lhs = extend_cocycle_eval(phi, [elems[2], elems[0], elems[1]])
    rhs = extend_cocycle_eval(phi, elems)
    assert abs(lhs - rhs) < 1e-10  # n = 2: sign +1


def test_extend_eval_infinite_group_sparse_path():
    grp = FreeAbelianGroup(1)
    cl = grp.conjugacy_class((2,), radius=4)
    tr = trace_indicator(cl)
    a = AlgebraElement.from_scalar_coeffs(grp, {(2,): 3.0, (0,): 1.0})
    assert abs(extend_cocycle_eval(tr, [a]) - 3.0) < 1e-12


# -- the normalizing-function path -----------------------------------------------


def test_gauss_F_values():
    assert abs(gauss_F(1.0, 0.0) - 0.5) < 1e-15
    assert gauss_F(9.0, 1.0) == pytest.approx(1.0, abs=1e-14)
    assert gauss_F(9.0, -1.0) == pytest.approx(0.0, abs=1e-14)


def test_eta_path_values(z2_model):
    u, u_inv, k = eta_path_u(z2_model, 1.0)
    # u_t(0) would be exp(pi i) = -1; probe through the scalar function
    assert cmath.exp(2j * math.pi * gauss_F(1.0, 0.0)) == pytest.approx(-1.0)
    assert u_dot_u_inv_scalar(1.0, 1.0) == pytest.approx(2j * math.sqrt(math.pi) * math.exp(-1))
    # u * u^{-1} = unit
    prod = u * u_inv
    assert abs(prod.scalar - 1.0) < 1e-12
    assert prod.norm_max() < 1e-12
    # large t: u -> unit on the positive eigenvalue
    u_large, _, _ = eta_path_u(z2_model, 50.0)
    assert u_large.norm_max() < 1e-10


def test_eta_path_derivative_cross_check(z2_model):
    h = 1e-5
    t = 0.8
    _, _, k = eta_path_u(z2_model, t)
    u_plus, _, _ = eta_path_u(z2_model, t + h)
    u_minus, _, _ = eta_path_u(z2_model, t - h)
    _, u_inv, _ = eta_path_u(z2_model, t)
    du = (u_plus - u_minus).scaled(1.0 / (2 * h))
    du.scalar = 0j
    approx = du * u_inv
    diff = approx - k
    assert diff.norm_max() < 1e-8 and abs(diff.scalar) < 1e-8


def test_gap_refusal():
    grp = CyclicGroup(2)
    d = AlgebraElement.from_scalar_coeffs(grp, {0: 1.0, 1: 1.0})  # eigenvalues 2, 0
    model = eigendecompose(d)
    with pytest.raises(GapError):
        eta_path_u(model, 1.0)


# -- spectrum files ---------------------------------------------------------------


def test_spectrum_roundtrip(tmp_path):
    spec = SpectrumFile(
        class_ids=["cl1"],
        modes=[(1.5, {"cl1": 0.5 + 0j}), (-2.0, {"cl1": -0.5 + 0j})],
        metadata={"source": "test"},
    )
    path = tmp_path / "spec.json"
    path.write_text(json.dumps(spec.to_json()))
    back = load_spectrum(str(path))
    assert back.to_json() == spec.to_json()
    assert back.sign_sum("cl1") == 1.0
    assert back.gap() == 1.5


def test_spectrum_zero_mode_rejected(tmp_path):
    doc = {"classes": ["c"], "modes": [{"lambda": 0.0, "mult": {"c": 1.0}}]}
    path = tmp_path / "bad.json"
    path.write_text(json.dumps(doc))
    load_spectrum(str(path))  # fine without eta mode
    with pytest.raises(ModelError):
        load_spectrum(str(path), eta_mode=True)


def test_empty_spectrum_is_valid():
    spec = SpectrumFile(class_ids=["c"], modes=[])
    spec.validate_for_eta()
    assert spec.sign_sum("c") == 0
