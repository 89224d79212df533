import numpy as np
import pytest

from conftest import PP_NONCONSERVATIVE, SELF_ADJOINT, UNSTABLE, gen, pp
from revival_lab.eigenbasis import (
    PAIRING,
    ExpCombo,
    _pp_coeffs,
    biorthogonality_constant,
    dual_eigenfunction,
    eigen_pair,
    eigenfunction,
    gen_coeffs,
    pairing,
    pp_constants,
    quad_complex,
)
from revival_lab.errors import BadSpec, QuadratureFailure
from revival_lab.spectrum import compute_spectrum


def _derivative(f, x, h=1e-5):
    return (f(x + h) - f(x - h)) / (2 * h)


def _boundary_residual(bc, X):
    L = bc.L
    vec = np.array([_derivative(X, L), X(L), _derivative(X, 0.0), X(0.0)])
    return np.abs(np.array(bc.coefficient_rows(), dtype=complex) @ vec)


def test_pp_constants_frozen(pp2, pp5):
    c = pp_constants(pp2)
    assert c.gamma == pytest.approx(0.6363636363636362 + 0.7713892158398701j, abs=1e-15)
    assert c.delta == pytest.approx(0.9393939393939393 + 0.34283965148438655j, abs=1e-15)
    assert c.tau == pytest.approx(1.7777777777777777 - 0.6285393610547092j, abs=1e-14)
    # |delta| = 1 and tau = 2 when conj(beta0) beta1 = 1
    c5 = pp_constants(pp5)
    assert abs(c5.delta) == pytest.approx(1.0, abs=1e-14)
    assert c5.tau == pytest.approx(2.0, abs=1e-14)


def test_dual_weight_equals_delta(pp2):
    # the dual coefficient is independent of j and coincides with delta
    c = pp_constants(pp2)
    for j in (0, 3, -7):
        _, d = _pp_coeffs(pp2, c.kappa0 + 2 * np.pi * j)
        assert d == pytest.approx(c.delta, abs=1e-13)


@pytest.mark.parametrize("maker", [lambda: pp(**PP_NONCONSERVATIVE), lambda: gen(**SELF_ADJOINT), lambda: gen(**UNSTABLE)])
def test_eigenfunctions_satisfy_conditions(maker):
    bc = maker()
    _, kap, _ = compute_spectrum(bc, 8).representatives(5)
    for k in kap:
        X, _ = eigen_pair(bc, k)
        scale = max(1.0, abs(k))
        assert np.all(_boundary_residual(bc, X) < 1e-7 * scale**2)
        # X'' = -k^2 X
        x = np.array([0.2, 0.55])
        h = 1e-4
        d2 = (X(x + h) - 2 * X(x) + X(x - h)) / h**2
        np.testing.assert_allclose(d2, -k * k * X(x), rtol=1e-5, atol=1e-6)


@pytest.mark.parametrize("maker", [lambda: pp(**PP_NONCONSERVATIVE), lambda: gen(**SELF_ADJOINT)])
def test_biorthogonality_matrix(maker):
    bc = maker()
    _, kap, _ = compute_spectrum(bc, 21).representatives(21)
    pairs = [eigen_pair(bc, k) for k in kap]
    G = np.array([[pairing(X, Yk, bc.L) for _, Yk in pairs] for X, _ in pairs])
    off = G - np.diag(np.diag(G))
    assert np.max(np.abs(off)) < 1e-8
    taus = np.array([biorthogonality_constant(bc, k) for k in kap])
    assert np.max(np.abs(np.diag(G) - taus)) < 1e-8


def test_tau_j_frozen(selfadjoint):
    _, kap, _ = compute_spectrum(selfadjoint, 5).representatives(3)
    assert kap[0].real == pytest.approx(2.01284669, abs=1e-8)
    c = gen_coeffs(selfadjoint, kap[0])
    assert c.tauj == pytest.approx(2.0464157802356975, abs=1e-12)
    assert c.b1 == pytest.approx(-0.9247776252159515 - 0.3805080076686236j, abs=1e-12)
    # self-adjoint data: the dual coefficient is the conjugate of b1
    assert c.b2bar == pytest.approx(np.conj(c.b1), abs=1e-12)


def test_closed_form_pairing_matches_quadrature(pp2):
    assert PAIRING == "sesquilinear"
    _, kap, _ = compute_spectrum(pp2, 5).representatives(3)
    X0, Y0 = eigen_pair(pp2, kap[0])
    X1, Y1 = eigen_pair(pp2, kap[1])
    fx = lambda x: eigenfunction(pp2, kap[0], x)
    gy = lambda x: dual_eigenfunction(pp2, kap[0], x)
    assert pairing(fx, gy, 1.0) == pytest.approx(pairing(X0, Y0, 1.0), abs=1e-12)
    assert pairing(X0, Y0, 1.0) == pytest.approx(pp_constants(pp2).tau, abs=1e-13)
    assert abs(pairing(lambda x: X1(x), lambda x: Y0(x), 1.0)) < 1e-12


def test_exp_combo_conj():
    f = ExpCombo([1 + 1j], [2.0 + 0.5j])
    x = np.linspace(0, 1, 5)
    np.testing.assert_allclose(f.conj()(x), np.conj(f(x)))


def test_quadrature_failure():
    with pytest.raises(QuadratureFailure):
        quad_complex(lambda x: np.sign(np.sin(1e5 * x)) * (1 + 0j), 0.0, 1.0)


def test_wrong_variant():
    with pytest.raises(BadSpec):
        gen_coeffs(pp(0.2, 2), 1.0)
    with pytest.raises(BadSpec):
        pp_constants(gen(**SELF_ADJOINT))
