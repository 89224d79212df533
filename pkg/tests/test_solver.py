import math

import numpy as np
import pytest

from conftest import DISSIPATIVE, PP_CONSERVATIVE, PP_NONCONSERVATIVE, SELF_ADJOINT, UNSTABLE, gen, pp
from revival_lab.eigenbasis import eigen_pair, pairing
from revival_lab.errors import BadSpec
from revival_lab.revival import RationalTime
from revival_lab.solver import (
    FieldSample,
    TruncationPlan,
    default_grid,
    evaluate_residue,
    evaluate_series,
    series_coefficient,
    zeta_minus,
)
from revival_lab.spectrum import compute_spectrum

PLAN = TruncationPlan(2001)


def _sup(a, b):
    return float(np.max(np.abs(a.values - b.values)))


@pytest.mark.parametrize(
    "maker",
    [
        lambda: pp(**PP_NONCONSERVATIVE),
        lambda: pp(**PP_CONSERVATIVE),
        lambda: gen(**SELF_ADJOINT),
        lambda: gen(**DISSIPATIVE),
    ],
)
def test_series_equals_residue(maker, bump):
    bc = maker()
    for t in (0.05, RationalTime(2, 3)):
        s = evaluate_series(bc, bump, t, plan=PLAN)
        r = evaluate_residue(bc, bump, t, plan=PLAN)
        assert _sup(s, r) < 1e-8


def test_series_equals_residue_unstable(bump):
    # growing modes inflate the field; compare relative to its size
    bc = gen(**UNSTABLE)
    s = evaluate_series(bc, bump, 0.05, plan=PLAN)
    r = evaluate_residue(bc, bump, 0.05, plan=PLAN)
    assert _sup(s, r) < 1e-12 * max(1.0, np.max(np.abs(s.values)))


def test_initial_reconstruction(pp2, bump):
    x = default_grid(1.0, 257)
    u = evaluate_series(pp2, bump, 0.0, x, PLAN)
    np.testing.assert_allclose(u.values, bump(x), atol=1e-8)


def test_pde_residual_second_order(pp2, bump):
    # the truncated series solves u_t = i u_xx mode by mode, so the residual of a
    # centred difference scheme is pure discretisation error
    small = TruncationPlan(101)
    x0, t0 = 0.5, 0.07
    spec = compute_spectrum(pp2, 101)

    def u(t, xs):
        return evaluate_series(pp2, bump, t, np.asarray(xs), small, spec).values

    def residual(h):
        ut = (u(t0 + h, [x0]) - u(t0 - h, [x0])) / (2 * h)
        ux = u(t0, [x0 - h, x0, x0 + h])
        uxx = (ux[0] - 2 * ux[1] + ux[2]) / h**2
        return abs(ut[0] - 1j * uxx)

    r1, r2 = residual(4e-3), residual(2e-3)
    assert math.log2(r1 / r2) >= 1.9


def test_rational_and_float_times_agree(pp2, bump):
    rt = RationalTime(17, 3)
    a = evaluate_series(pp2, bump, rt, plan=PLAN)
    b = evaluate_series(pp2, bump, rt.t, plan=PLAN)
    assert _sup(a, b) < 1e-9
    assert a.meta["rational"] == "17/3"


def test_bitwise_reproducible(pp2, box):
    a = evaluate_series(pp2, box, 0.45, plan=PLAN)
    b = evaluate_series(pp2, box, 0.45, plan=PLAN)
    assert np.array_equal(a.values, b.values)


def test_series_coefficient_consistent(pp2, bump):
    spec = compute_spectrum(pp2, 11)
    c0 = series_coefficient(pp2, spec, bump, 0)
    # independent route: <u0, Y_0> / <X_0, Y_0> by adaptive quadrature
    k0 = spec.representatives(1)[1][0]
    X0, Y0 = eigen_pair(pp2, k0)
    ref = pairing(lambda x: bump(x), lambda x: Y0(x), 1.0) / pairing(X0, Y0, 1.0)
    assert c0 == pytest.approx(ref, abs=1e-12)
    assert c0 == pytest.approx(0.13759617773649518 + 0.07783615227426018j, abs=1e-13)
    with pytest.raises(BadSpec):
        series_coefficient(pp2, spec, bump, 999)


def test_plan_and_grid_validation(pp2, bump):
    with pytest.raises(BadSpec):
        TruncationPlan(2000)
    with pytest.raises(BadSpec):
        TruncationPlan(1)
    with pytest.raises(BadSpec):
        evaluate_series(pp2, bump, 0.1, np.array([0.0, 1.5]), PLAN)
    with pytest.raises(BadSpec):
        FieldSample(np.array([0.0, 0.5, 0.4]), np.zeros(3))
    with pytest.raises(BadSpec):
        zeta_minus(gen(**SELF_ADJOINT), bump, 1.0)


def test_meta_contents(robin, bump):
    f = evaluate_residue(robin, bump, 0.1, plan=TruncationPlan(201), datum={"kind": "polybump"})
    assert f.meta["method"] == "Residue"
    assert f.meta["nterms"] == 201
    assert f.meta["bc"]["betas"]["beta11"] == [-2.0, 0.0]
    assert f.to_json()["meta"]["datum"] == {"kind": "polybump"}
