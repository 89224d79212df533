import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import DISSIPATIVE, ROBIN_DIRICHLET_IMAG, SELF_ADJOINT, UNSTABLE, gen, pp
from revival_lab.errors import BadSpec, IllPosed
from revival_lab.spectrum import (
    COMPLEX_QUADRANT,
    IMAG_DOWN,
    IMAG_UP,
    RESIDUAL_TOL,
    BoundaryConditions,
    asymptotic_root,
    classify,
    classify_modes,
    compute_spectrum,
    count_zeros,
    discriminant,
    discriminant_derivative,
    kappa0,
)


def _bisect(f, a, b, tol=1e-15):
    fa = f(a)
    for _ in range(200):
        m = 0.5 * (a + b)
        fm = f(m)
        if (fm > 0) == (fa > 0):
            a, fa = m, fm
        else:
            b = m
        if b - a < tol:
            break
    return 0.5 * (a + b)


def test_robin_dirichlet_matches_bisection(robin):
    # u(0) = 0 and u(1) = 2 u'(1) give sin k = 2 k cos k, i.e. tan k = 2k
    f = lambda k: math.sin(k) - 2 * k * math.cos(k)
    brackets = [(0.5, 1.5), (4.0, 4.7), (7.0, 7.85), (10.0, 10.99)]
    expected = [_bisect(f, a, b) for a, b in brackets]
    _, kap, _ = compute_spectrum(robin, 10).representatives(4)
    np.testing.assert_allclose(kap.real, expected, atol=1e-12)
    assert np.max(np.abs(kap.imag)) < 1e-12
    assert kap[0].real == pytest.approx(1.16556119, abs=1e-8)


def test_pseudoperiodic_closed_form(pp2):
    spec = compute_spectrum(pp2, 11)
    k0 = kappa0(pp2)
    assert k0.real == pytest.approx(0.8810213260093971, rel=1e-14)
    idx, kap, _ = spec.representatives(11)
    np.testing.assert_allclose(kap, k0 + 2 * np.pi * idx, atol=1e-13)
    assert list(idx[:5]) == [0, 1, -1, 2, -2]


def test_kappa0_energy_conserving(pp5):
    assert pp5.energy_conserving
    # cos(kappa0) = (1 + b0 b1) / (b0 + b1) = 2 / 5.2
    assert math.cos(kappa0(pp5).real) == pytest.approx(2 / 5.2, rel=1e-14)


def test_ill_posed_pseudoperiodic():
    with pytest.raises(IllPosed):
        compute_spectrum(pp(2, 3), 5)


def test_bad_inputs():
    with pytest.raises(BadSpec):
        pp(1, -1)
    with pytest.raises(BadSpec):
        BoundaryConditions.general(1.0, beta11=1, beta12=0, beta22=0)
    with pytest.raises(BadSpec):
        BoundaryConditions.general(1.0, beta99=1)
    with pytest.raises(BadSpec):
        compute_spectrum(pp(0.2, 2), 0)


def test_roots_certified_residual():
    for betas in (SELF_ADJOINT, UNSTABLE, DISSIPATIVE):
        bc = gen(**betas)
        spec = compute_spectrum(bc, 30)
        res = np.abs(discriminant(bc, spec.kappa))
        assert np.all(res < RESIDUAL_TOL * np.maximum(1.0, np.abs(spec.kappa) ** 2))


def test_derivative_matches_finite_difference(selfadjoint):
    k = np.array([1.3 + 0.2j, 4.1 - 0.7j, 9.0 + 0j])
    h = 1e-6
    fd = (discriminant(selfadjoint, k + h) - discriminant(selfadjoint, k - h)) / (2 * h)
    np.testing.assert_allclose(discriminant_derivative(selfadjoint, k), fd, rtol=1e-7)


def test_unstable_low_lying_classes():
    spec = compute_spectrum(gen(**UNSTABLE), 20)
    tags = list(spec.tags)
    assert tags.count(IMAG_UP) + tags.count(IMAG_DOWN) == 2
    assert tags.count(COMPLEX_QUADRANT) == 12
    report = classify_modes(spec)
    assert report.growing > 0 and report.decaying > 0


def test_robin_imaginary_pair():
    spec = compute_spectrum(gen(**ROBIN_DIRICHLET_IMAG), 20)
    imag = spec.kappa[[t in (IMAG_UP, IMAG_DOWN) for t in spec.tags]]
    assert len(imag) == 2
    assert abs(imag[0]) == pytest.approx(1.18376, abs=1e-5)


def test_dissipative_quadrants():
    spec = compute_spectrum(gen(**DISSIPATIVE), 64)
    assert np.all(spec.kappa.real * spec.kappa.imag < 0)
    assert classify_modes(spec).growing == 0


def test_classify_tags():
    assert classify(3.0) == "RealPositive"
    assert classify(-3.0) == "RealNegative"
    assert classify(2j) == IMAG_UP
    assert classify(-2j) == IMAG_DOWN
    assert classify(1 + 1j) == COMPLEX_QUADRANT


def test_count_zeros_matches_emitted(selfadjoint):
    spec = compute_spectrum(selfadjoint, 20)
    corners = (0.5, 12.0, -3.0, 3.0)
    inside = [k for k in spec.kappa if 0.5 < k.real < 12.0 and -3 < k.imag < 3]
    assert count_zeros(selfadjoint, corners) == len(inside)


def test_count_zeros_long_thin_strip():
    # a wide strip below the roots: sparse edge sampling used to alias a 2*pi turn
    bc = gen(**UNSTABLE)
    assert count_zeros(bc, (-137.174, 129.035, -7.725, -7.083), include_origin=False) == 0
    assert count_zeros(bc, (-137.174, 129.035, -6.0, -5.0), include_origin=False) == 1


@pytest.mark.parametrize("betas", [dict(beta11=-2, beta12=1, beta24=1), ROBIN_DIRICHLET_IMAG, SELF_ADJOINT])
def test_asymptotic_distance_non_increasing(betas):
    bc = gen(**betas)
    reps = compute_spectrum(bc, 40).representatives()[1]
    dist = [min(abs(reps - asymptotic_root(bc, j))) for j in range(3, 11)]
    assert all(a >= b for a, b in zip(dist, dist[1:]))


def test_asymptotic_convergence_unstable():
    # nonzero leading coefficient: roots approach j*pi, separately along even and odd j
    bc = gen(**UNSTABLE)
    assert asymptotic_root(bc, 3) == pytest.approx(3 * math.pi)
    reps = compute_spectrum(bc, 60).representatives()[1]
    dist = [min(abs(reps - asymptotic_root(bc, j))) for j in range(3, 17)]
    for d in (dist[0::2], dist[1::2]):
        assert all(a > b for a, b in zip(d, d[1:]))


def test_spectrum_is_cached(selfadjoint):
    assert compute_spectrum(selfadjoint, 15) is compute_spectrum(selfadjoint, 15)


def test_spectrum_json_roundtrip(pp2):
    js = compute_spectrum(pp2, 5).to_json()
    assert js["variant"] == "pseudoperiodic"
    assert sum(js["classCounts"].values()) == len(js["roots"])


@settings(max_examples=25, deadline=None)
@given(st.floats(0.05, 0.9), st.floats(1.2, 8.0))
def test_pp_roots_are_zeros(b0, b1):
    bc = pp(b0, b1)
    try:
        spec = compute_spectrum(bc, 9)
    except IllPosed:
        return
    res = np.abs(discriminant(bc, spec.kappa))
    assert np.all(res < RESIDUAL_TOL * np.maximum(1.0, np.abs(spec.kappa) ** 2))
