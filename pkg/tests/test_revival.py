import cmath
import math

import numpy as np
import pytest

from conftest import SELF_ADJOINT, gen
from revival_lab import revival
from revival_lab.eigenbasis import pp_constants
from revival_lab.errors import BadSpec, NotRational
from revival_lab.piecewise import RampSpec, bounded_ft, make_datum
from revival_lab.revival import (
    EVEN,
    ODD_ODD,
    RationalTime,
    build_phi_psi,
    build_plan,
    copy_supports,
    evaluate_plan,
    evaluate_revival,
    gauss_sum,
    parity_branch,
    revival_shift,
)
from revival_lab.solver import TruncationPlan, default_grid, evaluate_series

GRID = default_grid(1.0, 1024)


def test_rational_time_parsing():
    rt = RationalTime.parse("18/2")
    assert (rt.p, rt.q) == (9, 1)
    assert rt.tag == "9_over_1"
    assert RationalTime(17, 3).t == pytest.approx(17 / (12 * math.pi))
    with pytest.raises(BadSpec):
        RationalTime(2, 4)
    with pytest.raises(BadSpec):
        RationalTime.parse("1/0")
    with pytest.raises(NotRational):
        RationalTime(1.5, 2)


def test_gauss_sum_direct():
    for p, q in [(1, 2), (3, 5), (4, 7), (5, 6)]:
        for m in range(q):
            direct = sum(cmath.exp(1j * math.pi * (-2 * n * m - p * n * n) / q) for n in range(q))
            assert gauss_sum(p, q, m, -1) == pytest.approx(direct, abs=1e-12)


@pytest.mark.parametrize("p,q", [(1, 2), (3, 4), (2, 3), (2, 5), (1, 6)])
def test_gauss_sum_modulus(p, q):
    # |sum_{n<q} exp(-i pi p n^2 / q)| = sqrt(q) whenever pq is even
    assert abs(gauss_sum(p, q, 0, -1)) == pytest.approx(math.sqrt(q), abs=1e-12)


def test_parity_branch():
    assert parity_branch(1, 1) == ODD_ODD
    assert parity_branch(3, 5) == ODD_ODD
    assert parity_branch(1, 2) == EVEN
    assert parity_branch(2, 3) == EVEN


def test_shift_and_phase(pp2):
    k0 = pp_constants(pp2).kappa0.real
    s, c = revival_shift(RationalTime(3, 2), pp_constants(pp2))
    assert s == pytest.approx(-3 * k0 / (4 * math.pi))
    assert c == pytest.approx(3 * k0 * k0 / (8 * math.pi))


@pytest.mark.parametrize("p,q", [(1, 2), (2, 3), (3, 2), (1, 1), (3, 1), (3, 5)])
def test_proof_identity(pp2, box, p, q):
    pc = pp_constants(pp2)
    phi, psi, _ = build_phi_psi(box, RationalTime(p, q), pc)
    for j in range(-5, 6):
        k = pc.kappa0.real + 2 * math.pi * j
        ph = cmath.exp(1j * math.pi * p * j * j / q)
        assert ph * bounded_ft(phi, k) == pytest.approx(bounded_ft(box, k), abs=1e-12)
        assert ph * bounded_ft(psi, -k) == pytest.approx(bounded_ft(box, -k), abs=1e-12)


@pytest.mark.parametrize("p,q", [(1, 3), (3, 2), (3, 5)])
def test_revival_matches_series(pp2, bump, p, q):
    rt = RationalTime(p, q)
    a = evaluate_revival(pp2, bump, rt, GRID)
    b = evaluate_series(pp2, bump, rt, GRID, TruncationPlan(20001))
    assert np.max(np.abs(a.values - b.values)) < 1e-6
    assert a.meta["parityBranch"] == parity_branch(p, q)


def test_dual_weights_needed(pp2, bump):
    # the psi components need the extra factor delta; unit weights miss badly
    rt = RationalTime(1, 2)
    plan = build_plan(pp2, bump, rt)
    good = evaluate_plan(plan, GRID)
    naive = evaluate_plan(revival.RevivalPlan(**{**plan.__dict__, "c3": plan.c2, "c4": plan.c1}), GRID)
    ref = evaluate_series(pp2, bump, rt, GRID, TruncationPlan(20001)).values
    assert np.max(np.abs(good - ref)) < 1e-6
    assert np.max(np.abs(naive - ref)) > 1e-2


def test_odd_odd_branch_needed(pp2, bump, monkeypatch):
    rt = RationalTime(1, 1)
    ref = evaluate_series(pp2, bump, rt, GRID, TruncationPlan(20001)).values
    monkeypatch.setattr(revival, "parity_branch", lambda p, q: EVEN)
    forced = evaluate_revival(pp2, bump, rt, GRID).values
    assert np.max(np.abs(forced - ref)) > 1e-2


def test_copy_supports_cover_field(pp2):
    u0 = make_datum(RampSpec())
    rt = RationalTime(1, 2)
    segs = copy_supports(pp2, u0, rt)
    assert len(segs) == 4 * rt.q
    x = default_grid(1.0, 4001)
    u = evaluate_revival(pp2, u0, rt, x).values
    live = x[np.abs(u) > 1e-8 * np.max(np.abs(u))]
    covered = np.zeros(live.shape, bool)
    for lo, hi in segs:
        for shift in (-1.0, 0.0):
            covered |= (live >= lo + shift - 1e-9) & (live <= hi + shift + 1e-9)
    assert covered.all()


def test_revival_input_checks(pp2, bump):
    with pytest.raises(NotRational):
        evaluate_revival(pp2, bump, 0.3)
    with pytest.raises(BadSpec):
        evaluate_revival(gen(**SELF_ADJOINT), bump, RationalTime(1, 2))
    with pytest.raises(BadSpec):
        build_plan(pp2, bump, RationalTime(1, 2, L=2.0))
