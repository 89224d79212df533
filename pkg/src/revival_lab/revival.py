"""Closed-form solutions at rational times for pseudoperiodic conditions.

At ``t = L^2 p / (4 pi q)`` the solution is a finite combination of sharp
(shifted) and flat (reflected) pseudoperiodic extensions of two piecewise
polynomials ``phi`` and ``psi``, each a Gauss-sum weighted sum of ``q``
translates of the datum.  Nothing is truncated; the only error is rounding.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .eigenbasis import PPConstants, pp_constants
from .errors import BadSpec, DegenerateConstants, IllPosed, NotRational
from .piecewise import FLAT, SHARP, ExtensionSpec, PiecewisePoly, extended_eval, sum_pieces
from .solver import REVIVAL, FieldSample, _check_grid, _meta, default_grid
from .spectrum import BoundaryConditions

EVEN = "Even"
ODD_ODD = "OddOdd"
_WEIGHT_TOL = 1e-8


@dataclass(frozen=True)
class RationalTime:
    """``t = L^2 p / (4 pi q)`` with coprime positive ``p``, ``q``."""

    p: int
    q: int
    L: float = 1.0

    def __post_init__(self):
        if not (isinstance(self.p, (int, np.integer)) and isinstance(self.q, (int, np.integer))):
            raise NotRational(f"p and q must be integers, got {self.p!r}, {self.q!r}")
        if self.p <= 0 or self.q <= 0:
            raise BadSpec("p and q must be positive")
        if math.gcd(int(self.p), int(self.q)) != 1:
            raise BadSpec(f"p={self.p} and q={self.q} are not coprime")

    @classmethod
    def parse(cls, text: str, L: float = 1.0) -> "RationalTime":
        """``"p/q"`` (or ``"p"``); the fraction is reduced to lowest terms."""
        try:
            fr = Fraction(str(text).strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise BadSpec(f"cannot parse rational time {text!r}") from exc
        return cls(fr.numerator, fr.denominator, L)

    @property
    def t(self) -> float:
        return self.L**2 * self.p / (4 * math.pi * self.q)

    @property
    def tag(self) -> str:
        return f"{self.p}_over_{self.q}"

    def __str__(self):
        return f"{self.p}/{self.q}"


@dataclass(frozen=True)
class RevivalPlan:
    phi: PiecewisePoly
    psi: PiecewisePoly
    s: float
    c: float
    c1: complex
    c2: complex
    c3: complex
    c4: complex
    alpha: complex
    parity_branch: str
    kappa0L: float


def gauss_sum(p: int, q: int, m: int, sign: int, quad: int | None = None) -> complex:
    """``sum_{n<q} alpha^(sign*2nm + quad*n^2)`` with ``alpha = exp(i pi / q)``.

    ``quad`` defaults to ``-p``.  Exponents are reduced modulo ``2q`` in
    integer arithmetic before exponentiation.
    """
    if quad is None:
        quad = -p
    two_q = 2 * q
    total = 0j
    for n in range(q):
        e = (sign * 2 * n * m + quad * n * n) % two_q
        total += cmath.exp(1j * math.pi * e / q)
    return total


def parity_branch(p: int, q: int) -> str:
    return ODD_ODD if (p % 2 == 1 and q % 2 == 1) else EVEN


def _half_swap(u0: PiecewisePoly, pc: PPConstants, sign: int) -> PiecewisePoly:
    """``gamma^(-sign/2) u0(x + L/2)`` on the left half, ``gamma^(sign/2) u0(x - L/2)`` on the right."""
    L = u0.L
    left = u0.translated(0.5 * L, 0.0, 0.5 * L)
    right = u0.translated(-0.5 * L, 0.5 * L, L)
    return sum_pieces(L, [left, right], [pc.gpow(-0.5 * sign), pc.gpow(0.5 * sign)])


def build_phi_psi(u0: PiecewisePoly, rt: RationalTime, consts: PPConstants):
    """``(phi, psi, branch)`` for the rational time ``rt``."""
    p, q, L = rt.p, rt.q, u0.L
    branch = parity_branch(p, q)
    if branch == ODD_ODD:
        base_phi, base_psi = _half_swap(u0, consts, 1), _half_swap(u0, consts, -1)
        quad = p * (q - 1)
    else:
        base_phi = base_psi = u0
        quad = -p
    g_phi = [gauss_sum(p, q, m, -1, quad) for m in range(q)]
    g_psi = [gauss_sum(p, q, m, 1, quad) for m in range(q)]

    phi_parts, phi_w, psi_parts, psi_w = [], [], [], []
    for ell in range(1, q + 1):
        lo, hi = (1 - ell / q) * L, (1 - (ell - 1) / q) * L
        for m in range(q):
            wrap = m >= ell  # translate lands one period back
            d = L * m / q - (L if wrap else 0.0)
            r = m / q - (1 if wrap else 0)
            phi_parts.append(base_phi.translated(d, lo, hi))
            phi_w.append(consts.gpow(-r) * g_phi[m] / q)
            psi_parts.append(base_psi.translated(d, lo, hi))
            psi_w.append(consts.gpow(r) * g_psi[m] / q)
    phi = sum_pieces(L, phi_parts, phi_w)
    psi = sum_pieces(L, psi_parts, psi_w)
    return phi, psi, branch


def revival_shift(rt: RationalTime, consts: PPConstants):
    """Shift ``s = -p L^2 kappa0 / (2 pi q)`` and phase ``c = p L^2 kappa0^2 / (4 pi q)``."""
    k0 = complex(consts.kappa0)
    if k0.imag != 0.0:
        raise IllPosed(f"kappa0 = {k0} is not real")
    k0 = k0.real
    L = rt.L
    s = -rt.p * L * L * k0 / (2 * math.pi * rt.q)
    c = rt.p * L * L * k0 * k0 / (4 * math.pi * rt.q)
    return s, c


def build_plan(bc: BoundaryConditions, u0: PiecewisePoly, rt: RationalTime) -> RevivalPlan:
    if not bc.is_pseudoperiodic:
        raise BadSpec("revival formulas need pseudoperiodic boundary conditions")
    if abs(rt.L - bc.L) > 1e-12 * bc.L or abs(u0.L - bc.L) > 1e-12 * bc.L:
        raise BadSpec("interval length mismatch between conditions, datum and time")
    consts = pp_constants(bc)
    s, c = revival_shift(rt, consts)
    dg = consts.delta * consts.gamma
    den = 1 - dg * dg
    if abs(den) <= _WEIGHT_TOL:
        raise DegenerateConstants("1 - delta^2 gamma^2 vanishes")
    # the psi weights carry an extra factor delta so that the transform pair
    # F(k_j) + delta F(-k_j) reproduces phi(k_j) + delta psi(-k_j)
    c1 = 1 / den
    c2 = -consts.delta * consts.gamma**2 / den
    phi, psi, branch = build_phi_psi(u0, rt, consts)
    return RevivalPlan(
        phi=phi,
        psi=psi,
        s=s,
        c=c,
        c1=c1,
        c2=c2,
        c3=consts.delta * c2,
        c4=consts.delta * c1,
        alpha=cmath.exp(1j * math.pi / rt.q),
        parity_branch=branch,
        kappa0L=consts.kappa0.real * bc.L,
    )


def plan_components(plan: RevivalPlan):
    """The four weighted extensions ``(weight, ExtensionSpec)``."""
    k0L, s = plan.kappa0L, plan.s
    return [
        (plan.c1, ExtensionSpec(plan.phi, k0L, SHARP, s)),
        (plan.c2, ExtensionSpec(plan.phi, -k0L, FLAT, s)),
        (plan.c3, ExtensionSpec(plan.psi, -k0L, SHARP, -s)),
        (plan.c4, ExtensionSpec(plan.psi, k0L, FLAT, -s)),
    ]


def evaluate_plan(plan: RevivalPlan, x):
    out = np.zeros(np.shape(x), dtype=complex)
    for w, spec in plan_components(plan):
        out += w * extended_eval(spec, x)
    return cmath.exp(1j * plan.c) * out


def evaluate_revival(bc: BoundaryConditions, u0: PiecewisePoly, rt, grid=None, datum=None) -> FieldSample:
    """Solution at a rational time as a finite sum of shifted and reflected copies."""
    if not isinstance(rt, RationalTime):
        raise NotRational(f"revival needs a RationalTime, got {type(rt).__name__}")
    x = _check_grid(default_grid(bc.L) if grid is None else grid, bc.L)
    plan = build_plan(bc, u0, rt)
    meta = _meta(REVIVAL, bc, rt, 0, datum)
    meta["parityBranch"] = plan.parity_branch
    return FieldSample(x, evaluate_plan(plan, x), meta)


def copy_supports(bc: BoundaryConditions, u0: PiecewisePoly, rt: RationalTime):
    """Intervals (mod ``L``) occupied by the ``4q`` shifted/reflected copies of ``supp u0``.

    Each entry is ``(lo, hi)`` with ``0 <= lo < L``; an interval may run past
    ``L``, meaning it wraps around.
    """
    segs = u0.support
    if not segs:
        return []
    a, b = segs[0][0], segs[-1][1]
    L = bc.L
    s, _ = revival_shift(rt, pp_constants(bc))
    extra = 0.5 * L if parity_branch(rt.p, rt.q) == ODD_ODD else 0.0
    out = []
    for m in range(rt.q):
        lo = a - L * m / rt.q - extra  # support of the m-th translate inside phi/psi
        w = b - a
        for start in (lo - s, s - lo - w, lo + s, -s - lo - w):
            out.append((float(np.mod(start, L)), float(np.mod(start, L) + w)))
    return out
