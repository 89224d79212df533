"""Eigenfunctions, dual eigenfunctions and biorthogonality constants.

The pairing is the sesquilinear form ``<f, g> = (1/L) int_0^L f conj(g) dx``.
With it the dual functions are written so that ``conj(Y_j)`` carries the
coefficient that multiplies ``u0_hat(-kappa_j)`` in the series coefficients,
which makes ``<X_j, Y_k> = 0`` for ``j != k`` and ``<X_j, Y_j> = tau``.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass

import numpy as np

from .errors import BadSpec, DegenerateConstants, InconsistentRoot, QuadratureFailure
from .spectrum import BoundaryConditions, kappa0

PAIRING = "sesquilinear"

_DENOM_TOL = 1e-13
_B1_AGREE_TOL = 1e-8
_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(64)
_QUAD_TOL = 1e-12
_QUAD_DEPTH = 12


def gamma_power(k0L, r):
    """``gamma**r`` for ``gamma = exp(i k0L)``, computed branch-free."""
    return cmath.exp(1j * k0L * r)


@dataclass(frozen=True)
class PPConstants:
    gamma: complex
    delta: complex
    tau: complex
    kappa0: complex
    L: float = 1.0

    @property
    def k0L(self):
        return self.kappa0 * self.L

    def gpow(self, r):
        return gamma_power(self.k0L, r)


@dataclass(frozen=True)
class GenCoeffs:
    b1: complex
    b2bar: complex
    tauj: complex


class ExpCombo:
    """``f(x) = sum_k a_k exp(i w_k x)``; callable and closed under conjugation."""

    __slots__ = ("amps", "freqs")

    def __init__(self, amps, freqs):
        self.amps = np.asarray(amps, dtype=complex)
        self.freqs = np.asarray(freqs, dtype=complex)

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        out = np.exp(1j * np.multiply.outer(x, self.freqs)) @ self.amps
        return out if out.ndim else complex(out)

    def conj(self):
        return ExpCombo(np.conj(self.amps), -np.conj(self.freqs))


def _pick(candidates):
    """Choose the numerator/denominator pair with the largest denominator."""
    num, den = max(candidates, key=lambda nd: abs(nd[1]))
    scale = max(max(abs(n), abs(d)) for n, d in candidates)
    if abs(den) <= _DENOM_TOL * max(1.0, scale):
        raise DegenerateConstants("vanishing denominator in eigenfunction coefficient")
    return num / den


# -- pseudoperiodic ----------------------------------------------------------


def pp_constants(bc: BoundaryConditions) -> PPConstants:
    """``gamma``, ``delta`` and ``tau`` for pseudoperiodic conditions."""
    if not bc.is_pseudoperiodic:
        raise BadSpec("pp_constants needs pseudoperiodic conditions")
    b0, b1 = bc.betas
    k0 = kappa0(bc)
    g = cmath.exp(1j * k0 * bc.L)
    d1 = g * ((b0 + b1) * g - 2)
    d2 = (b0 * g - 1) * (b1 * g - 1)
    if abs(d1) < _DENOM_TOL or abs(d2) < _DENOM_TOL:
        raise DegenerateConstants("delta or tau has a vanishing denominator")
    delta = (b0 - b1) / d1
    tau = ((1 + b0 * b1) * (g * g + 1) - 2 * g * (b0 + b1)) / d2
    return PPConstants(gamma=g, delta=delta, tau=tau, kappa0=k0, L=bc.L)


def _pp_coeffs(bc, kappa):
    """Coefficients ``(a, d)`` with ``X = e^{ikx} + a e^{-ikx}``, ``conj(Y) = e^{-ikx} + d e^{ikx}``."""
    b0, b1 = bc.betas
    E = cmath.exp(1j * kappa * bc.L)
    a = _pick([(E - b0, b0 - 1 / E), (E - b1, 1 / E - b1)])
    d = _pick([(b1 - E, E * (1 - E * b1))])
    return a, d


# -- general -----------------------------------------------------------------


def gen_coeffs(bc: BoundaryConditions, kappa_j) -> GenCoeffs:
    """``b1``, the conjugated ``b2`` and ``tau_j`` at a zero of the discriminant."""
    if bc.is_pseudoperiodic:
        raise BadSpec("gen_coeffs needs general boundary conditions")
    b = bc.beta
    b11, b12, b13, b14 = b["beta11"], b["beta12"], b["beta13"], b["beta14"]
    b22, b23, b24 = b["beta22"], b["beta23"], b["beta24"]
    k = complex(kappa_j)
    L = bc.L
    E, Em = cmath.exp(1j * k * L), cmath.exp(-1j * k * L)
    ik = 1j * k

    row1 = (-(E * (ik * b11 + b12) + ik * b13 + b14), Em * (b12 - ik * b11) + b14 - ik * b13)
    row2 = (-(E * b22 + ik * b23 + b24), Em * b22 + b24 - ik * b23)
    b1 = _pick([row1, row2])
    forms = [n / d for n, d in (row1, row2) if abs(d) > 1e-8 * max(1.0, abs(n), abs(d))]
    if len(forms) == 2 and abs(forms[0] - forms[1]) > _B1_AGREE_TOL * max(1.0, abs(forms[0])):
        raise InconsistentRoot(f"b1 forms disagree at kappa={k}: {forms[0]} vs {forms[1]}")

    b2bar = _pick(
        [
            (
                Em * (-ik * b11 * b24 - b14 * b22 + b12 * b24) - ik * b11 * b22,
                E * (-ik * b11 * b24 + b14 * b22 - b12 * b24) - ik * b11 * b22,
            ),
            (
                Em * (-ik * b11 * b23 + b12 * b23 - b13 * b22) - b11 * b22,
                E * (-ik * b11 * b23 - b12 * b23 + b13 * b22) + b11 * b22,
            ),
        ]
    )
    tauj = 1 + b1 * b2bar + _sinc(k * L) * (b1 * Em + b2bar * E)
    return GenCoeffs(b1=b1, b2bar=b2bar, tauj=tauj)


def _sinc(z):
    return 1.0 if z == 0 else cmath.sin(z) / z


# -- eigenfunctions ----------------------------------------------------------


def eigen_pair(bc: BoundaryConditions, kappa_j):
    """``(X_j, Y_j)`` as :class:`ExpCombo` callables."""
    k = complex(kappa_j)
    if bc.is_pseudoperiodic:
        a, d = _pp_coeffs(bc, k)
    else:
        c = gen_coeffs(bc, k)
        a, d = c.b1, c.b2bar
    X = ExpCombo([1.0, a], [k, -k])
    Y = ExpCombo([1.0, d], [-k, k]).conj()
    return X, Y


def eigenfunction(bc: BoundaryConditions, kappa_j, x):
    return eigen_pair(bc, kappa_j)[0](x)


def dual_eigenfunction(bc: BoundaryConditions, kappa_j, x):
    return eigen_pair(bc, kappa_j)[1](x)


def biorthogonality_constant(bc: BoundaryConditions, kappa_j):
    """``<X_j, Y_j>`` from its closed form (``tau`` or ``tau_j``)."""
    if bc.is_pseudoperiodic:
        return pp_constants(bc).tau
    return gen_coeffs(bc, kappa_j).tauj


# -- pairing -----------------------------------------------------------------


def _exp_integral(w, L):
    """``int_0^L exp(i w x) dx`` for an array of complex ``w``."""
    w = np.asarray(w, dtype=complex)
    z = 1j * w * L
    small = np.abs(z) < 1e-5
    safe = np.where(small, 1.0, z)
    out = np.where(small, L * (1 + z / 2 + z * z / 6), L * np.expm1(safe) / safe)
    return out


def _gauss_legendre(h, a, b):
    mid, half = 0.5 * (a + b), 0.5 * (b - a)
    return half * np.dot(_GL_WEIGHTS, h(mid + half * _GL_NODES))


def _adaptive(h, a, b, whole, depth):
    m = 0.5 * (a + b)
    left, right = _gauss_legendre(h, a, m), _gauss_legendre(h, m, b)
    if abs(left + right - whole) < _QUAD_TOL * max(1.0, abs(whole)):
        return left + right
    if depth >= _QUAD_DEPTH:
        raise QuadratureFailure(f"no convergence on [{a}, {b}]")
    return _adaptive(h, a, m, left, depth + 1) + _adaptive(h, m, b, right, depth + 1)


def quad_complex(h, a, b):
    """Composite 64-point Gauss-Legendre with adaptive halving on panels of width <= (b-a)/8."""
    edges = np.linspace(a, b, 9)
    total = 0j
    for lo, hi in zip(edges[:-1], edges[1:]):
        total += _adaptive(h, lo, hi, _gauss_legendre(h, lo, hi), 0)
    return complex(total)


def pairing(f, g, L: float) -> complex:
    """``(1/L) int_0^L f conj(g) dx``.

    Exact when both arguments are :class:`ExpCombo`; adaptive quadrature
    for arbitrary vectorised callables otherwise.
    """
    if isinstance(f, ExpCombo) and isinstance(g, ExpCombo):
        gc = g.conj()
        w = np.add.outer(f.freqs, gc.freqs)
        amp = np.multiply.outer(f.amps, gc.amps)
        return complex(np.sum(amp * _exp_integral(w, L)) / L)
    return quad_complex(lambda x: f(x) * np.conj(g(x)), 0.0, L) / L
