"""Truncated series solutions: biorthogonal eigenfunction series and residue series.

Both evaluators sum the same index range (``|j|`` ascending for pseudoperiodic
data, rank order otherwise), add modes in fixed-size chunks with numpy's
pairwise reduction, and fold the chunk totals into a Neumaier-compensated
accumulator so results are reproducible bit for bit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .eigenbasis import _pp_coeffs, gen_coeffs, pp_constants
from .errors import BadSpec, RootDerivativeTooSmall
from .piecewise import PiecewisePoly, bounded_ft
from .spectrum import SIMPLE_ZERO_TOL, BoundaryConditions, Spectrum, compute_spectrum, discriminant_derivative

SERIES = "Series"
RESIDUE = "Residue"
REVIVAL = "Revival"

DEFAULT_NTERMS = 20001
DEFAULT_GRID_SIZE = 1000
_CHUNK = 256


def default_grid(L: float = 1.0, n: int = DEFAULT_GRID_SIZE):
    return np.linspace(0.0, L, n)


def describe_bc(bc: BoundaryConditions):
    return {
        "variant": bc.variant,
        "L": bc.L,
        "betas": {k: [complex(v).real, complex(v).imag] for k, v in bc.beta.items()},
    }


@dataclass(frozen=True, eq=False)
class FieldSample:
    """Complex field values on a strictly increasing grid in ``[0, L]``."""

    grid: np.ndarray
    values: np.ndarray
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        g = np.asarray(self.grid, dtype=float)
        v = np.asarray(self.values, dtype=complex)
        if g.ndim != 1 or v.shape != g.shape:
            raise BadSpec("grid and values must be 1-d arrays of equal length")
        if g.size > 1 and np.any(np.diff(g) <= 0):
            raise BadSpec("grid must be strictly increasing")
        object.__setattr__(self, "grid", g)
        object.__setattr__(self, "values", v)

    def to_json(self):
        return {
            "grid": self.grid.tolist(),
            "re": self.values.real.tolist(),
            "im": self.values.imag.tolist(),
            "meta": self.meta,
        }


@dataclass(frozen=True)
class TruncationPlan:
    """Symmetric truncation with ``N`` modes (``|j| <= (N-1)/2`` when pseudoperiodic)."""

    N: int = DEFAULT_NTERMS

    def __post_init__(self):
        if not isinstance(self.N, (int, np.integer)) or self.N < 3 or self.N % 2 == 0:
            raise BadSpec(f"N must be an odd integer >= 3, got {self.N!r}")


class _Compensated:
    """Neumaier summation over complex arrays, applied to real and imaginary parts."""

    def __init__(self, n):
        self.s = np.zeros((2, n))
        self.c = np.zeros((2, n))

    def add(self, v):
        v = np.stack([v.real, v.imag])
        t = self.s + v
        big = np.abs(self.s) >= np.abs(v)
        self.c += np.where(big, (self.s - t) + v, (v - t) + self.s)
        self.s = t

    def result(self):
        tot = self.s + self.c
        return tot[0] + 1j * tot[1]


def _time_parts(t):
    """``(float t, (p, q) or None)``; rational times expose ``p``, ``q`` and ``t``."""
    if hasattr(t, "p") and hasattr(t, "q"):
        return float(t.t), (int(t.p), int(t.q))
    return float(t), None


@dataclass(frozen=True, eq=False)
class _Modes:
    index: np.ndarray
    kappa: np.ndarray
    a: np.ndarray  # X_j = e^{ikx} + a e^{-ikx}
    d: np.ndarray  # weight of u0_hat(-k) in the coefficient
    tau: np.ndarray
    kappa0: complex | None


def _modes(bc: BoundaryConditions, N: int, spectrum: Spectrum | None = None) -> _Modes:
    spec = spectrum if spectrum is not None else compute_spectrum(bc, N)
    idx, kap, _ = spec.representatives(N)
    n = len(kap)
    if bc.is_pseudoperiodic:
        pc = pp_constants(bc)
        a, d = _pp_coeffs(bc, pc.kappa0)
        return _Modes(idx, kap, np.full(n, a), np.full(n, d), np.full(n, pc.tau), pc.kappa0)
    cs = [gen_coeffs(bc, k) for k in kap]
    return _Modes(
        idx,
        kap,
        np.array([c.b1 for c in cs]),
        np.array([c.b2bar for c in cs]),
        np.array([c.tauj for c in cs]),
        None,
    )


def _phases(bc, modes: _Modes, t):
    """``exp(-i kappa_j^2 t)``; exact reduction of the ``j^2`` term at rational times."""
    tval, pq = _time_parts(t)
    if bc.is_pseudoperiodic and pq is not None:
        p, q = pq
        k0, L, j = modes.kappa0, bc.L, modes.index.astype(np.int64)
        quad = np.mod(j * j * p, 2 * q)
        theta = k0 * k0 * tval + j * (k0 * L * p / q) + math.pi * quad / q
        return np.exp(-1j * theta)
    return np.exp(-1j * modes.kappa**2 * tval)


def _coefficients(modes: _Modes, u0: PiecewisePoly, L):
    return (bounded_ft(u0, modes.kappa) + modes.d * bounded_ft(u0, -modes.kappa)) / (modes.tau * L)


def series_coefficient(bc: BoundaryConditions, spectrum: Spectrum, u0: PiecewisePoly, j: int) -> complex:
    """``c_j = <u0, Y_j> / <X_j, Y_j>`` via bounded Fourier transforms."""
    idx, kap, _ = spectrum.representatives()
    hit = np.nonzero(idx == j)[0]
    if hit.size == 0:
        raise BadSpec(f"index {j} not present in spectrum")
    k = kap[hit[0]]
    if bc.is_pseudoperiodic:
        pc = pp_constants(bc)
        _, d = _pp_coeffs(bc, pc.kappa0)
        tau = pc.tau
    else:
        c = gen_coeffs(bc, k)
        d, tau = c.b2bar, c.tauj
    return complex((bounded_ft(u0, k) + d * bounded_ft(u0, -k)) / (tau * bc.L))


def _accumulate(x, kap, w_plus, w_minus):
    """``sum_j w_plus_j e^{i k_j x} + w_minus_j e^{-i k_j x}`` in chunk order."""
    acc = _Compensated(len(x))
    for s in range(0, len(kap), _CHUNK):
        k = kap[s : s + _CHUNK]
        ph = np.multiply.outer(x, k)
        e_plus = np.exp(1j * ph)
        e_minus = np.exp(-1j * ph)
        chunk = (e_plus * w_plus[s : s + _CHUNK]).sum(axis=1) + (e_minus * w_minus[s : s + _CHUNK]).sum(axis=1)
        acc.add(chunk)
    return acc.result()


def _check_grid(grid, L):
    x = np.asarray(grid, dtype=float)
    if x.ndim != 1 or x.size == 0 or x[0] < -1e-12 * L or x[-1] > L * (1 + 1e-12):
        raise BadSpec("grid must be a non-empty 1-d array inside [0, L]")
    return x


def evaluate_series(bc, u0, t, grid=None, plan: TruncationPlan | None = None, spectrum=None, datum=None) -> FieldSample:
    """Symmetric partial sum of ``c_j exp(-i kappa_j^2 t) X_j(x)``."""
    plan = plan or TruncationPlan()
    x = _check_grid(default_grid(bc.L) if grid is None else grid, bc.L)
    modes = _modes(bc, plan.N, spectrum)
    w = _coefficients(modes, u0, bc.L) * _phases(bc, modes, t)
    vals = _accumulate(x, modes.kappa, w, w * modes.a)
    return FieldSample(x, vals, _meta(SERIES, bc, t, plan.N, datum))


def zeta_plus(bc: BoundaryConditions, u0: PiecewisePoly, kappa):
    """Homogeneous part of the numerator of the residue representation."""
    k = np.asarray(kappa, dtype=complex)
    L = bc.L
    E, Em = np.exp(1j * k * L), np.exp(-1j * k * L)
    f_plus, f_minus = bounded_ft(u0, k), bounded_ft(u0, -k)
    if bc.is_pseudoperiodic:
        b0, b1 = bc.betas
        return ((b0 + b1) * E - 2) * f_plus + (b0 - b1) * Em * f_minus
    b = bc.beta
    b11, b12, b13, b14 = b["beta11"], b["beta12"], b["beta13"], b["beta14"]
    b22, b23, b24 = b["beta22"], b["beta23"], b["beta24"]
    ik = 1j * k
    A = 2 * ik * b11 * b22 + E * (b12 * b24 - b14 * b22 + ik * (b13 * b22 - b12 * b23 + b11 * b24) + k * k * b11 * b23)
    B = (b14 * b22 - b12 * b24 + ik * (b12 * b23 - b13 * b22 + b11 * b24) + k * k * b11 * b23) * Em
    return A * f_plus + B * f_minus


def zeta_minus(bc: BoundaryConditions, u0: PiecewisePoly, kappa):
    """Pseudoperiodic companion of :func:`zeta_plus`."""
    if not bc.is_pseudoperiodic:
        raise BadSpec("zeta_minus is defined for pseudoperiodic conditions only")
    k = np.asarray(kappa, dtype=complex)
    b0, b1 = bc.betas
    E = np.exp(1j * k * bc.L)
    return (2 * b0 * b1 * E - b0 - b1) * bounded_ft(u0, k) + (b0 - b1) * bounded_ft(u0, -k)


def evaluate_residue(bc, u0, t, grid=None, plan: TruncationPlan | None = None, spectrum=None, datum=None) -> FieldSample:
    """``i sum_mu exp(i mu x - i mu^2 t) zeta+(mu) / Delta'(mu)`` over the zeros ``+-kappa_j``."""
    plan = plan or TruncationPlan()
    x = _check_grid(default_grid(bc.L) if grid is None else grid, bc.L)
    modes = _modes(bc, plan.N, spectrum)
    kap = modes.kappa
    d_plus = discriminant_derivative(bc, kap)
    d_minus = discriminant_derivative(bc, -kap)
    floor = SIMPLE_ZERO_TOL * np.maximum(1.0, np.abs(kap))
    if np.any(np.abs(d_plus) < floor) or np.any(np.abs(d_minus) < floor):
        raise RootDerivativeTooSmall("Delta' below the simple-zero threshold")
    ph = _phases(bc, modes, t)
    w_plus = 1j * ph * zeta_plus(bc, u0, kap) / d_plus
    w_minus = 1j * ph * zeta_plus(bc, u0, -kap) / d_minus
    vals = _accumulate(x, kap, w_plus, w_minus)
    return FieldSample(x, vals, _meta(RESIDUE, bc, t, plan.N, datum))


def _meta(method, bc, t, nterms, datum):
    tval, pq = _time_parts(t)
    meta = {"method": method, "t": tval, "nterms": nterms, "bc": describe_bc(bc)}
    if pq is not None:
        meta["rational"] = f"{pq[0]}/{pq[1]}"
    if datum is not None:
        meta["datum"] = datum
    return meta
