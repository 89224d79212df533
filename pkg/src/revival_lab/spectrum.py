"""Boundary conditions, discriminants and their zeros.

Two families are supported.  Pseudoperiodic conditions
``beta0 u(t,0) = u(t,L)``, ``beta1 u_x(t,0) = u_x(t,L)`` have the closed-form
spectrum ``kappa_j = kappa0 + 2 pi j / L`` (together with ``-kappa_j``).
General homogeneous conditions

    b11 u_x(L) + b12 u(L) + b13 u_x(0) + b14 u(0) = 0
    b22 u(L) + b23 u_x(0) + b24 u(0) = 0

have a transcendental discriminant whose zeros are located numerically:
Newton iterations seeded at the large-index asymptotes, a real scan of the
imaginary axis, and argument-principle counts on rectangles which both
certify the result and drive a subdivision search for anything missed.
"""

from __future__ import annotations

import bisect
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import BadSpec, DegenerateSpectrum, IllPosed, UndefinedAsymptote

PSEUDOPERIODIC = "pseudoperiodic"
GENERAL = "general"
GENERAL_KEYS = ("beta11", "beta12", "beta13", "beta14", "beta22", "beta23", "beta24")

RESIDUAL_TOL = 1e-10  # |Delta(k)| < RESIDUAL_TOL * max(1, |k|^2)
SIMPLE_ZERO_TOL = 1e-6  # |Delta'(k)| >= SIMPLE_ZERO_TOL * max(1, |k|)
NEUTRAL_TOL = 1e-9  # |Im k^2| below this is neutral
DEDUP_TOL = 1e-8
ILLPOSED_TOL = 1e-10
AXIS_TOL = 1e-10  # relative distance to an axis for the real/imaginary tags
SEARCH_HEIGHT = 20.0  # |Im k| <= SEARCH_HEIGHT / L
_SAMPLES_PER_RADIAN = 4.0

REAL_POSITIVE = "RealPositive"
REAL_NEGATIVE = "RealNegative"
IMAG_UP = "ImagUp"
IMAG_DOWN = "ImagDown"
COMPLEX_QUADRANT = "ComplexQuadrant"


@dataclass(frozen=True)
class BoundaryConditions:
    """Immutable boundary-condition description.

    Use :meth:`pseudoperiodic` or :meth:`general` rather than the raw
    constructor.  ``betas`` holds ``(beta0, beta1)`` or the seven general
    coefficients in the order of ``GENERAL_KEYS``.
    """

    variant: str
    betas: tuple
    L: float = 1.0

    def __post_init__(self):
        if not self.L > 0:
            raise BadSpec(f"L must be positive, got {self.L}")
        if self.variant == PSEUDOPERIODIC:
            if len(self.betas) != 2:
                raise BadSpec("pseudoperiodic conditions take two coefficients")
            b0, b1 = self.betas
            if b0 + b1 == 0:
                raise BadSpec("beta0 + beta1 must be nonzero")
        elif self.variant == GENERAL:
            if len(self.betas) != 7:
                raise BadSpec("general conditions take seven coefficients")
            rows = np.array(self.coefficient_rows())
            if np.linalg.matrix_rank(rows) < 2:
                raise BadSpec("boundary-condition rows are linearly dependent")
        else:
            raise BadSpec(f"unknown variant {self.variant!r}")

    @classmethod
    def pseudoperiodic(cls, beta0, beta1, L=1.0):
        return cls(PSEUDOPERIODIC, (complex(beta0), complex(beta1)), float(L))

    @classmethod
    def general(cls, L=1.0, **betas):
        unknown = set(betas) - set(GENERAL_KEYS)
        if unknown:
            raise BadSpec(f"unknown coefficients {sorted(unknown)}")
        return cls(GENERAL, tuple(complex(betas.get(k, 0.0)) for k in GENERAL_KEYS), float(L))

    @property
    def is_pseudoperiodic(self):
        return self.variant == PSEUDOPERIODIC

    @property
    def beta(self):
        """Coefficients by name, e.g. ``bc.beta['beta11']`` or ``bc.beta['beta0']``."""
        if self.is_pseudoperiodic:
            return dict(zip(("beta0", "beta1"), self.betas))
        return dict(zip(GENERAL_KEYS, self.betas))

    def coefficient_rows(self):
        """Rows acting on ``(u_x(L), u(L), u_x(0), u(0))``."""
        if self.is_pseudoperiodic:
            b0, b1 = self.betas
            return [[1, 0, -b1, 0], [0, 1, 0, -b0]]
        b11, b12, b13, b14, b22, b23, b24 = self.betas
        return [[b11, b12, b13, b14], [0, b22, b23, b24]]

    @property
    def energy_conserving(self):
        """``conj(beta0) * beta1 == 1``; only meaningful for pseudoperiodic data."""
        if not self.is_pseudoperiodic:
            return False
        b0, b1 = self.betas
        return abs(b0.conjugate() * b1 - 1) < 1e-12

    def general_coefficients(self):
        """``(A, B, C, D)`` with ``Delta = 2i [A k + B k cos kL + (C + D k^2) sin kL]``."""
        if self.is_pseudoperiodic:
            raise BadSpec("general coefficients requested for pseudoperiodic data")
        b11, b12, b13, b14, b22, b23, b24 = self.betas
        A = b11 * b22 - b14 * b23 + b13 * b24
        B = b13 * b22 - b12 * b23 + b11 * b24
        C = b12 * b24 - b14 * b22
        D = b11 * b23
        return A, B, C, D


# -- discriminant --------------------------------------------------------


def discriminant(bc: BoundaryConditions, kappa):
    """Delta(kappa), vectorised; entire in kappa."""
    k = np.asarray(kappa, dtype=complex)
    L = bc.L
    if bc.is_pseudoperiodic:
        b0, b1 = bc.betas
        val = 2 * (b0 + b1) * np.cos(k * L) - 2 * (1 + b0 * b1)
    else:
        A, B, C, D = bc.general_coefficients()
        val = 2j * (A * k + B * k * np.cos(k * L) + (C + D * k * k) * np.sin(k * L))
    return complex(val) if np.ndim(kappa) == 0 else val


def discriminant_derivative(bc: BoundaryConditions, kappa):
    k = np.asarray(kappa, dtype=complex)
    L = bc.L
    if bc.is_pseudoperiodic:
        b0, b1 = bc.betas
        val = -2 * L * (b0 + b1) * np.sin(k * L)
    else:
        A, B, C, D = bc.general_coefficients()
        s, c = np.sin(k * L), np.cos(k * L)
        val = 2j * (A + B * c - B * k * L * s + 2 * D * k * s + (C + D * k * k) * L * c)
    return complex(val) if np.ndim(kappa) == 0 else val


def _sinc_parts(k, L):
    """``S = sin(kL)/k`` and ``S'`` with the removable point at 0 handled."""
    small = np.abs(k * L) < 1e-4
    ks = np.where(small, 1.0, k)
    S = np.where(small, L - L**3 * k * k / 6 + L**5 * k**4 / 120, np.sin(k * L) / ks)
    dS = np.where(
        small,
        -(L**3) * k / 3 + L**5 * k**3 / 30,
        (L * np.cos(k * L) * ks - np.sin(k * L)) / (ks * ks),
    )
    return S, dS


def reduced_discriminant(bc: BoundaryConditions, kappa):
    """``Delta(k) / (2 i k)`` for general conditions: even, entire, no trivial zero at 0."""
    A, B, C, D = bc.general_coefficients()
    k = np.asarray(kappa, dtype=complex)
    S, _ = _sinc_parts(k, bc.L)
    return A + B * np.cos(k * bc.L) + (C + D * k * k) * S


def _reduced_and_derivative(bc, k):
    A, B, C, D = bc.general_coefficients()
    L = bc.L
    S, dS = _sinc_parts(k, L)
    g = A + B * np.cos(k * L) + (C + D * k * k) * S
    dg = -B * L * np.sin(k * L) + 2 * D * k * S + (C + D * k * k) * dS
    return g, dg


# -- data types -----------------------------------------------------------


@dataclass(frozen=True)
class RootRecord:
    index: int
    branch: int  # +1 for the representative, -1 for its negative
    kappa: complex
    ddelta: complex
    tag: str


@dataclass(frozen=True, eq=False)
class Spectrum:
    """Certified zeros of the discriminant.

    Parallel arrays hold every stored zero (each representative together with
    its negative).  ``index`` is the closed-form ``j`` for pseudoperiodic data
    and the rank of the representative for general data.
    """

    bc: BoundaryConditions
    index: np.ndarray
    branch: np.ndarray
    kappa: np.ndarray
    ddelta: np.ndarray
    tags: tuple
    kappa0: complex | None = None

    def __len__(self):
        return len(self.kappa)

    @property
    def roots(self):
        return [
            RootRecord(int(i), int(b), complex(k), complex(d), t)
            for i, b, k, d, t in zip(self.index, self.branch, self.kappa, self.ddelta, self.tags)
        ]

    def representatives(self, n=None):
        """``(index, kappa, ddelta)`` of the representatives in summation order.

        Summation order is ``|j|`` ascending with ``j`` before ``-j`` for
        pseudoperiodic data and plain rank order otherwise.  With ``n`` given
        the first ``n`` are returned (``n`` odd selects ``|j| <= (n-1)/2`` in
        the pseudoperiodic case).
        """
        sel = self.branch == 1
        idx, kap, dd = self.index[sel], self.kappa[sel], self.ddelta[sel]
        if self.bc.is_pseudoperiodic:
            order = np.lexsort((-idx, np.abs(idx)))
        else:
            order = np.argsort(idx, kind="stable")
        idx, kap, dd = idx[order], kap[order], dd[order]
        if n is not None:
            if n > len(idx):
                raise DegenerateSpectrum(f"spectrum holds {len(idx)} modes, {n} requested")
            idx, kap, dd = idx[:n], kap[:n], dd[:n]
        return idx, kap, dd

    def to_json(self):
        def cj(z):
            return {"re": float(z.real), "im": float(z.imag)}

        out = {
            "variant": self.bc.variant,
            "L": self.bc.L,
            "roots": [
                {"index": r.index, "branch": r.branch, "kappa": cj(r.kappa), "ddelta": cj(r.ddelta), "class": r.tag}
                for r in self.roots
            ],
        }
        if self.kappa0 is not None:
            out["kappa0"] = cj(self.kappa0)
        counts = {}
        for t in self.tags:
            counts[t] = counts.get(t, 0) + 1
        out["classCounts"] = dict(sorted(counts.items()))
        return out


@dataclass(frozen=True)
class ModeReport:
    growing: int
    decaying: int
    neutral: int
    well_posed: bool
    energy_conserving: bool

    def to_json(self):
        return {
            "growing": self.growing,
            "decaying": self.decaying,
            "neutral": self.neutral,
            "wellPosed": self.well_posed,
            "energyConserving": self.energy_conserving,
        }


# -- helpers ----------------------------------------------------------------


def kappa0(bc: BoundaryConditions) -> complex:
    """Principal-branch ``arccos((1 + b0 b1) / (b0 + b1)) / L``; may be complex."""
    if not bc.is_pseudoperiodic:
        raise BadSpec("kappa0 is only defined for pseudoperiodic conditions")
    b0, b1 = bc.betas
    r = (1 + b0 * b1) / (b0 + b1)
    k0 = complex(np.arccos(complex(r))) / bc.L
    if abs(k0.imag) <= ILLPOSED_TOL:
        k0 = complex(k0.real, 0.0)
    return k0


def classify(kappa):
    k = complex(kappa)
    scale = max(1.0, abs(k))
    if abs(k.imag) <= AXIS_TOL * scale:
        return REAL_POSITIVE if k.real > 0 else REAL_NEGATIVE
    if abs(k.real) <= AXIS_TOL * scale:
        return IMAG_UP if k.imag > 0 else IMAG_DOWN
    return COMPLEX_QUADRANT


def _sort_key(k):
    return (round(abs(k.real), 12), -k.imag)


def _check_roots(bc, kap):
    res = np.abs(discriminant(bc, kap))
    bound = RESIDUAL_TOL * np.maximum(1.0, np.abs(kap) ** 2)
    if np.any(res >= bound):
        worst = int(np.argmax(res / bound))
        raise DegenerateSpectrum(f"root {kap[worst]} has residual {res[worst]:.3e}")
    dd = discriminant_derivative(bc, kap)
    if np.any(np.abs(dd) < SIMPLE_ZERO_TOL * np.maximum(1.0, np.abs(kap))):
        worst = int(np.argmin(np.abs(dd)))
        raise DegenerateSpectrum(f"near-double zero at {kap[worst]}")
    return dd


def _assemble(bc, idx, reps, k0=None):
    reps = np.asarray(reps, dtype=complex)
    idx = np.asarray(idx, dtype=int)
    kap = np.concatenate([reps, -reps])
    index = np.concatenate([idx, idx])
    branch = np.concatenate([np.ones(len(reps), int), -np.ones(len(reps), int)])
    dd = _check_roots(bc, kap)
    order = sorted(range(len(kap)), key=lambda i: _sort_key(kap[i]))
    order = np.array(order, dtype=int)
    return Spectrum(
        bc=bc,
        index=index[order],
        branch=branch[order],
        kappa=kap[order],
        ddelta=dd[order],
        tags=tuple(classify(k) for k in kap[order]),
        kappa0=k0,
    )


# -- pseudoperiodic ---------------------------------------------------------


def _pp_spectrum(bc, count):
    k0 = kappa0(bc)
    if k0.imag != 0.0:
        raise IllPosed(f"kappa0 = {k0} is not real: infinitely many unstable modes")
    L = bc.L
    ratio = k0.real * L / math.pi
    if abs(ratio - round(ratio)) < 1e-9:
        raise DegenerateSpectrum("kappa0 is a multiple of pi/L; zeros are not simple")
    n = max(0, math.ceil((count - 1) / 2))
    j = np.arange(-n, n + 1)
    reps = k0 + 2 * math.pi * j / L
    return _assemble(bc, j, reps, k0)


# -- general: asymptotes -----------------------------------------------------


def asymptotic_root(bc: BoundaryConditions, j: int, branch: int = 1) -> complex:
    """Large-index approximation of the ``j``-th zero for general conditions."""
    if bc.is_pseudoperiodic:
        raise BadSpec("asymptotic_root applies to general boundary conditions")
    A, B, C, D = bc.general_coefficients()
    L = bc.L
    if D != 0:
        return complex(j * math.pi / L)
    if B == 0:
        raise UndefinedAsymptote("arccos argument has a vanishing denominator")
    theta = complex(np.arccos(complex(-A / B)))
    sign = 1 if branch >= 0 else -1
    return (2 * j * math.pi + sign * theta) / L


# -- general: numerical root finding -----------------------------------------


def _newton(bc, seeds, maxiter=80):
    """Vectorised damped Newton on the reduced discriminant."""
    z = np.array(seeds, dtype=complex)
    L = bc.L
    max_step = 0.5 * math.pi / L
    done = np.zeros(z.shape, dtype=bool)
    for _ in range(maxiter):
        g, dg = _reduced_and_derivative(bc, z)
        with np.errstate(divide="ignore", invalid="ignore"):
            step = np.where(dg != 0, g / dg, 0.0)
        big = np.abs(step) > max_step
        step = np.where(big, step / np.abs(np.where(big, step, 1.0)) * max_step, step)
        step = np.where(done, 0.0, step)
        z = z - step
        done |= np.abs(step) <= 1e-15 * np.maximum(1.0, np.abs(z))
        if done.all():
            break
    g, dg = _reduced_and_derivative(bc, z)
    scale = _reduced_scale(bc, z)
    ok = np.isfinite(z) & (np.abs(g) <= 1e-11 * scale) & (np.abs(dg) > 0)
    return z[ok]


def _reduced_scale(bc, z):
    A, B, C, D = bc.general_coefficients()
    z = np.asarray(z, dtype=complex)
    growth = np.cosh(np.abs(z.imag) * bc.L)
    return (abs(A) + (abs(B) + abs(C) * bc.L + abs(D) * np.abs(z) * (1 + np.abs(z) * bc.L)) * growth) + 1e-300


def _coefficients_real(bc):
    return all(abs(c.imag) == 0.0 for c in bc.general_coefficients())


def _imaginary_axis_roots(bc, height):
    """Zeros ``i y`` with ``0 < y <= height`` of the real-valued restriction."""
    A, B, C, D = (c.real for c in bc.general_coefficients())
    L = bc.L

    def f(y):
        S = L if y == 0 else math.sinh(y * L) / y
        return A + B * math.cosh(y * L) + (C - D * y * y) * S

    ys = np.linspace(1e-6 / L, height, 4001)
    vals = np.array([f(y) for y in ys])
    found = []
    for i in range(len(ys) - 1):
        fa, fb = vals[i], vals[i + 1]
        if fa == 0.0:
            found.append(ys[i])
            continue
        if fa * fb < 0:
            a, b = ys[i], ys[i + 1]
            for _ in range(200):
                m = 0.5 * (a + b)
                fm = f(m)
                if fm == 0.0 or b - a < 1e-15 * max(1.0, m):
                    break
                if (fm > 0) == (fa > 0):
                    a, fa = m, fm
                else:
                    b = m
            found.append(0.5 * (a + b))
    return [1j * y for y in found]


def _edge_samples(a, b, L, n0):
    # exp(+-i k L) turns by about L radians per unit length; sample densely
    # enough that no 2*pi step can alias between neighbours
    return max(n0, int(math.ceil(_SAMPLES_PER_RADIAN * abs(b - a) * L)) + 1)


def _winding(bc, corners, n0=64, max_rounds=40):
    """Argument-principle count of zeros of the reduced discriminant in a rectangle.

    Returns ``None`` when the contour passes too close to a zero.
    """
    x0, x1, y0, y1 = corners
    path = [complex(x0, y0), complex(x1, y0), complex(x1, y1), complex(x0, y1), complex(x0, y0)]
    total = 0.0
    for a, b in zip(path[:-1], path[1:]):
        t = np.linspace(0.0, 1.0, _edge_samples(a, b, bc.L, n0))
        for _ in range(max_rounds):
            z = a + (b - a) * t
            g = reduced_discriminant(bc, z)
            mag = np.abs(g)
            if np.any(mag <= 1e-9 * _reduced_scale(bc, z)):
                return None
            d = np.angle(g[1:] / g[:-1])
            bad = np.abs(d) > 0.4
            if not bad.any():
                break
            mids = 0.5 * (t[:-1] + t[1:])[bad]
            t = np.sort(np.concatenate([t, mids]))
        else:
            return None
        total += d.sum()
    w = total / (2 * math.pi)
    n = int(round(w))
    if abs(w - n) > 0.05:
        return None
    return n


def _inside(roots, corners):
    x0, x1, y0, y1 = corners
    z = roots.array if isinstance(roots, _RootSet) else np.asarray(roots, dtype=complex)
    sel = (z.real > x0) & (z.real < x1) & (z.imag > y0) & (z.imag < y1)
    return [complex(w) for w in z[sel]]


class _RootSet:
    """Deduplicated zeros; the reduced discriminant is even, so -z joins z.

    Zeros are also kept sorted by real part so that a duplicate check only
    looks at the few neighbours within tolerance.
    """

    def __init__(self):
        self.items = []
        self._keys = []  # sorted real parts
        self._vals = []  # zeros in the same order
        self._array = None

    @property
    def array(self):
        if self._array is None or len(self._array) != len(self.items):
            self._array = np.array(self.items, dtype=complex)
        return self._array

    def _add_one(self, z):
        tol = DEDUP_TOL * max(1.0, abs(z))
        lo = bisect.bisect_left(self._keys, z.real - tol)
        hi = bisect.bisect_right(self._keys, z.real + tol)
        for w in self._vals[lo:hi]:
            if abs(w - z) <= tol:
                return False
        self.items.append(z)
        self._keys.insert(hi, z.real)
        self._vals.insert(hi, z)
        return True

    def add(self, z):
        z = complex(z)
        new = self._add_one(z)
        self._add_one(-z)
        return new

    def extend(self, zs):
        return sum(self.add(z) for z in zs)


def _grid_seeds(corners, n=6):
    x0, x1, y0, y1 = corners
    xs = np.linspace(x0, x1, n + 2)[1:-1]
    ys = np.linspace(y0, y1, n + 2)[1:-1]
    return (xs[None, :] + 1j * ys[:, None]).ravel()


def _resolve(bc, corners, found, depth=0):
    """Make ``found`` complete inside ``corners``; returns the certified count."""
    n = _winding(bc, corners)
    if n is None:
        raise _EdgeHit()
    have = _inside(found, corners)
    if n == len(have):
        return n
    if len(have) > n:
        raise DegenerateSpectrum(f"more roots found than counted in {corners}")
    found.extend(_newton(bc, _grid_seeds(corners)))
    have = _inside(found, corners)
    if n == len(have):
        return n
    if depth > 40:
        raise DegenerateSpectrum(f"could not isolate zeros in {corners}")
    x0, x1, y0, y1 = corners
    if (x1 - x0) >= (y1 - y0):
        halves = _split(bc, found, x0, x1, lambda c: ((x0, c, y0, y1), (c, x1, y0, y1)), axis=0)
    else:
        halves = _split(bc, found, y0, y1, lambda c: ((x0, x1, y0, c), (x0, x1, c, y1)), axis=1)
    total = sum(_resolve(bc, h, found, depth + 1) for h in halves)
    if total != n:
        raise DegenerateSpectrum(f"inconsistent zero counts in {corners}")
    return total


class _EdgeHit(Exception):
    pass


def _split(bc, found, lo, hi, make, axis):
    for frac in (0.5, 0.4637, 0.5381, 0.4129, 0.5877):
        c = lo + frac * (hi - lo)
        coords = found.array.real if axis == 0 else found.array.imag
        if not np.any(np.abs(coords - c) <= 1e-3 * (hi - lo)):
            parts = make(c)
            if all(_winding(bc, p) is not None for p in parts):
                return parts
    raise DegenerateSpectrum("could not place a subdivision line away from zeros")


def _certify_rect(bc, corners, found):
    """Resolve a rectangle, moving its right edge if a zero sits on the contour."""
    x0, x1, y0, y1 = corners
    w = x1 - x0
    for nudge in (0.0, 1.3e-3, -1.7e-3, 2.9e-3, -4.1e-3, 7.3e-3):
        for hs in (1.0, 1.037):
            c = (x0, x1 + nudge * w, y0 * hs, y1 * hs)
            try:
                return c, _resolve(bc, c, found)
            except _EdgeHit:
                continue
    raise DegenerateSpectrum(f"zero on the boundary of {corners}")


def _certify_centre(bc, half_width, height, found):
    for f in (1.0, 0.93, 1.071, 0.87):
        c = half_width * f
        corners = (-c, c, -height, height)
        try:
            return corners, _resolve(bc, corners, found)
        except _EdgeHit:
            continue
    raise DegenerateSpectrum("zero on the boundary of the central box")


def _cut_positions(reals, start, stop, width):
    """Vertical cut lines roughly ``width`` apart, placed in gaps between zeros."""
    reals = np.sort(np.asarray(reals))
    cuts = [start]
    x = start
    while x < stop:
        target = min(x + width, stop)
        if target >= stop:
            cuts.append(stop)
            break
        lo, hi = target - 0.25 * width, target + 0.25 * width
        window = reals[(reals > lo) & (reals < hi)]
        pts = np.concatenate([[lo], window, [hi]])
        gaps = np.diff(pts)
        i = int(np.argmax(gaps))
        c = 0.5 * (pts[i] + pts[i + 1])
        cuts.append(c)
        x = c
    return cuts


def _asymptotic_seeds(bc, x_lo, x_hi):
    A, B, C, D = bc.general_coefficients()
    L = bc.L
    j0 = max(0, int(x_lo * L / math.pi) - 2)
    j1 = int(x_hi * L / math.pi) + 3
    if D != 0:
        seeds = [j * math.pi / L for j in range(j0, j1)]
    elif B != 0:
        seeds = [asymptotic_root(bc, j, s) for j in range(j0 // 2, j1 // 2 + 2) for s in (1, -1)]
    else:
        seeds = [(j + 0.5) * math.pi / L for j in range(j0, j1)]
    seeds = np.array(seeds, dtype=complex)
    return seeds[seeds.real > 0]


def _general_spectrum(bc, count):
    A, B, C, D = bc.general_coefficients()
    L = bc.L
    if abs(A + B + C * L) < 1e-12 * max(1.0, abs(A), abs(B), abs(C * L)):
        raise DegenerateSpectrum("kappa = 0 is a multiple zero (zero mode present)")
    height = SEARCH_HEIGHT / L
    strip = 12 * math.pi / L
    found = _RootSet()
    if _coefficients_real(bc):
        found.extend(_imaginary_axis_roots(bc, height))

    centre, _ = _certify_centre(bc, min(1.5, 0.5 * math.pi) / L, height, found)
    pos = centre[1]
    x_stop = (count + 2) * math.pi / L
    while True:
        found.extend(_newton(bc, _asymptotic_seeds(bc, pos, x_stop)))
        reals = [z.real for z in found.items if z.real > 0]
        cuts = _cut_positions(reals, pos, x_stop, strip)
        a = cuts[0]
        for b in cuts[1:]:
            used, _ = _certify_rect(bc, (a, b, -height, height), found)
            a = used[1]
        pos = a
        reps = [z for z in _representatives(found.items) if z.real < pos]
        if len(reps) >= count:
            break
        x_stop = pos + max(strip, 0.5 * (pos - centre[1]))

    reps.sort(key=_sort_key)
    reps = [_polish(bc, z) for z in reps]
    return _assemble(bc, np.arange(len(reps)), reps)


def _representatives(items):
    out = []
    for z in items:
        scale = max(1.0, abs(z))
        if z.real > AXIS_TOL * scale or (abs(z.real) <= AXIS_TOL * scale and z.imag > 0):
            out.append(z)
    return out


def _polish(bc, z):
    """A few Newton steps on Delta itself; keeps exact axis placement."""
    on_real = z.imag == 0.0
    on_imag = z.real == 0.0
    for _ in range(3):
        d = discriminant(bc, z)
        dd = discriminant_derivative(bc, z)
        if dd == 0:
            break
        step = d / dd
        if on_real:
            step = complex(step.real, 0.0)
        if on_imag:
            step = complex(0.0, step.imag)
        if abs(step) > 1e-8 * max(1.0, abs(z)):
            break
        z = z - step
    return z


@lru_cache(maxsize=64)
def _cached_spectrum(bc, count):
    if bc.is_pseudoperiodic:
        return _pp_spectrum(bc, count)
    return _general_spectrum(bc, count)


def compute_spectrum(bc: BoundaryConditions, count: int) -> Spectrum:
    """At least ``count`` certified zero pairs ``(kappa, -kappa)``.

    Raises :class:`IllPosed` for pseudoperiodic data with complex ``kappa0``
    and :class:`DegenerateSpectrum` for multiple or unresolvable zeros.
    """
    if count < 1:
        raise BadSpec("count must be positive")
    return _cached_spectrum(bc, int(count))


def classify_modes(spec: Spectrum) -> ModeReport:
    k2 = spec.kappa**2
    im = k2.imag
    growing = int(np.sum(im > NEUTRAL_TOL))
    decaying = int(np.sum(im < -NEUTRAL_TOL))
    neutral = len(spec) - growing - decaying
    bc = spec.bc
    return ModeReport(
        growing=growing,
        decaying=decaying,
        neutral=neutral,
        well_posed=True,
        energy_conserving=bc.energy_conserving,
    )


def count_zeros(bc: BoundaryConditions, corners, include_origin=True):
    """Argument-principle count of zeros of Delta in ``(x0, x1, y0, y1)``.

    For general conditions Delta always vanishes at 0; that trivial zero is
    included when it lies inside and ``include_origin`` is true.
    """
    x0, x1, y0, y1 = corners
    if bc.is_pseudoperiodic:
        n = _winding_full(bc, corners)
    else:
        n = _winding(bc, corners)
        if n is not None and include_origin and x0 < 0 < x1 and y0 < 0 < y1:
            n += 1
    if n is None:
        raise DegenerateSpectrum("contour passes through a zero")
    return n


def _winding_full(bc, corners, n0=64, max_rounds=40):
    x0, x1, y0, y1 = corners
    path = [complex(x0, y0), complex(x1, y0), complex(x1, y1), complex(x0, y1), complex(x0, y0)]
    total = 0.0
    for a, b in zip(path[:-1], path[1:]):
        t = np.linspace(0.0, 1.0, _edge_samples(a, b, bc.L, n0))
        for _ in range(max_rounds):
            z = a + (b - a) * t
            g = discriminant(bc, z)
            if np.any(g == 0):
                return None
            d = np.angle(g[1:] / g[:-1])
            bad = np.abs(d) > 0.4
            if not bad.any():
                break
            t = np.sort(np.concatenate([t, 0.5 * (t[:-1] + t[1:])[bad]]))
        else:
            return None
        total += d.sum()
    w = total / (2 * math.pi)
    n = int(round(w))
    return n if abs(w - n) < 0.05 else None
