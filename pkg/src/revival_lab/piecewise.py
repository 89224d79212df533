"""Complex piecewise polynomials on [0, L].

Every initial datum is held as a :class:`PiecewisePoly`.  The class is closed
under translation, restriction, scalar weighting and addition, which is all the
revival construction needs, and its bounded Fourier transform
``int_0^L exp(-i k x) f(x) dx`` is evaluated in closed form.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import comb
from typing import Union

import numpy as np

from .errors import BadSpec, OutOfDomain

MAX_DEGREE = 8
# below this |kappa|*h the moment recurrence loses digits; use the power series
SERIES_SWITCH = 4.0
_SERIES_TERMS = 48
_DOMAIN_SLACK = 1e-12


def _taylor_shift(coeffs, h):
    """Coefficients of ``p(z + h)`` in powers of ``z``."""
    c = np.asarray(coeffs, dtype=complex)
    n = len(c)
    out = np.zeros(n, dtype=complex)
    for k in range(n):
        for i in range(k, n):
            out[k] += c[i] * comb(i, k) * h ** (i - k)
    return out


@dataclass(frozen=True)
class Segment:
    lo: float
    hi: float
    coeffs: tuple  # complex, polynomial in (x - lo)

    @property
    def degree(self):
        return len(self.coeffs) - 1


@dataclass(frozen=True)
class PiecewisePoly:
    """Sum of polynomial pieces; zero on the gaps between segments."""

    L: float
    segments: tuple = field(default_factory=tuple)

    def __post_init__(self):
        if not self.L > 0:
            raise BadSpec(f"interval length must be positive, got {self.L}")
        prev_hi = 0.0
        for seg in self.segments:
            if not (0.0 <= seg.lo < seg.hi <= self.L * (1 + _DOMAIN_SLACK)):
                raise BadSpec(f"segment [{seg.lo}, {seg.hi}] not inside [0, {self.L}]")
            if seg.lo < prev_hi - _DOMAIN_SLACK * self.L:
                raise BadSpec("segments overlap or are unsorted")
            if seg.degree > MAX_DEGREE:
                raise BadSpec(f"degree {seg.degree} exceeds cap {MAX_DEGREE}")
            prev_hi = seg.hi

    # -- construction helpers -------------------------------------------
    @classmethod
    def from_pieces(cls, L, pieces):
        """Build from ``(lo, hi, coeffs)`` triples, dropping zero pieces."""
        segs = []
        for lo, hi, coeffs in sorted(pieces, key=lambda p: p[0]):
            c = np.asarray(coeffs, dtype=complex)
            if hi - lo <= 0 or not np.any(c != 0):
                continue
            nz = np.nonzero(c)[0]
            c = c[: nz[-1] + 1]
            segs.append(Segment(float(lo), float(hi), tuple(complex(v) for v in c)))
        return cls(float(L), tuple(segs))

    @property
    def breakpoints(self):
        pts = set()
        for s in self.segments:
            pts.add(s.lo)
            pts.add(s.hi)
        return sorted(pts)

    @property
    def support(self):
        """List of (lo, hi) intervals where the function may be nonzero."""
        return [(s.lo, s.hi) for s in self.segments]

    # -- algebra -----------------------------------------------------------
    def __mul__(self, w):
        w = complex(w)
        if w == 0:
            return PiecewisePoly(self.L, ())
        return PiecewisePoly(
            self.L,
            tuple(Segment(s.lo, s.hi, tuple(w * c for c in s.coeffs)) for s in self.segments),
        )

    __rmul__ = __mul__

    def __neg__(self):
        return self * -1

    def conj(self):
        return PiecewisePoly(
            self.L,
            tuple(Segment(s.lo, s.hi, tuple(c.conjugate() for c in s.coeffs)) for s in self.segments),
        )

    def __add__(self, other):
        if not isinstance(other, PiecewisePoly):
            return NotImplemented
        if other.L != self.L:
            raise BadSpec("cannot add functions on different intervals")
        return sum_pieces(self.L, [self, other])

    def __sub__(self, other):
        return self + (-other)

    def translated(self, d, lo, hi):
        """Return ``g`` with ``g(x) = self(x + d)`` on ``[lo, hi)`` and 0 elsewhere.

        Arguments falling outside [0, L] are treated as zero.
        """
        lo, hi = max(lo, 0.0), min(hi, self.L)
        pieces = []
        for s in self.segments:
            a = max(s.lo - d, lo)
            b = min(s.hi - d, hi)
            if b - a <= 1e-15 * self.L:
                continue
            # polynomial in (x + d - s.lo) re-centred at a
            pieces.append((a, b, _taylor_shift(s.coeffs, a + d - s.lo)))
        return PiecewisePoly.from_pieces(self.L, pieces)

    # -- evaluation --------------------------------------------------------
    def __call__(self, x):
        return evaluate(self, x)


def sum_pieces(L, funcs, weights=None):
    """Weighted sum of piecewise polynomials on a common refinement."""
    if weights is None:
        weights = [1.0] * len(funcs)
    cuts = set()
    for f in funcs:
        cuts.update(f.breakpoints)
    cuts = sorted(cuts)
    pieces = []
    for a, b in zip(cuts[:-1], cuts[1:]):
        if b - a <= 1e-15 * L:
            continue
        acc = np.zeros(MAX_DEGREE + 1, dtype=complex)
        mid = 0.5 * (a + b)
        hit = False
        for f, w in zip(funcs, weights):
            if w == 0:
                continue
            for s in f.segments:
                if s.lo <= mid < s.hi:
                    c = _taylor_shift(s.coeffs, a - s.lo)
                    acc[: len(c)] += w * c
                    hit = True
                    break
        if hit:
            pieces.append((a, b, acc))
    return PiecewisePoly.from_pieces(L, pieces)


def _coeff_table(pw):
    nseg = len(pw.segments)
    width = max((s.degree + 1 for s in pw.segments), default=1)
    table = np.zeros((nseg, width), dtype=complex)
    for i, s in enumerate(pw.segments):
        table[i, : len(s.coeffs)] = s.coeffs
    los = np.array([s.lo for s in pw.segments])
    his = np.array([s.hi for s in pw.segments])
    return table, los, his


def _eval_inside(pw, x):
    """Vectorised evaluation for x already known to lie in [0, L]."""
    out = np.zeros(x.shape, dtype=complex)
    if not pw.segments:
        return out
    table, los, his = _coeff_table(pw)
    idx = np.searchsorted(los, x, side="right") - 1
    ok = idx >= 0
    safe = np.where(ok, idx, 0)
    at_end = (x >= pw.L) & (his[safe] >= pw.L * (1 - _DOMAIN_SLACK))
    ok &= (x < his[safe]) | at_end
    z = x - los[safe]
    acc = np.zeros(x.shape, dtype=complex)
    for k in range(table.shape[1] - 1, -1, -1):
        acc = acc * z + table[safe, k]
    out[ok] = acc[ok]
    return out


def evaluate(pw: PiecewisePoly, x):
    """Value of ``pw`` at ``x`` (scalar or array); zero on gaps.

    Internal breakpoints are right-continuous; the right endpoint ``L`` takes
    the left limit of the last segment.
    """
    arr = np.asarray(x, dtype=float)
    tol = _DOMAIN_SLACK * pw.L
    if np.any(arr < -tol) or np.any(arr > pw.L + tol):
        raise OutOfDomain(f"evaluation point outside [0, {pw.L}]")
    res = _eval_inside(pw, np.clip(arr, 0.0, pw.L))
    if np.ndim(x) == 0:
        return complex(res)
    return res


def _monomial_moments(kappa, h, kmax):
    """``I[k] = int_0^h y^k exp(-i kappa y) dy`` for k = 0..kmax (rows)."""
    shape = np.shape(kappa)
    kappa = np.atleast_1d(np.asarray(kappa, dtype=complex)).ravel()
    out = np.empty((kmax + 1, kappa.size), dtype=complex)
    small = np.abs(kappa) * h < SERIES_SWITCH

    # power series, stable for small |kappa h|
    if np.any(small):
        zk = -1j * kappa[small] * h
        for k in range(kmax + 1):
            term = np.ones_like(zk)
            acc = term / (k + 1)
            for n in range(1, _SERIES_TERMS):
                term = term * zk / n
                acc = acc + term / (k + n + 1)
            out[k][small] = h ** (k + 1) * acc

    big = ~small
    if np.any(big):
        kb = kappa[big]
        e = np.exp(-1j * kb * h)
        ik = 1j * kb
        prev = (1.0 - e) / ik
        out[0][big] = prev
        for k in range(1, kmax + 1):
            prev = (-(h**k) * e + k * prev) / ik
            out[k][big] = prev
    return out.reshape((kmax + 1,) + shape)


def bounded_ft(pw: PiecewisePoly, kappa):
    """Exact ``int_0^L exp(-i kappa x) pw(x) dx``, vectorised over ``kappa``."""
    kap = np.asarray(kappa, dtype=complex)
    total = np.zeros(kap.shape, dtype=complex)
    for s in pw.segments:
        h = s.hi - s.lo
        mom = _monomial_moments(kap, h, s.degree)
        part = np.zeros(kap.shape, dtype=complex)
        for k, c in enumerate(s.coeffs):
            if c != 0:
                part += c * mom[k]
        total += np.exp(-1j * kap * s.lo) * part
    if np.ndim(kappa) == 0:
        return complex(total)
    return total


# -- datum specifications ------------------------------------------------


@dataclass(frozen=True)
class BoxSpec:
    a: float
    b: float
    height: complex = 1.0


@dataclass(frozen=True)
class RampSpec:
    """``value + slope * (x - center)`` on ``(center - half_width, center + half_width)``.

    Defaults reproduce the small-support datum ``8x`` on ``(1/8 - 1/50, 1/8 + 1/50)``.
    """

    center: float = 0.125
    half_width: float = 0.02
    slope: complex = 8.0
    value: complex = 1.0


@dataclass(frozen=True)
class PolyBumpSpec:
    """``((x - a)(b - x))**3`` scaled to unit peak; C^2 at both edges."""

    a: float
    b: float


@dataclass(frozen=True)
class RawSegments:
    pieces: tuple  # of (lo, hi, coeffs)


DatumSpec = Union[BoxSpec, RampSpec, PolyBumpSpec, RawSegments]


def _check_interval(a, b, L):
    if not (0.0 <= a < b <= L):
        raise BadSpec(f"need 0 <= a < b <= L, got a={a}, b={b}, L={L}")


def make_datum(kind: DatumSpec, L: float = 1.0) -> PiecewisePoly:
    if isinstance(kind, BoxSpec):
        _check_interval(kind.a, kind.b, L)
        return PiecewisePoly.from_pieces(L, [(kind.a, kind.b, [kind.height])])
    if isinstance(kind, RampSpec):
        a, b = kind.center - kind.half_width, kind.center + kind.half_width
        _check_interval(a, b, L)
        start = complex(kind.value) - complex(kind.slope) * kind.half_width
        return PiecewisePoly.from_pieces(L, [(a, b, [start, kind.slope])])
    if isinstance(kind, PolyBumpSpec):
        _check_interval(kind.a, kind.b, L)
        w = kind.b - kind.a
        peak = (w / 2.0) ** 6
        coeffs = [0.0] * 7
        for k in range(4):
            coeffs[3 + k] = comb(3, k) * w ** (3 - k) * (-1) ** k / peak
        return PiecewisePoly.from_pieces(L, [(kind.a, kind.b, coeffs)])
    if isinstance(kind, RawSegments):
        for lo, hi, _ in kind.pieces:
            _check_interval(lo, hi, L)
        try:
            return PiecewisePoly.from_pieces(L, kind.pieces)
        except (TypeError, ValueError) as exc:
            if isinstance(exc, BadSpec):
                raise
            raise BadSpec(f"malformed segment list: {exc}") from exc
    raise BadSpec(f"unknown datum kind {kind!r}")


# -- pseudoperiodic extensions --------------------------------------------

SHARP = "sharp"
FLAT = "flat"


@dataclass(frozen=True)
class ExtensionSpec:
    """Full-line extension of ``base`` with per-period phase ``exp(i*gamma_phase)``.

    ``gamma_phase`` is ``kappa0*L`` for the multiplier gamma and ``-kappa0*L``
    for its inverse; integer powers are taken as ``exp(i*m*gamma_phase)``.
    """

    base: PiecewisePoly
    gamma_phase: complex
    mode: str = SHARP
    shift: float = 0.0

    def __post_init__(self):
        if self.mode not in (SHARP, FLAT):
            raise BadSpec(f"mode must be '{SHARP}' or '{FLAT}'")


def extended_eval(spec: ExtensionSpec, x):
    """Evaluate the shifted sharp/flat extension at real ``x`` (any value)."""
    L = spec.base.L
    xs = np.asarray(x, dtype=float)
    if spec.mode == SHARP:
        y = xs + spec.shift
        m = np.floor(y / L)
        local = y - m * L
    else:
        y = xs - spec.shift
        m = np.floor(y / L) + 1.0
        local = m * L - y
    local = np.clip(local, 0.0, L)
    vals = _eval_inside(spec.base, np.atleast_1d(local)).reshape(local.shape)
    res = np.exp(1j * spec.gamma_phase * m) * vals
    if np.ndim(x) == 0:
        return complex(res)
    return res

