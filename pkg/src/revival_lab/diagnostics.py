"""Energy, field comparison, roughness and piecewise-linearity diagnostics."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import BadSpec, GridMismatch, InsufficientResolution
from .solver import FieldSample

MIN_DIMENSION_GRID = 1024
BREAKPOINT_TOL = 1e-3


@dataclass(frozen=True)
class ComparisonReport:
    l2: float
    sup: float
    grid_size: int

    def to_json(self):
        return {"l2": self.l2, "sup": self.sup, "gridSize": self.grid_size}


@dataclass(frozen=True)
class RoughnessReport:
    dimension: float
    scales_used: tuple
    r_squared: float

    def to_json(self):
        return {"dimension": self.dimension, "scalesUsed": list(self.scales_used), "rSquared": self.r_squared}


def _mean_trapezoid(x, y):
    """``(1/|I|) int_I y`` on the grid's own span ``I``."""
    span = x[-1] - x[0]
    if span <= 0:
        return float(np.real(y[0]))
    return float(np.trapezoid(y, x) / span)


def energy(field: FieldSample) -> float:
    """Trapezoidal ``(1/L) int_0^L |u|^2 dx``; the grid is assumed to span ``[0, L]``."""
    return _mean_trapezoid(field.grid, np.abs(field.values) ** 2)


def compare(a: FieldSample, b: FieldSample) -> ComparisonReport:
    """Normalised L2 and sup distances on a shared grid."""
    if a.grid.shape != b.grid.shape or not np.array_equal(a.grid, b.grid):
        raise GridMismatch("fields are sampled on different grids")
    d = np.abs(a.values - b.values)
    sup = float(d.max()) if d.size else 0.0
    l2 = float(np.sqrt(max(_mean_trapezoid(a.grid, d * d), 0.0))) if d.size else 0.0
    return ComparisonReport(l2=min(l2, sup), sup=sup, grid_size=int(a.grid.size))


def _box_counts(x, y, eps_list):
    """Boxes of side ``eps`` met by the piecewise-linear graph of ``y`` in the unit square."""
    counts = []
    # consecutive samples are joined, so each column covers the y-range of its
    # samples together with the endpoints of the neighbouring segments
    lo_seg = np.minimum(y[:-1], y[1:])
    hi_seg = np.maximum(y[:-1], y[1:])
    mid = 0.5 * (x[:-1] + x[1:])
    for eps in eps_list:
        col = np.minimum((mid / eps).astype(int), int(round(1 / eps)) - 1)
        ncol = col.max() + 1
        lo = np.full(ncol, np.inf)
        hi = np.full(ncol, -np.inf)
        np.minimum.at(lo, col, lo_seg)
        np.maximum.at(hi, col, hi_seg)
        ok = np.isfinite(lo)
        top = np.minimum(np.floor(hi[ok] / eps), round(1 / eps) - 1)
        bottom = np.minimum(np.floor(lo[ok] / eps), round(1 / eps) - 1)
        counts.append(float(np.sum(top - bottom + 1)))
    return np.array(counts)


def box_dimension(field: FieldSample) -> RoughnessReport:
    """Box-counting estimate for the graph of ``Re u``.

    The graph is rescaled into the unit square and boxes of side ``2^-k`` are
    counted.  The slope of ``log N`` against ``log(1/eps)`` is fitted over a
    decade (four dyadic steps) centred in the resolvable range ``1 <= k <=
    log2(n - 1)``, away from both the single-box limit and the sampling limit.
    """
    n = field.grid.size
    if n < MIN_DIMENSION_GRID:
        raise InsufficientResolution(f"need at least {MIN_DIMENSION_GRID} grid points, got {n}")
    x = field.grid
    x = (x - x[0]) / (x[-1] - x[0])
    y = field.values.real
    rng = y.max() - y.min()
    y = (y - y.min()) / rng if rng > 0 else np.zeros_like(y)

    k_max = int(np.floor(np.log2(n - 1)))
    k_lo = max(1, k_max // 2 - 2)
    ks = np.arange(k_lo, k_lo + 5)
    eps = 2.0 ** (-ks)
    counts = _box_counts(x, y, eps)
    X, Y = np.log(1.0 / eps), np.log(counts)
    slope, intercept = np.polyfit(X, Y, 1)
    resid = Y - (slope * X + intercept)
    ss_tot = float(np.sum((Y - Y.mean()) ** 2))
    r2 = 1.0 - float(np.sum(resid**2)) / ss_tot if ss_tot > 0 else 1.0
    return RoughnessReport(dimension=float(slope), scales_used=tuple(float(e) for e in eps), r_squared=max(0.0, min(1.0, r2)))


def linearity_breakpoints(field: FieldSample, tol: float = BREAKPOINT_TOL):
    """Grid locations where ``Re u`` or ``Im u`` stops being affine.

    A point is flagged when the jump in discrete slope of either part,
    ``|u[i-1] - 2u[i] + u[i+1]| / h``, exceeds ``tol * max|u| / L``.
    Adjacent flags (a kink between two nodes lights up both) are merged and
    reported at their mean position.
    """
    x, u = field.grid, field.values
    if x.size < 3:
        return []
    h = np.diff(x)
    if np.max(np.abs(h - h.mean())) > 1e-9 * h.mean():
        raise BadSpec("linearity_breakpoints needs a uniform grid")
    scale = float(np.max(np.abs(u)))
    if scale == 0:
        return []
    d2 = u[:-2] - 2 * u[1:-1] + u[2:]
    bound = tol * scale * h.mean() / (x[-1] - x[0])
    flag = (np.abs(d2.real) > bound) | (np.abs(d2.imag) > bound)
    idx = np.nonzero(flag)[0] + 1
    out, group = [], []
    for i in idx:
        if group and i - group[-1] > 1:
            out.append(float(np.mean(x[group])))
            group = []
        group.append(i)
    if group:
        out.append(float(np.mean(x[group])))
    return out
