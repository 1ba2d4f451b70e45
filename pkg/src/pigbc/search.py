"""Deterministic scan-then-golden-section minimisation on an interval."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0  # 1/phi
INV_PHI2 = (3.0 - math.sqrt(5.0)) / 2.0  # 1/phi^2

DEFAULT_GRID = 129
DEFAULT_XTOL = 1e-10
DEFAULT_TOL = 1e-9


@dataclass(frozen=True)
class ScalarMin:
    x: float
    value: float
    iterations: int
    converged: bool


def golden_section(f, a, b, xtol=DEFAULT_XTOL, max_iter=200):
    """Golden-section search for a minimum of ``f`` on ``[a, b]``.

    Returns ``(x, fx, iterations, bracket_width, spread)`` where ``spread``
    is the variation of ``f`` over the two interior points of the final
    bracket.
    """
    a, b = min(a, b), max(a, b)
    h = b - a
    c = a + INV_PHI2 * h
    d = a + INV_PHI * h
    fc, fd = f(c), f(d)
    it = 0
    while h > xtol and it < max_iter:
        it += 1
        if fc <= fd:
            b, d, fd = d, c, fc
            h = INV_PHI * h
            c = a + INV_PHI2 * h
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            h = INV_PHI * h
            d = a + INV_PHI * h
            fd = f(d)
    if fc <= fd:
        return c, fc, it, h, abs(fd - fc)
    return d, fd, it, h, abs(fd - fc)


def scan_then_golden(f, lo, hi, grid=DEFAULT_GRID, xtol=DEFAULT_XTOL, tol=DEFAULT_TOL, vectorized=False):
    """Minimise ``f`` on ``[lo, hi]``: uniform scan to bracket, golden section to refine.

    ``converged`` is True when the final bracket is narrower than ``xtol``
    times the interval length and, for an interior minimum, ``f`` varies by
    at most ``tol`` across it. A minimum pinned to an endpoint of
    ``[lo, hi]`` only needs the bracket criterion.
    The returned value never exceeds the best scanned value, so both
    interval endpoints are always candidates.
    """
    if grid < 3:
        raise ValueError("grid must have at least 3 points")
    if hi < lo:
        raise ValueError("empty interval")
    ts = np.linspace(lo, hi, grid)
    if vectorized:
        vals = np.asarray(f(ts), dtype=float)
    else:
        vals = np.array([f(t) for t in ts], dtype=float)
    k = int(np.nanargmin(vals))
    best_x, best_v = float(ts[k]), float(vals[k])
    if hi == lo:
        return ScalarMin(best_x, best_v, 0, True)
    a = float(ts[max(k - 1, 0)])
    b = float(ts[min(k + 1, grid - 1)])
    scale = hi - lo
    xg, vg, it, width, spread = golden_section(f, a, b, xtol=xtol * scale)
    if vg < best_v:
        best_x, best_v = xg, vg
    at_end = min(best_x - lo, hi - best_x) <= 2 * width
    converged = width <= xtol * scale and (spread <= tol or at_end)
    return ScalarMin(best_x, best_v, it, converged)
