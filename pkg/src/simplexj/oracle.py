"""Brute-force reference values for testing.

``quad_j`` integrates the defining integral of J by nested adaptive
Gauss-Kronrod (7/15 point) quadrature along the one-dimensional recursion

    J(y_0..y_d) = int_0^1 u^(d-1) J(u y_0, ..., u y_{d-1}) exp((1-u) y_d) du,

bottoming out at d = 1 with the integral of exp((1-u) r + u s).  Nothing in
this module calls the production evaluators.
"""
from __future__ import annotations

import heapq
import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import ToleranceNotMet, Unsupported
from .jfun import ArgVector

__all__ = ["QuadConfig", "gauss_kronrod_15", "adaptive_quad", "quad_j", "quad_j_err", "fd_grad"]

# Kronrod abscissae on [-1, 1] (nonnegative half); odd positions 1, 3, 5, 7
# are the 7-point Gauss nodes.
_XGK = np.array([
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
])
_WGK = np.array([
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
])
_WG = np.array([
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
])

_NODES = np.concatenate([-_XGK[:-1], _XGK[::-1]])
_KW = np.concatenate([_WGK[:-1], _WGK[::-1]])
_GW = np.zeros(15)
_GW[[1, 3, 5, 7, 9, 11, 13]] = np.concatenate([_WG[:-1], _WG[::-1]])

_ROUNDOFF = 50.0 * np.finfo(float).eps


@dataclass(frozen=True)
class QuadConfig:
    abs_tol: float = 1e-16
    rel_tol: float = 1e-12
    max_depth: int = 40

    def __post_init__(self):
        if not (self.abs_tol > 0 and self.rel_tol > 0):
            raise ValueError("tolerances must be positive")
        if not 1 <= self.max_depth <= 60:
            raise ValueError("max_depth must lie in 1..60")


def gauss_kronrod_15():
    """Return (nodes, kronrod_weights, gauss_weights) on [-1, 1]."""
    return _NODES.copy(), _KW.copy(), _GW.copy()


def _panel(f, a, b):
    half = 0.5 * (b - a)
    mid = 0.5 * (a + b)
    vals, errs = f(mid + half * _NODES)
    k = half * np.dot(_KW, vals)
    g = half * np.dot(_GW, vals)
    absint = abs(half) * np.dot(_KW, np.abs(vals))
    inherited = abs(half) * np.dot(_KW, errs)
    return float(k), abs(float(k - g)) + float(inherited), float(absint)


def adaptive_quad(f: Callable, a: float, b: float, q: QuadConfig = QuadConfig()):
    """Globally adaptive G7/K15 quadrature.

    ``f`` maps an array of abscissae to ``(values, errors)`` where ``errors``
    are absolute error bounds already carried by the values (zeros for an
    exactly evaluated integrand).  Returns ``(integral, error_estimate)``.

    The panel with the largest error estimate is bisected until the sum of
    estimates is below ``max(abs_tol, rel_tol * |I|)`` (floored at roundoff
    level).  Raises ToleranceNotMet when a panel would exceed ``max_depth``.
    """
    val, err, absint = _panel(f, a, b)
    heap = [(-err, 0, a, b, val, err, absint)]
    total, total_err, total_abs = val, err, absint
    while True:
        tol = max(q.abs_tol, q.rel_tol * abs(total), _ROUNDOFF * total_abs)
        if total_err <= tol:
            break
        _, depth, pa, pb, pval, perr, pabs = heapq.heappop(heap)
        if depth >= q.max_depth:
            raise ToleranceNotMet(
                f"max_depth={q.max_depth} reached with error {total_err:.3g} > {tol:.3g}"
            )
        mid = 0.5 * (pa + pb)
        total -= pval
        total_err -= perr
        total_abs -= pabs
        for lo, hi in ((pa, mid), (mid, pb)):
            v, e, ab = _panel(f, lo, hi)
            total += v
            total_err += e
            total_abs += ab
            heapq.heappush(heap, (-e, depth + 1, lo, hi, v, e, ab))
    # re-sum to shed drift from the running updates
    parts = sorted(heap, key=lambda p: p[2])
    return math.fsum(p[4] for p in parts), math.fsum(p[5] for p in parts)


def _quad(vals: tuple[float, ...], q: QuadConfig):
    d = len(vals) - 1
    if d == 1:
        r, s = vals

        def integrand(u):
            return np.exp((1.0 - u) * r + u * s), np.zeros_like(u)

        return adaptive_quad(integrand, 0.0, 1.0, q)

    head, last = vals[:-1], vals[-1]
    inner_q = QuadConfig(abs_tol=q.abs_tol, rel_tol=q.rel_tol * 0.1, max_depth=q.max_depth)

    def integrand(u):
        out = np.empty_like(u)
        err = np.empty_like(u)
        for n, un in enumerate(u):
            jv, je = _quad(tuple(un * v for v in head), inner_q)
            w = un ** (d - 1) * math.exp((1.0 - un) * last)
            out[n] = w * jv
            err[n] = w * je
        return out, err

    return adaptive_quad(integrand, 0.0, 1.0, q)


def quad_j_err(y, q: QuadConfig = QuadConfig()) -> tuple[float, float]:
    """Quadrature value of J(y) and its estimated absolute error (1 <= d <= 4)."""
    vals = y.values if isinstance(y, ArgVector) else ArgVector(tuple(y)).values
    d = len(vals) - 1
    if not 1 <= d <= 4:
        raise Unsupported(f"quad_j supports 1 <= d <= 4, got d={d}")
    return _quad(vals, q)


def quad_j(y, q: QuadConfig = QuadConfig()) -> float:
    return quad_j_err(y, q)[0]


def fd_grad(fn: Callable, y, h: float = 1e-5) -> np.ndarray:
    """Central-difference gradient of ``fn`` at ``y``."""
    if not h > 0:
        raise ValueError("h must be positive")
    y = np.asarray(y, dtype=float)
    grad = np.empty_like(y)
    for i in range(y.size):
        up = y.copy()
        dn = y.copy()
        up[i] += h
        dn[i] -= h
        grad[i] = (fn(up) - fn(dn)) / (2.0 * h)
    return grad
