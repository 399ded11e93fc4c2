"""Partial derivatives of J.

General dimension: derivatives are higher-dimensional J values with
repeated arguments,

    dJ/dy_i          = J(y with y_i duplicated),
    d2J/dy_i^2       = 2 J(y with y_i triplicated),
    d2J/dy_i dy_j    = J(y with y_i and y_j each duplicated).

Low dimension: closed forms for the bivariate family
J_{a,b}(r, s) = d^(a+b) J(r, s) / dr^a ds^b and the d = 2 partials built on
the divided-difference function h(r, s) = (f(s) - f(r)) / (s - r).  The two
routes are independent and are cross-checked in the tests.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .errors import Unsupported
from .jfun import DEFAULT_CONFIG, EvalConfig, _values, eval_j

__all__ = [
    "JAB_EPS",
    "D2_EPS",
    "MAX_ORDER",
    "BivariateFn",
    "D2Partials",
    "grad_j",
    "hess_j",
    "j_ab",
    "h_div",
    "h_dr",
    "h_drr",
    "h_drs",
    "d2_partials",
]

MAX_ORDER = 8
# Below JAB_EPS the positive-term series is used; above it the closed form.
JAB_EPS = 8.0
# Below D2_EPS the d = 2 partials use the near-diagonal expansion.
D2_EPS = 1.0
# Highest J_{k,0} used by the d = 2 near-diagonal expansions.
_D2_ORDER = 16
_SERIES_CAP = 60


def grad_j(y, cfg: EvalConfig = DEFAULT_CONFIG) -> np.ndarray:
    """Gradient of J at ``y``; every component is positive."""
    vals = _values(y)
    return np.array([eval_j(vals + (v,), cfg) for v in vals])


def hess_j(y, cfg: EvalConfig = DEFAULT_CONFIG) -> np.ndarray:
    """Hessian of J at ``y`` (symmetric, entrywise positive)."""
    vals = _values(y)
    n = len(vals)
    out = np.empty((n, n))
    for i in range(n):
        out[i, i] = 2.0 * eval_j(vals + (vals[i], vals[i]), cfg)
        for j in range(i + 1, n):
            out[i, j] = out[j, i] = eval_j(vals + (vals[i], vals[j]), cfg)
    return out


def _ja0_closed(m: int, y: float) -> float:
    # m!/y^(m+1) * (exp(y) - sum_{l<=m} y^l/l!); expm1 absorbs the l = 0 term
    poly = math.fsum(y**l / math.factorial(l) for l in range(1, m + 1))
    return math.factorial(m) / y ** (m + 1) * (math.expm1(y) - poly)


def _jab0_closed(a: int, b: int, y: float) -> float:
    return math.fsum(
        math.comb(b, i) * (-1) ** i * _ja0_closed(a + i, y) for i in range(b + 1)
    )


def _jab0_series(a: int, b: int, y: float) -> float:
    # sum_k a! [k+b]_b / (k+a+b+1)! y^k, all terms positive for y >= 0
    coef = math.factorial(a) * math.factorial(b) / math.factorial(a + b + 1)
    total = coef
    k = 0
    while k < _SERIES_CAP:
        k += 1
        coef *= y * (k + b) / (k * (k + a + b + 1))
        total += coef
        if coef < 1e-17 * total:
            break
    return total


def j_ab(a: int, b: int, r: float, s: float, eps: float = JAB_EPS) -> float:
    """Mixed partial J_{a,b}(r, s) of the bivariate J, for a + b <= 8.

    Uses J_{a,b}(r, s) = exp(r) J_{a,b}(0, s - r) and, for negative
    y = s - r, the mirror J_{a,b}(0, y) = exp(y) J_{b,a}(0, -y), so the
    kernel only sees y >= 0.  For y < eps the power series is summed
    (positive terms, no cancellation); otherwise the closed form
    J_{m,0}(0, y) = m!/y^(m+1) (e^y - sum_{l<=m} y^l/l!) is combined by
    binomial reduction J_{a,b} = sum_i C(b,i) (-1)^i J_{a+i,0}.
    """
    if a < 0 or b < 0:
        raise ValueError("derivative orders must be nonnegative")
    if a + b > MAX_ORDER:
        raise Unsupported(f"a + b = {a + b} exceeds {MAX_ORDER}")
    r, s = _values((r, s))
    return _j_ab(a, b, r, s, eps)


def _j_ab(a: int, b: int, r: float, s: float, eps: float) -> float:
    y = s - r
    scale = r
    if y < 0:
        a, b, y = b, a, -y
        scale = s
    if y < eps:
        core = _jab0_series(a, b, y)
    else:
        core = _jab0_closed(a, b, y)
    return math.exp(scale) * core


@dataclass(frozen=True)
class BivariateFn:
    """A smooth scalar function with its first few derivatives.

    ``derivs[k]`` is the k-th derivative (``derivs[0]`` is f itself).
    """

    derivs: Sequence[Callable[[float], float]]

    @property
    def f(self):
        return self.derivs[0]

    def order(self) -> int:
        return len(self.derivs) - 1


def _near_diag(fn: BivariateFn, r: float, delta: float, shift: int, weight: Callable[[int], float]):
    terms = [
        weight(k) * fn.derivs[k + shift](r) * delta**k
        for k in range(fn.order() - shift + 1)
    ]
    return math.fsum(terms)


def h_div(fn: BivariateFn, r: float, s: float, eps: float) -> float:
    """h(r, s) = (f(s) - f(r)) / (s - r), expanded about r when |s - r| < eps.

    The expansion is sum_k f^(k+1)(r) (s-r)^k / (k+1)! over the derivatives
    ``fn`` supplies; with f, f' and f'' it is f'(r) + f''(r)(s - r)/2.
    """
    delta = s - r
    if abs(delta) >= eps:
        return (fn.f(s) - fn.f(r)) / delta
    return _near_diag(fn, r, delta, 1, lambda k: 1.0 / math.factorial(k + 1))


def h_dr(fn: BivariateFn, r: float, s: float, eps: float) -> float:
    """dh/dr; near the diagonal sum_k f^(k+2)(r) (s-r)^k / (k+2)!."""
    delta = s - r
    if abs(delta) >= eps:
        return (fn.f(s) - fn.f(r) - fn.derivs[1](r) * delta) / delta**2
    return _near_diag(fn, r, delta, 2, lambda k: 1.0 / math.factorial(k + 2))


def h_drr(fn: BivariateFn, r: float, s: float, eps: float) -> float:
    """d2h/dr2; near the diagonal sum_k 2 f^(k+3)(r) (s-r)^k / (k+3)!."""
    delta = s - r
    if abs(delta) >= eps:
        f, f1, f2 = fn.derivs[0], fn.derivs[1], fn.derivs[2]
        return (2.0 * (f(s) - f(r) - f1(r) * delta) - delta**2 * f2(r)) / delta**3
    return _near_diag(fn, r, delta, 3, lambda k: 2.0 / math.factorial(k + 3))


def h_drs(fn: BivariateFn, r: float, s: float, eps: float) -> float:
    """d2h/drds; near the diagonal sum_k (k+1) f^(k+3)(r) (s-r)^k / (k+3)!."""
    delta = s - r
    if abs(delta) >= eps:
        f, f1 = fn.derivs[0], fn.derivs[1]
        return (delta * (f1(r) + f1(s)) - 2.0 * (f(s) - f(r))) / delta**3
    return _near_diag(fn, r, delta, 3, lambda k: (k + 1) / math.factorial(k + 3))


@dataclass(frozen=True)
class D2Partials:
    dr: float
    dr2: float
    drds: float


def d2_partials(r: float, s: float, t: float, eps: float = D2_EPS) -> D2Partials:
    """dJ/dr, d2J/dr2 and d2J/drds of J(r, s, t).

    J(r, s, t) is h(r, s) for f(x) = J(x, t), whose derivatives are
    f^(k)(x) = J_{k,0}(x, t).  Within ``eps`` of the diagonal the expansions
    run through J_{16,0}, which keeps the truncation error near roundoff for
    |s - r| < 1.
    """
    r, s, t = _values((r, s, t))
    fn = BivariateFn(
        tuple((lambda x, k=k: _j_ab(k, 0, x, t, JAB_EPS)) for k in range(_D2_ORDER + 1))
    )
    return D2Partials(
        dr=h_dr(fn, r, s, eps),
        dr2=h_drr(fn, r, s, eps),
        drds=h_drs(fn, r, s, eps),
    )
