"""Evaluation of the simplex log-linear integral J.

For corner values ``y = (y_0, ..., y_d)``,

    J(y) = integral over the unit simplex T_d(1) of
           exp((1 - u_+) y_0 + sum_i u_i y_i) du,

which equals the d-th divided difference of ``exp`` at the nodes ``y_i``.
Sorted input is evaluated through the divided-difference recursion

    J(y_0..y_d) = (J(y_1..y_d) - J(y_0..y_{d-1})) / (y_d - y_0),

memoised over contiguous subranges.  Any subrange whose spread is below
``EvalConfig.epsilon`` is evaluated by the centred power series instead,
which avoids the cancellation in the difference quotient.

Large arguments are not rescaled internally; use the identity
``J(y) = exp(c) * J(y - c)`` before calling if ``exp(max(y))`` may overflow.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

from .errors import NonFiniteInput, Unsupported

__all__ = [
    "ArgVector",
    "CenteredForm",
    "EvalConfig",
    "EvalStats",
    "DEFAULT_CONFIG",
    "center",
    "eval_taylor",
    "eval_series",
    "eval_j",
    "eval_j_d1",
    "eval_j_d2",
]

# Series truncation target, relative to a lower bound of the result.
_SERIES_TOL = 2.0**-56


@dataclass(frozen=True)
class ArgVector:
    """Exponent values at the corners of a simplex."""

    values: tuple[float, ...]

    def __post_init__(self):
        vals = tuple(float(v) + 0.0 for v in self.values)  # +0.0 folds -0.0
        if not vals:
            raise ValueError("ArgVector needs at least one value")
        if not all(math.isfinite(v) for v in vals):
            raise NonFiniteInput(f"non-finite entry in {vals!r}")
        object.__setattr__(self, "values", vals)

    @property
    def d(self) -> int:
        return len(self.values) - 1

    def canonical(self) -> tuple[tuple[float, ...], tuple[int, ...]]:
        """Return the ascending values and the (stable) sorting permutation."""
        perm = tuple(sorted(range(len(self.values)), key=self.values.__getitem__))
        return tuple(self.values[i] for i in perm), perm


def _values(y) -> tuple[float, ...]:
    if isinstance(y, ArgVector):
        return y.values
    return ArgVector(tuple(y)).values


@dataclass(frozen=True)
class CenteredForm:
    mean: float
    residuals: tuple[float, ...]
    sumsq_half: float
    sumcube_third: float


@dataclass(frozen=True)
class EvalConfig:
    """Evaluation settings.

    ``epsilon`` is the absolute spread below which a subrange is evaluated
    by the centred series.  ``max_dim`` bounds the dimension ``d``; the
    factorial table covers ``0..max_dim``.
    """

    epsilon: float = 1.0
    max_dim: int = 32
    factorial_table: tuple[float, ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if not (self.epsilon > 0 and math.isfinite(self.epsilon)):
            raise ValueError("epsilon must be positive and finite")
        if self.max_dim < 0:
            raise ValueError("max_dim must be nonnegative")
        table = tuple(float(math.factorial(k)) for k in range(self.max_dim + 1))
        object.__setattr__(self, "factorial_table", table)


DEFAULT_CONFIG = EvalConfig()


@dataclass
class EvalStats:
    """Optional instrumentation filled in by :func:`eval_j`."""

    cells: int = 0
    series_cells: int = 0
    top_branch: str = ""


def center(y) -> CenteredForm:
    """Split ``y`` into its mean and residuals about the mean."""
    vals = _values(y)
    n = len(vals)
    ref = vals[0]
    mean = ref + math.fsum(v - ref for v in vals) / n
    z = tuple(v - mean for v in vals)
    return CenteredForm(
        mean=mean,
        residuals=z,
        sumsq_half=math.fsum(v * v for v in z) / 2.0,
        sumcube_third=math.fsum(v * v * v for v in z) / 3.0,
    )


def eval_taylor(y) -> float:
    """Third-order expansion of J about the mean of ``y``.

    exp(mean) * (1/d! + z2/(d+2)! + z3/(d+3)!) with z2 = sum(z^2)/2 and
    z3 = sum(z^3)/3.  The remainder is O(|z|^4).
    """
    c = center(y)
    d = len(c.residuals) - 1
    return math.exp(c.mean) * (
        1.0 / math.factorial(d)
        + c.sumsq_half / math.factorial(d + 2)
        + c.sumcube_third / math.factorial(d + 3)
    )


def _series(vals: Sequence[float], inv_dfact: float) -> float:
    # J(y) = exp(m) * sum_k h_k(y - m) / (d+k)!, h_k the complete homogeneous
    # symmetric polynomials.  Orders 0, 2, 3 reproduce eval_taylor.
    # Truncation uses |h_k(z)| / (d+k)! <= M^k / (k! d!) and d! J(z) >= exp(-M).
    n = len(vals)
    d = n - 1
    ref = vals[0]
    mean = ref + math.fsum(v - ref for v in vals) / n
    z = [v - mean for v in vals]
    big = max(abs(v) for v in z)
    if big == 0.0:
        return math.exp(mean) * inv_dfact
    target = _SERIES_TOL * math.exp(-big)
    order, term = 0, 1.0
    while True:
        nxt = term * big / (order + 1)
        if order >= 3 and big < order + 2 and nxt / (1.0 - big / (order + 2)) <= target:
            break
        order += 1
        term = nxt
    h = [1.0] + [0.0] * order
    for zj in z:
        for k in range(1, order + 1):
            h[k] += zj * h[k - 1]
    terms = []
    inv = inv_dfact
    for k in range(order + 1):
        if k:
            inv /= d + k
        terms.append(h[k] * inv)
    return math.exp(mean) * math.fsum(terms)


def eval_series(y, cfg: EvalConfig = DEFAULT_CONFIG) -> float:
    """J(y) from the centred power series alone (accurate for small spreads)."""
    vals = tuple(sorted(_values(y)))
    d = len(vals) - 1
    _check_dim(d, cfg)
    return _series(vals, 1.0 / cfg.factorial_table[d])


def _check_dim(d: int, cfg: EvalConfig) -> None:
    if d > cfg.max_dim:
        raise Unsupported(f"dimension {d} exceeds max_dim={cfg.max_dim}")


def eval_j(y, cfg: EvalConfig = DEFAULT_CONFIG, stats: EvalStats | None = None) -> float:
    """Evaluate J(y_0, ..., y_d) for any d >= 0.

    The arguments are sorted (J is symmetric), then the divided-difference
    table is filled lazily: a subrange ``i..j`` uses the centred series when
    ``y_j - y_i < cfg.epsilon`` and the difference quotient otherwise.  At
    most (d+1)(d+2)/2 cells are computed.

    Raises
    ------
    NonFiniteInput
        If any entry is NaN or infinite.
    Unsupported
        If ``d`` exceeds ``cfg.max_dim``.
    """
    vals = tuple(sorted(_values(y)))
    d = len(vals) - 1
    _check_dim(d, cfg)
    eps = cfg.epsilon
    facts = cfg.factorial_table
    if stats is None:
        stats = EvalStats()
    stats.cells = stats.series_cells = 0

    if d == 0:
        stats.cells = 1
        stats.top_branch = "closed-form"
        return math.exp(vals[0])

    memo: dict[tuple[int, int], float] = {}

    def cell(i: int, j: int) -> float:
        key = (i, j)
        if key in memo:
            return memo[key]
        stats.cells += 1
        if i == j:
            val = math.exp(vals[i])
        elif vals[j] - vals[i] < eps:
            stats.series_cells += 1
            val = _series(vals[i : j + 1], 1.0 / facts[j - i])
        else:
            val = (cell(i + 1, j) - cell(i, j - 1)) / (vals[j] - vals[i])
        memo[key] = val
        return val

    stats.top_branch = "taylor" if vals[d] - vals[0] < eps else "recursion"
    return cell(0, d)


def eval_j_d1(r: float, s: float, eps: float = DEFAULT_CONFIG.epsilon) -> float:
    """J(r, s) = (exp(s) - exp(r)) / (s - r), stable as s -> r."""
    r, s = sorted(_values((r, s)))
    if s == r:
        return math.exp(r)
    delta = s - r
    if delta >= eps:
        return (math.exp(s) - math.exp(r)) / delta
    return math.exp(r) * (math.expm1(delta) / delta)


def eval_j_d2(r: float, s: float, t: float, eps: float = DEFAULT_CONFIG.epsilon) -> float:
    """J(r, s, t) from the order statistics y0 <= y1 <= y2."""
    y0, y1, y2 = sorted(_values((r, s, t)))
    spread = y2 - y0
    if spread == 0.0:
        return math.exp(y0) / 2.0
    if spread < eps:
        return _series((y0, y1, y2), 0.5)
    return (eval_j_d1(y1, y2, eps) - eval_j_d1(y0, y1, eps)) / spread
