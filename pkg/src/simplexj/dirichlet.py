"""Gamma/Dirichlet machinery: exact moments, sampling and a Monte-Carlo J.

If G_i ~ Gamma(a_i) are independent and G_+ = sum G_i, then
B = (G_i / G_+) is Dirichlet(a) distributed and

    E prod B_i^k_i = Gamma(a_+) / Gamma(a_+ + k_+) * prod Gamma(a_i + k_i) / Gamma(a_i).

With all a_i = 1 this gives J(y) = E exp(sum B_i y_i) / d!.

Random streams come from numpy's Philox counter-based generator keyed by
the 64-bit seed, so a given (params, n, seed) reproduces bit for bit.
Unit-shape Gamma variables are drawn as -log(1 - U); other shapes use
``Generator.standard_gamma`` (Marsaglia-Tsang with shape augmentation
below one).
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .errors import LengthMismatch, NonPositiveParameter, Unsupported
from .jfun import _values

__all__ = [
    "DirichletParams",
    "MultiIndex",
    "McEstimate",
    "make_rng",
    "dirichlet_moment",
    "simplex_power_integral",
    "sample_dirichlet",
    "mc_estimate_j",
    "beta_integral",
]

_LGAMMA_SWITCH = 170


def _is_int(x: float) -> bool:
    return float(x).is_integer()


@dataclass(frozen=True)
class DirichletParams:
    a: tuple[float, ...]

    def __post_init__(self):
        a = tuple(float(v) for v in self.a)
        if not a:
            raise ValueError("need at least one parameter")
        if not all(v > 0 and math.isfinite(v) for v in a):
            raise NonPositiveParameter(f"Dirichlet parameters must be positive: {a!r}")
        object.__setattr__(self, "a", a)

    @classmethod
    def uniform(cls, m: int) -> "DirichletParams":
        """Dirichlet(1, ..., 1) on m + 1 coordinates."""
        return cls((1.0,) * (m + 1))

    @property
    def a_plus(self) -> float:
        return math.fsum(self.a)


@dataclass(frozen=True)
class MultiIndex:
    k: tuple[int, ...]

    def __post_init__(self):
        k = tuple(int(v) for v in self.k)
        if any(v < 0 for v in k):
            raise ValueError(f"exponents must be nonnegative: {k!r}")
        object.__setattr__(self, "k", k)

    @property
    def k_plus(self) -> int:
        return sum(self.k)


@dataclass(frozen=True)
class McEstimate:
    value: float
    std_error: float
    n_samples: int
    seed: int


def _rising(x, k: int):
    out = x * 0 + 1
    for j in range(k):
        out *= x + j
    return out


def dirichlet_moment(p: DirichletParams, k: MultiIndex, exact: bool = False):
    """E(prod B_i^k_i) for B ~ Dirichlet(p.a).

    With integer parameters the ratio of rising factorials is evaluated in
    rational arithmetic; ``exact=True`` returns that ``Fraction``.  Log-gamma
    takes over once any a_i + k_i exceeds 170.
    """
    if not isinstance(p, DirichletParams):
        p = DirichletParams(tuple(p))
    if not isinstance(k, MultiIndex):
        k = MultiIndex(tuple(k))
    if len(p.a) != len(k.k):
        raise LengthMismatch(f"{len(p.a)} parameters but {len(k.k)} exponents")
    integral = all(_is_int(a) for a in p.a)
    if exact and not integral:
        raise ValueError("exact moments need integer parameters")
    big = any(a + ki > _LGAMMA_SWITCH for a, ki in zip(p.a, k.k))
    if exact or (integral and not big):
        num = Fraction(1)
        for a, ki in zip(p.a, k.k):
            num *= _rising(Fraction(int(a)), ki)
        val = num / _rising(Fraction(int(round(p.a_plus))), k.k_plus)
        return val if exact else float(val)
    if big:
        logv = math.lgamma(p.a_plus) - math.lgamma(p.a_plus + k.k_plus)
        logv += math.fsum(math.lgamma(a + ki) - math.lgamma(a) for a, ki in zip(p.a, k.k))
        return math.exp(logv)
    num = math.prod(_rising(a, ki) for a, ki in zip(p.a, k.k))
    return num / _rising(p.a_plus, k.k_plus)


def simplex_power_integral(a: Sequence[float], exact: bool = False):
    """Integral over the open unit simplex of prod u_i^(a_i - 1), u_0 = 1 - u_+.

    Equals prod Gamma(a_i) / Gamma(a_+).
    """
    a = tuple(a)
    if not a or not all(v > 0 for v in a):
        raise NonPositiveParameter(f"parameters must be positive: {a!r}")
    if all(_is_int(v) for v in a) and (exact or sum(a) <= _LGAMMA_SWITCH):
        ints = [int(v) for v in a]
        val = Fraction(math.prod(math.factorial(v - 1) for v in ints), math.factorial(sum(ints) - 1))
        return val if exact else float(val)
    if exact:
        raise ValueError("exact mode needs integer parameters")
    return math.exp(math.fsum(math.lgamma(v) for v in a) - math.lgamma(math.fsum(a)))


def make_rng(seed: int) -> np.random.Generator:
    seed = int(seed)
    if not 0 <= seed < 2**64:
        raise ValueError("seed must be a 64-bit unsigned integer")
    return np.random.Generator(np.random.Philox(seed))


def sample_dirichlet(p: DirichletParams, n: int, seed: int) -> np.ndarray:
    """Draw ``n`` Dirichlet(p.a) vectors, shape (n, m + 1), rows summing to 1."""
    if not isinstance(p, DirichletParams):
        p = DirichletParams(tuple(p))
    if n < 1:
        raise ValueError("n must be at least 1")
    rng = make_rng(seed)
    g = np.empty((n, len(p.a)))
    for i, a in enumerate(p.a):
        if a == 1.0:
            g[:, i] = -np.log1p(-rng.random(n))
        else:
            g[:, i] = rng.standard_gamma(a, n)
    b = g / g.sum(axis=1, keepdims=True)
    return b / b.sum(axis=1, keepdims=True)


def mc_estimate_j(y, n: int, seed: int) -> McEstimate:
    """Monte-Carlo estimate of J(y) = E exp(sum B_i y_i) / d!, B uniform on the simplex.

    The integrand is evaluated relative to max(y), so constant input gives
    exp(c)/d! exactly with zero standard error.
    """
    vals = _values(y)
    if n < 2:
        raise ValueError("n must be at least 2")
    d = len(vals) - 1
    top = max(vals)
    shifted = np.array([v - top for v in vals])
    b = sample_dirichlet(DirichletParams.uniform(d), n, seed)
    w = np.exp(b @ shifted)
    scale = math.exp(top)
    fact = float(math.factorial(d))
    return McEstimate(
        value=scale * float(w.mean()) / fact,
        std_error=scale * float(w.std(ddof=1)) / math.sqrt(n) / fact,
        n_samples=n,
        seed=int(seed),
    )


def beta_integral(ell: int, m: int) -> float:
    """int_0^1 (1-u)^ell u^m du = ell! m! / (ell + m + 1)! for integers ell, m >= 0."""
    if ell < 0 or m < 0:
        raise ValueError("exponents must be nonnegative")
    if ell + m > 30:
        raise Unsupported("ell + m must not exceed 30")
    out = 1.0 / (ell + 1)
    for i in range(1, m + 1):
        out *= i / (ell + i + 1)
    return out
