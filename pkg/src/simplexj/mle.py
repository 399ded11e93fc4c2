"""Maximum-likelihood log-linear densities on a simplicial partition.

For a triangulated domain S = union of simplices S_j and an empirical
distribution P, maximise over continuous, piecewise-linear psi

    L(psi) = int psi dP - int_S exp(psi(x)) dx,

where psi is parametrised by its values at the vertices and

    int_S exp(psi) = sum_j |D_j| J(psi at the corners of S_j),

with D_j the determinant of the edge matrix of S_j.  The maximiser
f = exp(psi) is a probability density on S.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import Degenerate, NotConverged, UnassignedPoint
from .jderiv import grad_j
from .jfun import DEFAULT_CONFIG, EvalConfig, eval_j

__all__ = [
    "Triangulation",
    "EmpiricalSample",
    "FitResult",
    "simplex_det",
    "assign_sample",
    "integral_exp_psi",
    "objective",
    "objective_and_grad",
    "fit",
    "eval_density",
]

log = logging.getLogger(__name__)

BARY_TOL = 1e-12
_ARMIJO = 1e-4
_SHRINK = 0.5
_MAX_BACKTRACK = 80


def simplex_det(points) -> float:
    """Signed determinant of [x_1 - x_0, ..., x_d - x_0] (LU with partial pivoting).

    Raises Degenerate when |det| < 1e-12 * (longest edge)^d.
    """
    pts = np.asarray(points, dtype=float)
    if pts.ndim != 2 or pts.shape[0] != pts.shape[1] + 1:
        raise ValueError(f"expected d+1 points in R^d, got shape {pts.shape}")
    d = pts.shape[1]
    edges = pts[1:] - pts[0]
    det = float(np.linalg.det(edges.T))
    diffs = pts[:, None, :] - pts[None, :, :]
    longest = float(np.sqrt((diffs**2).sum(axis=-1)).max())
    if not abs(det) >= 1e-12 * longest**d or longest == 0.0:
        raise Degenerate(f"degenerate simplex (det={det:.3g})")
    return det


@dataclass
class Triangulation:
    """Vertices in R^d and simplices as (d+1)-tuples of vertex indices."""

    vertices: np.ndarray
    simplices: np.ndarray
    dets: np.ndarray = field(init=False)

    def __post_init__(self):
        self.vertices = np.atleast_2d(np.asarray(self.vertices, dtype=float))
        self.simplices = np.atleast_2d(np.asarray(self.simplices, dtype=np.int64))
        nv, d = self.vertices.shape
        if self.simplices.size == 0:
            raise Degenerate("triangulation has no simplices")
        if self.simplices.shape[1] != d + 1:
            raise ValueError(f"simplices need {d + 1} vertices in dimension {d}")
        if self.simplices.min() < 0 or self.simplices.max() >= nv:
            raise ValueError("simplex references an unknown vertex")
        for j, row in enumerate(self.simplices):
            if len(set(row.tolist())) != d + 1:
                raise Degenerate(f"simplex {j} repeats a vertex: {row.tolist()}")
        self.dets = np.array([simplex_det(self.vertices[row]) for row in self.simplices])
        # per-simplex inverse edge matrices for barycentric coordinates
        origin = self.vertices[self.simplices[:, 0]]
        edges = self.vertices[self.simplices[:, 1:]] - origin[:, None, :]
        self._origin = origin
        self._inv = np.linalg.inv(np.transpose(edges, (0, 2, 1)))

    @property
    def dim(self) -> int:
        return self.vertices.shape[1]

    @property
    def n_vertices(self) -> int:
        return self.vertices.shape[0]

    @property
    def volume(self) -> float:
        return math.fsum(np.abs(self.dets)) / math.factorial(self.dim)

    def barycentric(self, j: int, x) -> np.ndarray:
        lam = self._inv[j] @ (np.asarray(x, dtype=float) - self._origin[j])
        return np.concatenate([[1.0 - lam.sum()], lam])

    def locate(self, x) -> tuple[int, np.ndarray] | None:
        """Lowest-index simplex containing ``x`` and its barycentric coordinates."""
        for j in range(len(self.simplices)):
            lam = self.barycentric(j, x)
            if lam.min() >= -BARY_TOL:
                return j, lam
        return None


@dataclass
class EmpiricalSample:
    points: np.ndarray
    weights: np.ndarray
    simplex: np.ndarray
    bary: np.ndarray
    # sum_k w_k lambda_kv per vertex: the gradient of int psi dP
    linear: np.ndarray


def assign_sample(t: Triangulation, points, weights=None) -> EmpiricalSample:
    """Locate every point in ``t``; weights default to uniform and are normalised."""
    pts = np.asarray(points, dtype=float).reshape(-1, t.dim)
    n = pts.shape[0]
    if n == 0:
        raise UnassignedPoint("empty sample")
    if weights is None:
        w = np.full(n, 1.0 / n)
    else:
        w = np.asarray(weights, dtype=float)
        if w.shape != (n,) or not np.all(w > 0) or not np.all(np.isfinite(w)):
            raise ValueError("weights must be positive and one per point")
        w = w / math.fsum(w)
    simplex = np.empty(n, dtype=np.int64)
    bary = np.empty((n, t.dim + 1))
    for k, x in enumerate(pts):
        hit = t.locate(x)
        if hit is None:
            raise UnassignedPoint(f"point {k} ({x.tolist()}) lies outside the triangulation")
        simplex[k], bary[k] = hit
    linear = np.zeros(t.n_vertices)
    np.add.at(linear, t.simplices[simplex], w[:, None] * bary)
    return EmpiricalSample(pts, w, simplex, bary, linear)


def _simplex_terms(t: Triangulation, psi: np.ndarray, cfg: EvalConfig, with_grad: bool):
    """Per-simplex |D_j| J(y_j), optionally with |D_j| grad J, centred at max(y_j)."""
    terms = []
    grads = []
    for j, row in enumerate(t.simplices):
        y = psi[row]
        top = float(y.max())
        shifted = tuple(float(v) - top for v in y)
        scale = abs(t.dets[j]) * math.exp(top)
        terms.append(scale * eval_j(shifted, cfg))
        if with_grad:
            grads.append(scale * grad_j(shifted, cfg))
    return terms, grads


def integral_exp_psi(t: Triangulation, psi, cfg: EvalConfig = DEFAULT_CONFIG) -> float:
    """int_S exp(psi) = sum_j |D_j| J(y_j), summed exactly rounded in simplex order."""
    psi = np.asarray(psi, dtype=float)
    if psi.shape != (t.n_vertices,):
        raise ValueError("psi must have one value per vertex")
    try:
        terms, _ = _simplex_terms(t, psi, cfg, with_grad=False)
    except OverflowError:
        return math.inf
    return math.fsum(terms)


def objective(t, sample: EmpiricalSample, psi, cfg: EvalConfig = DEFAULT_CONFIG) -> float:
    psi = np.asarray(psi, dtype=float)
    return math.fsum(sample.linear * psi) - integral_exp_psi(t, psi, cfg)


def objective_and_grad(t, sample: EmpiricalSample, psi, cfg: EvalConfig = DEFAULT_CONFIG):
    """Objective L(psi) and its gradient with respect to the vertex values.

    Returns ``(-inf, None)`` when exp(psi) overflows.
    """
    psi = np.asarray(psi, dtype=float)
    if psi.shape != (t.n_vertices,):
        raise ValueError("psi must have one value per vertex")
    try:
        terms, grads = _simplex_terms(t, psi, cfg, with_grad=True)
    except OverflowError:
        return -math.inf, None
    value = math.fsum(sample.linear * psi) - math.fsum(terms)
    grad = sample.linear.copy()
    for row, g in zip(t.simplices, grads):
        grad[row] -= g
    return value, grad


@dataclass
class FitResult:
    psi: np.ndarray
    loglik: float
    grad_norm: float
    iterations: int
    converged: bool
    mass: float
    trace: list[float] = field(default_factory=list, repr=False)


def fit(
    t: Triangulation,
    sample: EmpiricalSample,
    cfg: EvalConfig = DEFAULT_CONFIG,
    tol: float = 1e-8,
    max_iter: int = 10000,
    strict: bool = False,
) -> FitResult:
    """Maximise the log-likelihood by gradient ascent with backtracking.

    Starts from the uniform log-density -log(vol S).  A step alpha along the
    gradient g is accepted when the objective rises by at least
    1e-4 * alpha * |g|^2; otherwise alpha is halved.  Accepted steps double
    the next trial step.  Iteration stops once max|g| <= tol.

    ``loglik`` is int psi dP at the returned iterate.  With ``strict=True``
    a run that exhausts ``max_iter`` raises NotConverged instead of
    returning the best iterate with ``converged=False``.
    """
    psi = np.full(t.n_vertices, -math.log(t.volume))
    value, grad = objective_and_grad(t, sample, psi, cfg)
    trace = [value]
    step = 1.0
    it = 0
    gnorm = float(np.abs(grad).max())
    while gnorm > tol and it < max_iter:
        gg = float(grad @ grad)
        for _ in range(_MAX_BACKTRACK):
            trial = psi + step * grad
            tval, tgrad = objective_and_grad(t, sample, trial, cfg)
            if tgrad is not None and tval >= value + _ARMIJO * step * gg:
                break
            step *= _SHRINK
        else:
            log.debug("line search stalled at iteration %d (|g|=%.3g)", it, gnorm)
            break
        psi, value, grad = trial, tval, tgrad
        trace.append(value)
        gnorm = float(np.abs(grad).max())
        step *= 2.0
        it += 1
    converged = gnorm <= tol
    if not converged and strict:
        raise NotConverged(f"|grad|={gnorm:.3g} after {it} iterations")
    return FitResult(
        psi=psi,
        loglik=math.fsum(sample.linear * psi),
        grad_norm=gnorm,
        iterations=it,
        converged=converged,
        mass=integral_exp_psi(t, psi, cfg),
        trace=trace,
    )


def eval_density(t: Triangulation, psi, x) -> tuple[float, bool]:
    """exp(psi(x)) and whether ``x`` lies in the domain (0.0, False outside)."""
    hit = t.locate(x)
    if hit is None:
        return 0.0, False
    j, lam = hit
    psi = np.asarray(psi, dtype=float)
    return math.exp(math.fsum(lam * psi[t.simplices[j]])), True
