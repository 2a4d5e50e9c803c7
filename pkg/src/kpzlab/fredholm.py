"""Nystrom evaluation of Fredholm determinants on Gauss-Legendre rules.

The Airy-kernel determinants give the Tracy-Widom GUE distribution and the
beta = 2 Laplace transform E prod_k (1 + u e^{alpha lambda_k})^{-1} over the
Airy_2 point process.  The beta = 1 counterpart is estimated by Monte Carlo
over sampled Airy_1 configurations.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import expit

from .airy import airy_kernel_diagonal, airy_kernel_matrix
from .edge import default_cutoff, sample_airy_edge, tail_truncation_bound
from .rand import SeedSpec


class FredholmError(RuntimeError):
    pass


@dataclass(frozen=True)
class QuadratureRule:
    nodes: np.ndarray
    weights: np.ndarray
    a: float
    b: float

    @property
    def order(self) -> int:
        return self.nodes.size

    def integrate(self, f) -> float:
        return float(np.dot(self.weights, f(self.nodes)))


def gauss_legendre(order: int, a: float = -1.0, b: float = 1.0, tol: float = 1e-15, max_iter: int = 100) -> QuadratureRule:
    """Gauss-Legendre nodes and weights on [a, b] by Newton iteration on P_order."""
    if order < 2:
        raise ValueError("order must be >= 2")
    if not a < b:
        raise ValueError("need a < b")
    n = order
    i = np.arange(1, n + 1)
    x = np.cos(np.pi * (i - 0.25) / (n + 0.5))
    for _ in range(max_iter):
        p0 = np.ones_like(x)
        p1 = x.copy()
        for k in range(2, n + 1):
            p0, p1 = p1, ((2 * k - 1) * x * p1 - (k - 1) * p0) / k
        dp = n * (x * p1 - p0) / (x * x - 1.0)
        dx = p1 / dp
        x = x - dx
        if np.max(np.abs(dx)) < tol:
            break
    else:
        raise FredholmError("Newton iteration for Legendre roots did not converge")
    p0 = np.ones_like(x)
    p1 = x.copy()
    for k in range(2, n + 1):
        p0, p1 = p1, ((2 * k - 1) * x * p1 - (k - 1) * p0) / k
    dp = n * (x * p1 - p0) / (x * x - 1.0)
    w = 2.0 / ((1.0 - x * x) * dp * dp)
    x = x[::-1]
    w = w[::-1]
    half = 0.5 * (b - a)
    return QuadratureRule(half * x + 0.5 * (a + b), half * w, float(a), float(b))


def kernel_matrix(kernel_fn, rule: QuadratureRule) -> np.ndarray:
    """A_ij = sqrt(w_i) k(x_i, x_j) sqrt(w_j)."""
    x = rule.nodes
    k = kernel_fn(x[:, None], x[None, :])
    sw = np.sqrt(rule.weights)
    return sw[:, None] * k * sw[None, :]


def _det_i_minus(a: np.ndarray) -> float:
    m = np.eye(a.shape[0]) - a
    sign, logdet = np.linalg.slogdet(m)
    if not np.isfinite(logdet) and sign != 0:
        raise FredholmError("determinant evaluation failed")
    return float(sign * math.exp(logdet)) if sign != 0 else 0.0


def fredholm_det(kernel_fn, rule: QuadratureRule) -> float:
    """det(I - K) on L^2(a, b) by the symmetric Nystrom discretization."""
    return _det_i_minus(kernel_matrix(kernel_fn, rule))


def _airy_matrix(rule: QuadratureRule, weight=None) -> np.ndarray:
    k = airy_kernel_matrix(rule.nodes)
    sw = np.sqrt(rule.weights if weight is None else rule.weights * weight)
    return sw[:, None] * k * sw[None, :]


TW_WINDOW = 16.0
TW_ORDER = 64


def tracy_widom_f2(s, order: int = TW_ORDER):
    """F_2(s) = det(I - K_Airy) on (s, s + 16), for s in [-10, 6]."""
    s_arr = np.atleast_1d(np.asarray(s, dtype=float))
    if np.any(s_arr < -10.0) or np.any(s_arr > 6.0):
        raise ValueError("tracy_widom_f2 is supported on [-10, 6]")
    out = np.empty_like(s_arr)
    for i, si in enumerate(s_arr):
        rule = gauss_legendre(order, si, si + TW_WINDOW)
        out[i] = _det_i_minus(_airy_matrix(rule))
    return float(out[0]) if np.ndim(s) == 0 else out


def tracy_widom_f2_moments(order: int = TW_ORDER, s_order: int = 80):
    """Mean and variance of F_2 from tail integrals of the CDF on [-10, 6]."""
    left = gauss_legendre(s_order, -10.0, 0.0)
    right = gauss_legendre(s_order, 0.0, 6.0)
    fl = tracy_widom_f2(left.nodes, order)
    fr = tracy_widom_f2(right.nodes, order)
    mean = np.dot(right.weights, 1.0 - fr) - np.dot(left.weights, fl)
    second = np.dot(right.weights, 2.0 * right.nodes * (1.0 - fr)) + np.dot(left.weights, -2.0 * left.nodes * fl)
    return float(mean), float(second - mean**2)


LAPLACE_ORDER = 80
_MASS_TOL = 1e-10


def laplace_interval(u: float, alpha: float, tol: float = _MASS_TOL) -> tuple[float, float]:
    """Truncation interval for the beta = 2 Laplace determinant.

    The lower end makes u * E sum_{lambda < lo} e^{alpha lambda} < tol under the
    asymptotic density; the upper end makes int_hi^inf K(x,x) dx < tol.
    """
    lo = -1.0
    while u * tail_truncation_bound(alpha, lo) > tol:
        lo *= 1.25
    hi = 2.0
    while _upper_mass(hi) > tol:
        hi += 0.5
    return max(lo, -200.0), hi


def _upper_mass(x: float) -> float:
    rule = gauss_legendre(20, x, x + 10.0)
    return float(np.dot(rule.weights, airy_kernel_diagonal(rule.nodes)))


def laplace_rhs_beta2(u: float, alpha: float, order: int = LAPLACE_ORDER) -> float:
    """E prod_k 1/(1 + u e^{alpha lambda_k}) over Airy_2, as det(I - sqrt(phi) K sqrt(phi))."""
    if u < 0:
        raise ValueError("u must be >= 0")
    if alpha <= 0:
        raise ValueError("alpha must be positive")
    if u == 0:
        return 1.0
    lo, hi = laplace_interval(u, alpha)
    rule = gauss_legendre(order, lo, hi)
    phi = expit(alpha * rule.nodes + math.log(u))
    return _det_i_minus(_airy_matrix(rule, phi))


def diagonal_exp_integral(alpha: float, lo: float = -60.0, hi: float = 12.0, panels: int = 72, order: int = 40) -> float:
    """int e^{alpha x} K(x, x) dx over [lo, hi] by composite Gauss-Legendre."""
    edges = np.linspace(lo, hi, panels + 1)
    total = 0.0
    for a, b in zip(edges[:-1], edges[1:]):
        rule = gauss_legendre(order, a, b)
        total += float(np.dot(rule.weights, np.exp(alpha * rule.nodes) * airy_kernel_diagonal(rule.nodes)))
    return total


def first_moment_target(alpha: float) -> float:
    """e^{alpha^3/12} / (2 alpha sqrt(pi alpha))."""
    return math.exp(alpha**3 / 12.0) / (2.0 * alpha * math.sqrt(math.pi * alpha))


@dataclass
class MCEstimate:
    u: np.ndarray
    estimate: np.ndarray
    se: np.ndarray
    lower: np.ndarray
    upper: np.ndarray
    n_samples: int


def laplace_rhs_beta1_mc(
    u,
    alpha: float,
    n_samples: int,
    seed: int,
    n_sim: int = 4000,
    k: int | None = None,
    first_replica: int = 0,
) -> MCEstimate:
    """Monte Carlo estimate of E prod_k (1 + 4u e^{alpha lambda_k})^{-1/2} over Airy_1.

    Replica i draws its configuration from ``SeedSpec(seed, first_replica + i)``.
    ``lower``/``upper`` bracket the estimate after accounting for the points
    discarded below the truncation level: each omitted factor lies in
    [exp(-2u e^{alpha lambda}), 1].
    """
    u = np.atleast_1d(np.asarray(u, dtype=float))
    if np.any(u < 0):
        raise ValueError("u must be >= 0")
    logs = np.empty((n_samples, u.size))
    bounds = np.empty(n_samples)
    cutoff = default_cutoff(alpha) if k is None else None
    for i in range(n_samples):
        rng = SeedSpec(seed, first_replica + i).generator()
        pts = sample_airy_edge(1, k, n_sim, rng, cutoff=cutoff)
        e = np.exp(alpha * pts.points)
        logs[i] = -0.5 * np.log1p(4.0 * u[:, None] * e[None, :]).sum(axis=1)
        bounds[i] = tail_truncation_bound(alpha, min(pts.cutoff_level, -1e-9))
    vals = np.exp(logs)
    est = vals.mean(axis=0)
    se = vals.std(axis=0, ddof=1) / math.sqrt(n_samples) if n_samples > 1 else np.zeros_like(est)
    corr = np.exp(-2.0 * u * bounds.mean())
    return MCEstimate(u, est, se, est * corr, est, n_samples)
