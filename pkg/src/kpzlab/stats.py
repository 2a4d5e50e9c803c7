"""Agreement tests between samples and between samples and exact curves."""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field

import numpy as np

from .rand import as_stream

KS_TERMS = 100


@dataclass
class EmpiricalSample:
    values: np.ndarray
    generator: str
    params: dict
    seed: int

    @property
    def count(self) -> int:
        return int(self.values.size)


@dataclass
class ComparisonReport:
    name: str
    statistic: float
    p_value: float | None
    passed: bool
    threshold: float
    params: dict = field(default_factory=dict)
    details: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return asdict(self)


def kolmogorov_sf(x: float, terms: int = KS_TERMS) -> float:
    """P(K > x) = 2 sum_{k>=1} (-1)^{k-1} exp(-2 k^2 x^2)."""
    if x <= 0:
        return 1.0
    k = np.arange(1, terms + 1)
    s = 2.0 * np.sum((-1.0) ** (k - 1) * np.exp(-2.0 * k * k * x * x))
    return float(min(1.0, max(0.0, s)))


def ks_two_sample(x, y) -> tuple[float, float]:
    """Two-sample KS statistic D and its asymptotic p-value."""
    x = np.sort(np.asarray(x, dtype=float).ravel())
    y = np.sort(np.asarray(y, dtype=float).ravel())
    n, m = x.size, y.size
    if n == 0 or m == 0:
        raise ValueError("KS test needs two nonempty samples")
    grid = np.concatenate([x, y])
    fx = np.searchsorted(x, grid, side="right") / n
    fy = np.searchsorted(y, grid, side="right") / m
    d = float(np.max(np.abs(fx - fy)))
    ne = n * m / (n + m)
    return d, kolmogorov_sf(math.sqrt(ne) * d)


@dataclass
class LaplaceEstimate:
    u: np.ndarray
    mean: np.ndarray
    lower: np.ndarray
    upper: np.ndarray
    n: int


def empirical_laplace(values, u_grid, n_bootstrap: int = 1000, stream=0, level: float = 0.99, chunk: int = 50) -> LaplaceEstimate:
    """Sample means of exp(-u x) with percentile bootstrap intervals."""
    x = np.asarray(values, dtype=float).ravel()
    u = np.atleast_1d(np.asarray(u_grid, dtype=float))
    if np.any(u < 0):
        raise ValueError("u must be >= 0")
    if x.size == 0:
        raise ValueError("empty sample")
    f = np.exp(-np.outer(x, u))
    mean = f.mean(axis=0)
    rng = as_stream(stream)
    boot = np.empty((n_bootstrap, u.size))
    for s in range(0, n_bootstrap, chunk):
        c = min(chunk, n_bootstrap - s)
        idx = rng.integers(0, x.size, size=(c, x.size))
        boot[s : s + c] = f[idx].mean(axis=1)
    q = 0.5 * (1.0 - level)
    lower = np.quantile(boot, q, axis=0) if n_bootstrap else mean.copy()
    upper = np.quantile(boot, 1.0 - q, axis=0) if n_bootstrap else mean.copy()
    # a constant column has no sampling spread; keep the interval exact
    flat = np.ptp(f, axis=0) == 0
    mean[flat] = f[0, flat]
    lower[flat] = mean[flat]
    upper[flat] = mean[flat]
    return LaplaceEstimate(u, mean, np.minimum(lower, mean), np.maximum(upper, mean), x.size)


def mean_se(values) -> tuple[float, float]:
    x = np.asarray(values, dtype=float).ravel()
    if x.size == 0:
        raise ValueError("empty sample")
    se = float(x.std(ddof=1) / math.sqrt(x.size)) if x.size > 1 else 0.0
    return float(x.mean()), se


def moment_check(values, target: float, se_multiplier: float = 3.0, *, name: str = "moment", rel_allowance: float = 0.0) -> ComparisonReport:
    """Pass iff |mean - target| <= se_multiplier * SE + rel_allowance * |target|."""
    mean, se = mean_se(values)
    gap = abs(mean - target)
    tol = se_multiplier * se + rel_allowance * abs(target)
    return ComparisonReport(
        name,
        statistic=gap / se if se > 0 else (0.0 if gap == 0 else math.inf),
        p_value=None,
        passed=bool(gap <= tol),
        threshold=se_multiplier,
        details={"mean": mean, "se": se, "target": target, "rel_allowance": rel_allowance},
    )


def ks_check(x, y, p_min: float = 0.01, *, name: str = "ks") -> ComparisonReport:
    d, p = ks_two_sample(x, y)
    return ComparisonReport(name, d, p, bool(p > p_min), p_min, details={"n_x": int(np.size(x)), "n_y": int(np.size(y))})


def intervals_overlap(lo1, hi1, lo2, hi2) -> np.ndarray:
    return (np.asarray(lo1) <= np.asarray(hi2)) & (np.asarray(lo2) <= np.asarray(hi1))


def laplace_check(values, u_grid, exact, n_bootstrap: int = 1000, stream=0, level: float = 0.99, *, name: str = "laplace") -> ComparisonReport:
    """Exact curve inside the bootstrap band at every u."""
    est = empirical_laplace(values, u_grid, n_bootstrap, stream, level)
    exact = np.asarray(exact, dtype=float)
    inside = (est.lower <= exact) & (exact <= est.upper)
    return ComparisonReport(
        name,
        statistic=float(np.max(np.abs(est.mean - exact))),
        p_value=None,
        passed=bool(np.all(inside)),
        threshold=level,
        details={"u": est.u.tolist(), "mean": est.mean.tolist(), "lower": est.lower.tolist(), "upper": est.upper.tolist(), "exact": exact.tolist()},
    )
