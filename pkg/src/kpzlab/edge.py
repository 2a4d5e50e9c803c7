"""Airy_beta point configurations from the edge of tridiagonal beta-ensembles,
rank-one Gaussian decorations, and the decorated exponential integrals.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import gammaincc

from .matrices import TridiagonalSym, extend_dumitriu_edelman, sample_dumitriu_edelman, top_eigenvalues
from .rand import as_stream

# Distance (in rescaled units) past the lowest wanted point that the corner
# block must cover; eigenvectors decay like exp(-(2/3) x^{3/2}) beyond it.
LOCALIZATION_MARGIN = 14.0


@dataclass
class AiryPointSample:
    beta: float
    points: np.ndarray
    n_sim: int
    cutoff_level: float
    block: int = 0

    @property
    def k(self) -> int:
        return self.points.size


@dataclass
class DecoratedSample:
    """Airy points with i.i.d. Gaussian vectors u^n (and v^n for beta = 2), one row per point."""

    sample: AiryPointSample
    u: np.ndarray
    v: np.ndarray | None

    @property
    def beta(self):
        return self.sample.beta

    def w(self, n: int) -> np.ndarray:
        """Rank-one matrix W_n."""
        if self.v is None:
            return np.outer(self.u[n], self.u[n])
        z = self.u[n] + 1j * self.v[n]
        return 0.5 * np.outer(z, z.conj())


def default_cutoff(alpha: float) -> float:
    """Truncation level below which e^{alpha lambda} < 1e-12."""
    return -12.0 * math.log(10.0) / alpha


def corner_size(n_sim: int, lowest: float) -> int:
    return min(n_sim, int(math.ceil(n_sim ** (1.0 / 3.0) * (abs(lowest) + LOCALIZATION_MARGIN))) + 2)


def sample_airy_edge(
    beta: float,
    k: int | None,
    n_sim: int,
    stream,
    *,
    cutoff: float | None = None,
    span: float | None = None,
    block: int | None = None,
) -> AiryPointSample:
    """Top edge-rescaled eigenvalues n^{1/6}(lambda - 2 sqrt n) of a Dumitriu-Edelman matrix.

    Either the top ``k`` points or all points above ``cutoff``; with ``span``
    the level is lowered to ``points[0] - span`` when that is smaller.  Only
    the leading corner of the matrix that carries these eigenvectors is drawn
    (``block`` overrides its size; ``block=n_sim`` uses the whole matrix).
    """
    if k is None and cutoff is None:
        raise ValueError("give k or cutoff")
    if k is not None and k > n_sim:
        raise ValueError(f"k={k} exceeds n_sim={n_sim}")
    rng = as_stream(stream)
    lowest = cutoff if k is None else -((1.5 * math.pi * k) ** (2.0 / 3.0)) - 2.0
    size = corner_size(n_sim, lowest) if block is None else min(int(block), n_sim)
    t = sample_dumitriu_edelman(n_sim, beta, rng, size=size)
    scale = n_sim ** (1.0 / 6.0)
    centre = 2.0 * math.sqrt(n_sim)
    if k is not None:
        lam = top_eigenvalues(t, k=min(k, t.n))
        return AiryPointSample(beta, scale * (lam - centre), n_sim, float(scale * (lam[-1] - centre)), t.n)
    level = float(cutoff)
    if span is not None:
        top = scale * (top_eigenvalues(t, k=1)[0] - centre)
        if top - span < level:
            level = top - span
            if block is None and corner_size(n_sim, level) > t.n:
                t = extend_dumitriu_edelman(t, n_sim, beta, rng, corner_size(n_sim, level))
    pts = scale * (top_eigenvalues(t, above=centre + level / scale) - centre)
    return AiryPointSample(beta, pts, n_sim, level, t.n)


def decorate(sample: AiryPointSample, a_max: int, stream) -> DecoratedSample:
    if a_max < 1:
        raise ValueError("a_max must be >= 1")
    rng = as_stream(stream)
    u = rng.standard_normal((sample.k, a_max))
    v = rng.standard_normal((sample.k, a_max)) if sample.beta == 2 else None
    return DecoratedSample(sample, u, v)


def tail_truncation_bound(alpha: float, level: float, density: str = "asymptotic") -> float:
    """Expected mass E sum_{lambda < level} e^{alpha lambda} of discarded Airy points.

    ``density="asymptotic"`` uses sqrt|lambda|/pi (closed form through the
    upper incomplete gamma function); ``density="kernel"`` integrates the
    exact one-point density K(lambda, lambda) numerically.
    """
    if level >= 0:
        raise ValueError("truncation level must be negative")
    if alpha <= 0:
        raise ValueError("alpha must be positive")
    if density == "asymptotic":
        t = alpha * abs(level)
        return float(math.gamma(1.5) * gammaincc(1.5, t) / (math.pi * alpha**1.5))
    if density == "kernel":
        from .fredholm import diagonal_exp_integral

        lo = max(level - 60.0 / alpha, -200.0)
        panels = max(8, int(math.ceil((level - lo) / 1.0)))
        return diagonal_exp_integral(alpha, lo, level, panels=panels, order=24)
    raise ValueError(f"unknown density model {density!r}")


def decorated_integral_exp(dec: DecoratedSample, alpha: float, a_max: int | None = None):
    """sum_n W_n e^{alpha lambda_n} (a_max x a_max) and the truncation tail bound."""
    if alpha <= 0:
        raise ValueError("alpha must be positive")
    a = dec.u.shape[1] if a_max is None else min(a_max, dec.u.shape[1])
    e = np.exp(alpha * dec.sample.points)
    if dec.v is None:
        u = dec.u[:, :a]
        mat = u.T @ (e[:, None] * u)
    else:
        z = dec.u[:, :a] + 1j * dec.v[:, :a]
        mat = 0.5 * (z.T @ (e[:, None] * z.conj()))
        mat = 0.5 * (mat + mat.conj().T)
    level = min(dec.sample.cutoff_level, -1e-9)
    return mat, tail_truncation_bound(alpha, level)


def kpz_value(dec: DecoratedSample, alpha: float) -> float:
    """2 sum (u_1^n)^2 e^{alpha lambda_n} (beta=1) or sum ((u_1^n)^2+(v_1^n)^2)/2 e^{alpha lambda_n} (beta=2)."""
    e = np.exp(alpha * dec.sample.points)
    if dec.v is None:
        return float(2.0 * np.sum(dec.u[:, 0] ** 2 * e))
    return float(0.5 * np.sum((dec.u[:, 0] ** 2 + dec.v[:, 0] ** 2) * e))


def kpz_sample(beta: int, alpha: float, k: int | None, n_sim: int, stream, *, return_bound: bool = False):
    """One draw of the decorated-Airy representation of Z(2 alpha^3, 0) e^{alpha^3/12}.

    With ``k=None`` every point whose weight e^{alpha lambda} exceeds 1e-12 in
    absolute terms or relative to the largest point is used.
    """
    if beta not in (1, 2):
        raise ValueError("kpz_sample is defined for beta in {1, 2}")
    if alpha <= 0:
        raise ValueError("alpha must be positive")
    rng = as_stream(stream)
    cutoff = default_cutoff(alpha) if k is None else None
    span = -default_cutoff(alpha) if k is None else None
    pts = sample_airy_edge(beta, k, n_sim, rng, cutoff=cutoff, span=span)
    dec = decorate(pts, 1, rng)
    value = kpz_value(dec, alpha)
    if return_bound:
        bound = tail_truncation_bound(alpha, min(pts.cutoff_level, -1e-9))
        # E[(2/beta^2) chi^2_beta] = 2/beta per point
        return value, 2.0 / beta * bound
    return value
