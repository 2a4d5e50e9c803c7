"""Brownian excursions, their areas and local times, and the excursion/white-noise
random variable

    (1 / (beta alpha sqrt(pi alpha))) E_e[ exp(-1/2 int_0^{2 alpha} e(t) dt
                                             + beta^{-1/2} int_0^inf L_a(e) dW(a)) ]

where the expectation is over the excursion e only and W is a fixed
realization of a standard Brownian motion in the level variable a.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from numba import njit

from .rand import as_stream


@dataclass
class ExcursionPath:
    duration: float
    values: np.ndarray

    @property
    def n_steps(self) -> int:
        return self.values.size - 1

    @property
    def dt(self) -> float:
        return self.duration / self.n_steps

    @property
    def times(self) -> np.ndarray:
        return np.linspace(0.0, self.duration, self.values.size)


@dataclass
class LocalTimeProfile:
    """L[i] = (time spent in [levels[i], levels[i] + bin_width)) / bin_width."""

    bin_width: float
    levels: np.ndarray
    values: np.ndarray


@dataclass
class NoiseGrid:
    """Increments dW[i] ~ N(0, bin_width) of W over [i, i+1) * bin_width."""

    bin_width: float
    increments: np.ndarray

    @property
    def a_max(self) -> float:
        return self.bin_width * self.increments.size


@dataclass
class KernelEstimate:
    value: float
    se: float
    n_used: int
    n_rejected: int


def default_bin_width(alpha: float) -> float:
    return math.sqrt(2.0 * alpha) / 128.0


def default_a_max(alpha: float) -> float:
    return 4.0 * math.sqrt(2.0 * alpha)


# ------------------------------------------------------------------- paths


def sample_excursions(alpha: float, n_steps: int, count: int, stream, method: str = "bessel3") -> np.ndarray:
    """``count`` excursions of duration 2 alpha on a grid of ``n_steps`` steps.

    ``bessel3``: Euclidean norm of a three-dimensional Brownian bridge, exact
    in law at the grid times.  ``vervaat``: cyclic shift of a Gaussian random
    walk bridge at its minimum.
    """
    if n_steps < 2:
        raise ValueError("n_steps must be >= 2")
    rng = as_stream(stream)
    T = 2.0 * alpha
    dt = T / n_steps
    frac = np.arange(n_steps + 1) / n_steps
    if method == "bessel3":
        inc = rng.standard_normal((count, 3, n_steps)) * math.sqrt(dt)
        w = np.zeros((count, 3, n_steps + 1))
        np.cumsum(inc, axis=2, out=w[:, :, 1:])
        w -= w[:, :, -1:] * frac
        out = np.sqrt(np.einsum("bcn,bcn->bn", w, w))
        out[:, 0] = 0.0
        out[:, -1] = 0.0
        return out
    if method == "vervaat":
        inc = rng.standard_normal((count, n_steps)) * math.sqrt(dt)
        inc -= inc.mean(axis=1, keepdims=True)
        w = np.zeros((count, n_steps))
        np.cumsum(inc[:, :-1], axis=1, out=w[:, 1:])
        k = np.argmin(w, axis=1)
        idx = (np.arange(n_steps)[None, :] + k[:, None]) % n_steps
        e = np.take_along_axis(w, idx, axis=1) - w[np.arange(count), k][:, None]
        return np.concatenate([e, np.zeros((count, 1))], axis=1)
    raise ValueError(f"unknown excursion method {method!r}")


def sample_excursion(alpha: float, n_steps: int, stream, method: str = "bessel3") -> ExcursionPath:
    if n_steps < 100:
        raise ValueError("n_steps must be >= 100")
    vals = sample_excursions(alpha, n_steps, 1, stream, method)[0]
    return ExcursionPath(2.0 * alpha, vals)


def excursion_area(path: ExcursionPath) -> float:
    v = path.values
    return float(path.dt * (v.sum() - 0.5 * (v[0] + v[-1])))


def _areas(values: np.ndarray, dt: float) -> np.ndarray:
    return dt * (values.sum(axis=1) - 0.5 * (values[:, 0] + values[:, -1]))


@njit(cache=True)
def _occupation(values, dt, width, nbins):
    """Time each piecewise-linear path spends in level bins [i w, (i+1) w).

    Paths reaching level nbins * width are flagged and left zero.
    """
    count, npts = values.shape
    occ = np.zeros((count, nbins))
    over = np.zeros(count, dtype=np.bool_)
    for b in range(count):
        top = 0.0
        for i in range(npts):
            if values[b, i] > top:
                top = values[b, i]
        if top >= nbins * width:
            over[b] = True
            continue
        for i in range(npts - 1):
            y0 = values[b, i]
            y1 = values[b, i + 1]
            lo = min(y0, y1)
            hi = max(y0, y1)
            k0 = int(lo / width)
            k1 = int(hi / width)
            if k0 == k1:
                occ[b, k0] += dt
                continue
            rate = dt / (hi - lo)
            occ[b, k0] += rate * ((k0 + 1) * width - lo)
            for k in range(k0 + 1, k1):
                occ[b, k] += rate * width
            occ[b, k1] += rate * (hi - k1 * width)
    return occ, over


def local_time(path: ExcursionPath, bin_width: float) -> LocalTimeProfile:
    if bin_width <= 0:
        raise ValueError("bin_width must be positive")
    nbins = int(np.max(path.values) / bin_width) + 2
    occ, _ = _occupation(path.values[None, :], path.dt, bin_width, nbins)
    return LocalTimeProfile(bin_width, bin_width * np.arange(nbins), occ[0] / bin_width)


# ------------------------------------------------------------------- noise


def sample_noise(alpha: float, stream, bin_width: float | None = None, a_max: float | None = None) -> NoiseGrid:
    width = default_bin_width(alpha) if bin_width is None else bin_width
    top = default_a_max(alpha) if a_max is None else a_max
    nbins = int(math.ceil(top / width))
    rng = as_stream(stream)
    return NoiseGrid(width, rng.standard_normal(nbins) * math.sqrt(width))


def _prefactor(beta: float, alpha: float) -> float:
    return 1.0 / (beta * alpha * math.sqrt(math.pi * alpha))


def _mean_se(x: np.ndarray):
    n = x.size
    if n == 0:
        return math.nan, math.nan
    se = float(x.std(ddof=1) / math.sqrt(n)) if n > 1 else 0.0
    return float(x.mean()), se


def kernel_rv_sample(
    beta: float,
    alpha: float,
    noise: NoiseGrid,
    n_excursions: int,
    n_steps: int,
    stream,
    *,
    batch: int = 256,
    method: str = "bessel3",
) -> KernelEstimate:
    """Inner Monte Carlo over excursions for one fixed noise realization.

    Excursions reaching ``noise.a_max`` are rejected and counted.
    """
    rng = as_stream(stream)
    T = 2.0 * alpha
    dt = T / n_steps
    width = noise.bin_width
    dw = noise.increments
    g = 1.0 / math.sqrt(beta)
    vals = []
    rejected = 0
    done = 0
    while done < n_excursions:
        m = min(batch, n_excursions - done)
        paths = sample_excursions(alpha, n_steps, m, rng, method)
        occ, over = _occupation(paths, dt, width, dw.size)
        keep = ~over
        rejected += int(over.sum())
        expo = -0.5 * _areas(paths[keep], dt) + g * (occ[keep] @ dw) / width
        vals.append(np.exp(expo))
        done += m
    w = np.concatenate(vals)
    mean, se = _mean_se(w)
    c = _prefactor(beta, alpha)
    return KernelEstimate(c * mean, c * se, w.size, rejected)


def kernel_mean(
    beta: float,
    alpha: float,
    n_excursions: int,
    n_steps: int,
    stream,
    *,
    bin_width: float | None = None,
    batch: int = 256,
    method: str = "bessel3",
) -> KernelEstimate:
    """Noise-averaged kernel variable, using E_W exp(g int L dW) = exp(g^2/2 int L^2 da)."""
    rng = as_stream(stream)
    T = 2.0 * alpha
    dt = T / n_steps
    width = default_bin_width(alpha) if bin_width is None else bin_width
    vals = []
    done = 0
    while done < n_excursions:
        m = min(batch, n_excursions - done)
        paths = sample_excursions(alpha, n_steps, m, rng, method)
        nbins = int(paths.max() / width) + 2
        occ, _ = _occupation(paths, dt, width, nbins)
        l2 = (occ**2).sum(axis=1) / width
        vals.append(np.exp(-0.5 * _areas(paths, dt) + l2 / (2.0 * beta)))
        done += m
    w = np.concatenate(vals)
    mean, se = _mean_se(w)
    c = _prefactor(beta, alpha)
    return KernelEstimate(c * mean, c * se, w.size, 0)
