"""Airy function Ai, its derivative and the Airy kernel for real arguments.

Evaluation strategy:

* x > 10: monotone asymptotic expansion in 1/zeta, zeta = (2/3) x^{3/2}.
* x < -40: oscillatory asymptotic expansion.
* otherwise: Taylor series of the Airy equation y'' = x y about the nearest
  anchor of a 0.5-spaced table.  The table is filled once by Taylor stepping,
  leftwards from the closed-form values at 0 and leftwards from x = 10 on the
  positive side (the stable direction for the recessive solution).

Absolute accuracy is about 1e-14 on [-20, 10] and 1e-13 on [-40, -20].
"""

from __future__ import annotations

import math
from functools import lru_cache

import numpy as np

DOMAIN = 200.0

AI0 = 3.0 ** (-2.0 / 3.0) / math.gamma(2.0 / 3.0)
AIP0 = -(3.0 ** (-1.0 / 3.0)) / math.gamma(1.0 / 3.0)

_STEP = 0.5
_LEFT = -40.0
_RIGHT = 10.0
_TAYLOR_TERMS = 34
_SQRT_PI = math.sqrt(math.pi)


@lru_cache(maxsize=None)
def _asymptotic_coefficients(n: int = 80):
    u = np.empty(n)
    v = np.empty(n)
    u[0] = v[0] = 1.0
    for k in range(1, n):
        u[k] = u[k - 1] * (6 * k - 5) * (6 * k - 3) * (6 * k - 1) / ((2 * k - 1) * 216.0 * k)
        v[k] = -(6 * k + 1) / (6 * k - 1) * u[k]
    return u, v


def _series_until_smallest(coef, z, sign_alternating=True):
    # sum_k (-1)^k coef[k] z^{-k}, stopped at the smallest term
    total = 0.0
    prev = math.inf
    zk = 1.0
    for k in range(coef.size):
        term = coef[k] / zk
        if abs(term) > prev:
            break
        total += -term if (sign_alternating and k % 2) else term
        prev = abs(term)
        if prev < 1e-18 * abs(total):
            break
        zk *= z
    return total


def _asym_positive(x: float):
    u, v = _asymptotic_coefficients()
    zeta = 2.0 / 3.0 * x**1.5
    pref = math.exp(-zeta) / (2.0 * _SQRT_PI)
    q = x**0.25
    ai = pref / q * _series_until_smallest(u, zeta)
    aip = -pref * q * _series_until_smallest(v, zeta)
    return ai, aip


def _oscillatory_sums(coef, zeta):
    # even part sum (-1)^k c_{2k} zeta^{-2k}, odd part sum (-1)^k c_{2k+1} zeta^{-2k-1}
    even = 0.0
    odd = 0.0
    prev = math.inf
    for k in range(coef.size // 2):
        te = coef[2 * k] / zeta ** (2 * k)
        to = coef[2 * k + 1] / zeta ** (2 * k + 1)
        if max(abs(te), abs(to)) > prev:
            break
        s = -1.0 if k % 2 else 1.0
        even += s * te
        odd += s * to
        prev = max(abs(te), abs(to))
        if prev < 1e-18:
            break
    return even, odd


def _asym_negative(x: float):
    u, v = _asymptotic_coefficients()
    t = -x
    zeta = 2.0 / 3.0 * t**1.5
    q = t**0.25
    c = math.cos(zeta - math.pi / 4.0)
    s = math.sin(zeta - math.pi / 4.0)
    ue, uo = _oscillatory_sums(u, zeta)
    ve, vo = _oscillatory_sums(v, zeta)
    ai = (c * ue + s * uo) / (_SQRT_PI * q)
    aip = q * (s * ve - c * vo) / _SQRT_PI
    return ai, aip


def _taylor(x0, y0, yp0, h, terms=_TAYLOR_TERMS):
    """Value and derivative at x0 + h of the Airy-equation solution with data (y0, yp0) at x0.

    Works elementwise on arrays.  Coefficients obey
    (k+2)(k+1) a_{k+2} = x0 a_k + a_{k-1}.
    """
    a_prev = np.zeros_like(y0)  # a_{k-1}
    a0 = y0
    a1 = yp0
    val = a0 + a1 * h
    der = a1.copy() if isinstance(a1, np.ndarray) else a1
    hk = h  # h^{k-1} for k = 2
    # a_{k} for k >= 2
    ak_m2, ak_m1 = a0, a1  # a_{k-2}, a_{k-1}
    a_km3 = a_prev
    for k in range(2, terms):
        ak = (x0 * ak_m2 + a_km3) / (k * (k - 1))
        der = der + k * ak * hk
        hk = hk * h
        val = val + ak * hk
        a_km3, ak_m2, ak_m1 = ak_m2, ak_m1, ak
    return val, der


@lru_cache(maxsize=None)
def _anchor_table():
    xs = np.arange(_LEFT, _RIGHT + _STEP / 2, _STEP)
    ai = np.empty_like(xs)
    aip = np.empty_like(xs)
    i0 = int(round(-_LEFT / _STEP))
    ai[i0], aip[i0] = AI0, AIP0
    sub = 4
    h = _STEP / sub
    # negative side: both solutions oscillate, stepping is neutrally stable
    y, yp = AI0, AIP0
    for i in range(i0 - 1, -1, -1):
        x = xs[i + 1]
        for _ in range(sub):
            y, yp = _taylor(x, y, yp, -h)
            x -= h
        ai[i], aip[i] = y, yp
    # positive side: start from the asymptotic values and march towards 0
    y, yp = _asym_positive(_RIGHT)
    ai[-1], aip[-1] = y, yp
    for i in range(len(xs) - 2, i0, -1):
        x = xs[i + 1]
        for _ in range(sub):
            y, yp = _taylor(x, y, yp, -h)
            x -= h
        ai[i], aip[i] = y, yp
    return xs, ai, aip


def _check_domain(x):
    if np.any(~np.isfinite(x)) or np.any(np.abs(x) > DOMAIN):
        raise ValueError(f"Airy evaluation is supported for |x| <= {DOMAIN:g}")


def airy_pair(x):
    """(Ai(x), Ai'(x)) for scalar or array ``x`` with |x| <= 200."""
    xa = np.asarray(x, dtype=float)
    _check_domain(xa)
    flat = xa.ravel()
    ai = np.empty_like(flat)
    aip = np.empty_like(flat)
    mid = (flat >= _LEFT) & (flat <= _RIGHT)
    if np.any(mid):
        xs, tai, taip = _anchor_table()
        xm = flat[mid]
        idx = np.clip(np.rint((xm - _LEFT) / _STEP).astype(int), 0, xs.size - 1)
        y, yp = _taylor(xs[idx], tai[idx], taip[idx], xm - xs[idx])
        ai[mid], aip[mid] = y, yp
    for i in np.flatnonzero(~mid):
        xi = flat[i]
        ai[i], aip[i] = _asym_positive(xi) if xi > 0 else _asym_negative(xi)
    if xa.ndim == 0:
        return float(ai[0]), float(aip[0])
    return ai.reshape(xa.shape), aip.reshape(xa.shape)


def airy_ai(x):
    return airy_pair(x)[0]


def airy_ai_prime(x):
    return airy_pair(x)[1]


NEAR_DIAGONAL = 1e-4


def airy_kernel_diagonal(x):
    """K(x, x) = Ai'(x)^2 - x Ai(x)^2."""
    ai, aip = airy_pair(x)
    return aip**2 - np.asarray(x) * ai**2


def airy_kernel(x, y):
    """Airy kernel (Ai(x)Ai'(y) - Ai'(x)Ai(y)) / (x - y), broadcasting over x and y.

    For |x - y| < 1e-4 the symmetric expansion about s = (x+y)/2 is used:
    K = K(s,s) + (d^2/4) (2 s Ai'(s)^2 - 2 s^2 Ai(s)^2 + Ai(s)Ai'(s)) / 3 + O(d^4).
    """
    scalar = np.ndim(x) == 0 and np.ndim(y) == 0
    x, y = np.broadcast_arrays(np.atleast_1d(np.asarray(x, dtype=float)), np.atleast_1d(np.asarray(y, dtype=float)))
    ax, apx = airy_pair(x)
    ay, apy = airy_pair(y)
    d = x - y
    near = np.abs(d) < NEAR_DIAGONAL
    with np.errstate(divide="ignore", invalid="ignore"):
        k = (ax * apy - apx * ay) / d
    if np.any(near):
        s = 0.5 * (x[near] + y[near])
        a, ap = airy_pair(s)
        dn = d[near]
        corr = (2.0 * s * ap**2 - 2.0 * s**2 * a**2 + a * ap) / 3.0
        k[near] = ap**2 - s * a**2 + dn**2 / 4.0 * corr
    return float(k[0]) if scalar else k


def airy_kernel_matrix(nodes):
    """Symmetric matrix K(x_i, x_j) on a set of nodes (exact diagonal formula)."""
    x = np.asarray(nodes, dtype=float)
    ai, aip = airy_pair(x)
    d = x[:, None] - x[None, :]
    num = ai[:, None] * aip[None, :] - aip[:, None] * ai[None, :]
    near = np.abs(d) < NEAR_DIAGONAL
    with np.errstate(divide="ignore", invalid="ignore"):
        k = num / d
    if np.any(near):
        i, j = np.nonzero(near)
        k[i, j] = airy_kernel(x[i], x[j])
    return 0.5 * (k + k.T)
