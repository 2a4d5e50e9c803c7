"""Compiled kernels for real symmetric tridiagonal matrices.

Conventions: ``d`` has length n, ``e`` has length n - 1 and ``e[i]`` couples
rows i and i + 1.  ``e2`` is the elementwise square of ``e``.
"""

import numpy as np
from numba import njit

_TINY = 1e-300


@njit(cache=True)
def tql_implicit(d, e, z, max_iter):
    """Implicit-shift QL with Wilkinson-type shifts (in place).

    ``d`` (n,) and ``e`` (n,) with ``e[n-1]`` unused hold the matrix on entry;
    on exit ``d`` holds the eigenvalues (unsorted).  Plane rotations are
    applied to the columns of ``z`` (rows are eigenvector coordinates), so
    passing the first row of the identity yields first components only.

    Returns -1 on success, else the index of the block that failed to
    converge within ``max_iter`` total sweeps.
    """
    n = d.shape[0]
    if n <= 1:
        return -1
    e[n - 1] = 0.0
    total = 0
    for l in range(n):
        while True:
            m = l
            while m < n - 1:
                dd = abs(d[m]) + abs(d[m + 1])
                if abs(e[m]) + dd == dd:
                    break
                m += 1
            if m == l:
                break
            total += 1
            if total > max_iter:
                return l
            g = (d[l + 1] - d[l]) / (2.0 * e[l])
            r = np.hypot(g, 1.0)
            g = d[m] - d[l] + e[l] / (g + (r if g >= 0.0 else -r))
            s = 1.0
            c = 1.0
            p = 0.0
            i = m - 1
            deflated = False
            while i >= l:
                f = s * e[i]
                b = c * e[i]
                r = np.hypot(f, g)
                e[i + 1] = r
                if r == 0.0:
                    d[i + 1] -= p
                    e[m] = 0.0
                    deflated = True
                    break
                s = f / r
                c = g / r
                g = d[i + 1] - p
                r = (d[i] - g) * s + 2.0 * c * b
                p = s * r
                d[i + 1] = g + p
                g = c * r - b
                for k in range(z.shape[0]):
                    f = z[k, i + 1]
                    z[k, i + 1] = s * z[k, i] + c * f
                    z[k, i] = c * z[k, i] - s * f
                i -= 1
            if deflated:
                continue
            d[l] -= p
            e[l] = g
            e[m] = 0.0
    return -1


@njit(cache=True)
def _backward_pass(d, e2, lam):
    """Bottom-up LDL^T of T - lam.

    Returns (count of eigenvalues < lam, r1, dr1/dlam, dlog|det(T - lam)|/dlam)
    where r1 = 1 / [(T - lam)^{-1}]_{11} is the last pivot.
    """
    n = d.shape[0]
    r = d[n - 1] - lam
    dr = -1.0
    if r == 0.0:
        r = -_TINY
    count = 1 if r < 0.0 else 0
    slog = dr / r
    for i in range(n - 2, -1, -1):
        q = e2[i] / r
        dr = -1.0 + q * dr / r
        r = d[i] - lam - q
        if r == 0.0:
            r = -_TINY
        if r < 0.0:
            count += 1
        slog += dr / r
    return count, r, dr, slog


@njit(cache=True)
def sturm_count(d, e2, lam):
    cnt, r, dr, slog = _backward_pass(d, e2, lam)
    return cnt


@njit(cache=True)
def _eigenvalue_by_index(d, e2, k, px, pc, npr, tol):
    """k-th smallest eigenvalue (0-based).

    ``px``/``pc`` hold ``npr`` previously probed points and their Sturm
    counts; the tightest bracket among them is the starting point and new
    probes are appended.  Safeguarded Newton on the characteristic polynomial is only trusted once the
    bracket isolates the eigenvalue.
    """
    a = -np.inf
    b = np.inf
    ca = -1
    cb = -1
    for i in range(npr):
        if pc[i] <= k and px[i] > a:
            a = px[i]
            ca = pc[i]
        if pc[i] > k and px[i] < b:
            b = px[i]
            cb = pc[i]
    x = 0.5 * (a + b)
    for _ in range(500):
        if b - a <= tol * max(1.0, abs(a), abs(b)):
            return 0.5 * (a + b), npr
        cnt, r, dr, slog = _backward_pass(d, e2, x)
        if npr < px.shape[0]:
            px[npr] = x
            pc[npr] = cnt
            npr += 1
        if cnt > k:
            b = x
            cb = cnt
        else:
            a = x
            ca = cnt
        isolated = ca == k and cb == k + 1
        # Newton on det(T - x): step -1 / (d/dx log|det|)
        newton = x - 1.0 / slog if slog != 0.0 else x
        if isolated and a < newton < b:
            if abs(newton - x) <= tol * max(1.0, abs(x)):
                return newton, npr
            x = newton
        else:
            x = 0.5 * (a + b)
    return x, npr


@njit(cache=True)
def eigen_range(d, e2, k_lo, k_hi, lo, hi, tol):
    """Eigenvalues with 0-based ascending indices k_lo..k_hi-1 and their e1 weights.

    Requires count(lo) <= k_lo and count(hi) >= k_hi.
    """
    m = k_hi - k_lo
    lam = np.empty(m)
    w = np.empty(m)
    cap = 64 * (m + 2)
    px = np.empty(cap)
    pc = np.empty(cap, dtype=np.int64)
    px[0] = lo
    pc[0] = sturm_count(d, e2, lo)
    px[1] = hi
    pc[1] = sturm_count(d, e2, hi)
    npr = 2
    for j in range(m - 1, -1, -1):
        x, npr = _eigenvalue_by_index(d, e2, k_lo + j, px, pc, npr, tol)
        lam[j] = x
        cnt, r, dr, slog = _backward_pass(d, e2, x)
        w[j] = -1.0 / dr
    return lam, w
