"""Wigner and tridiagonal random matrices, spectral measures at e1, and the
rescaled high-power moment functionals.

Two execution paths are provided.  The dense path (``householder_tridiagonalize``,
``full_eigen``) handles general matrix elements for n up to a few thousand.  The
tridiagonal path (``sample_dumitriu_edelman`` with ``spectral_at_e1`` or
``edge_spectral_at_e1``) only sees the (1,1) spectral measure and scales to
n = 10^5 and beyond.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import hessenberg, lapack

from . import _tridiag
from .rand import as_stream, chi, four_moment_matched

DENSE_CAP = 2000

_LOG_MAX = math.log(np.finfo(float).max)


class ConvergenceError(RuntimeError):
    """QL iteration did not converge."""

    def __init__(self, block: int, n: int):
        super().__init__(f"QL iteration failed to converge in block starting at index {block} (n={n})")
        self.block = block


class SizeError(ValueError):
    pass


@dataclass
class DenseHermitian:
    """GOE (beta=1, real symmetric) or GUE (beta=2, complex Hermitian) style matrix.

    Entry variances follow M = (X + X^*)/2: GOE diagonal 2 and off-diagonal 1,
    GUE diagonal 1 and E|off-diagonal|^2 = 1.  The spectral edge sits at 2 sqrt(n).
    """

    beta: int
    entries: np.ndarray

    @property
    def n(self) -> int:
        return self.entries.shape[0]


@dataclass
class TridiagonalSym:
    diag: np.ndarray
    offdiag: np.ndarray

    def __post_init__(self):
        self.diag = np.asarray(self.diag, dtype=float)
        self.offdiag = np.asarray(self.offdiag, dtype=float)
        if self.offdiag.shape[0] != max(self.diag.shape[0] - 1, 0):
            raise ValueError("offdiag must have length n - 1")

    @property
    def n(self) -> int:
        return self.diag.shape[0]

    def to_dense(self) -> np.ndarray:
        return np.diag(self.diag) + np.diag(self.offdiag, 1) + np.diag(self.offdiag, -1)


@dataclass
class SpectralMeasureAtE1:
    """Eigenvalues (descending, matrix units) with squared first coordinates.

    ``n`` is the dimension of the source matrix.  When only edge eigenvalues
    were computed, ``discarded_weight`` is the total e1 weight of the omitted
    eigenvalues and every omitted eigenvalue satisfies |lambda| < ``discarded_radius``.
    """

    n: int
    eigenvalues: np.ndarray
    weights: np.ndarray
    discarded_weight: float = 0.0
    discarded_radius: float = 0.0

    def moment(self, k: int) -> float:
        return float(np.sum(self.weights * self.eigenvalues**k))


@dataclass
class FullSpectrum:
    """Eigenvalues (descending) and selected eigenvector coordinate rows.

    ``rows[r, j]`` is coordinate ``indices[r]`` (0-based) of the eigenvector
    belonging to ``eigenvalues[j]``.
    """

    n: int
    beta: int
    eigenvalues: np.ndarray
    indices: np.ndarray
    rows: np.ndarray
    _pos: dict = field(init=False, repr=False)

    def __post_init__(self):
        self._pos = {int(a): r for r, a in enumerate(self.indices)}

    def row(self, a: int) -> np.ndarray:
        try:
            return self.rows[self._pos[a]]
        except KeyError:
            raise KeyError(f"coordinate row {a} was not requested") from None


# ---------------------------------------------------------------- samplers


def sample_goe_gue(n: int, beta: int, stream) -> DenseHermitian:
    if n < 1:
        raise ValueError("n must be >= 1")
    if beta not in (1, 2):
        raise ValueError("dense Gaussian ensembles are defined for beta in {1, 2}")
    rng = as_stream(stream)
    if beta == 1:
        x = rng.normal(0.0, math.sqrt(2.0), size=(n, n))
        m = 0.5 * (x + x.T)
    else:
        x = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
        m = 0.5 * (x + x.conj().T)
    return DenseHermitian(beta, m)


def sample_wigner_matched(n: int, beta: int, stream) -> DenseHermitian:
    """Wigner matrix with the bounded four-moment-matched entry law."""
    if n < 1:
        raise ValueError("n must be >= 1")
    if beta not in (1, 2):
        raise ValueError("beta must be 1 or 2")
    rng = as_stream(stream)
    iu = np.triu_indices(n, 1)
    dtype = float if beta == 1 else complex
    m = np.zeros((n, n), dtype=dtype)
    m[iu] = four_moment_matched(rng, beta, "offdiagonal", size=iu[0].size)
    m = m + m.conj().T
    m[np.diag_indices(n)] = four_moment_matched(rng, beta, "diagonal", size=n)
    return DenseHermitian(beta, m)


def sample_dumitriu_edelman(n: int, beta: float, stream, size: int | None = None) -> TridiagonalSym:
    """Tridiagonal beta-ensemble: diagonal N(0, 2/beta), off-diagonal chi(beta m)/sqrt(beta).

    Off-diagonal parameters run m = n-1, n-2, ..., 1 from the (1,1) corner.
    With ``size`` < n only the leading ``size`` x ``size`` corner is drawn
    (its law is exactly that of the corner of the full matrix).
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    if beta <= 0:
        raise ValueError("beta must be positive")
    k = n if size is None else min(int(size), n)
    rng = as_stream(stream)
    diag = rng.normal(0.0, math.sqrt(2.0 / beta), size=k)
    m = np.arange(n - 1, n - k, -1, dtype=float)
    off = chi(rng, beta * m) / math.sqrt(beta) if m.size else np.empty(0)
    return TridiagonalSym(diag, np.atleast_1d(off))


def extend_dumitriu_edelman(t: TridiagonalSym, n: int, beta: float, stream, size: int) -> TridiagonalSym:
    """Grow a leading corner of an n x n Dumitriu-Edelman matrix to ``size`` with fresh entries.

    The new entries are independent of the old ones, so the result has the
    law of the ``size`` corner whatever rule chose ``size``.
    """
    k = t.n
    size = min(int(size), n)
    if size <= k:
        return t
    rng = as_stream(stream)
    diag = rng.normal(0.0, math.sqrt(2.0 / beta), size=size - k)
    m = np.arange(n - k, n - size, -1, dtype=float)
    off = chi(rng, beta * m) / math.sqrt(beta)
    return TridiagonalSym(np.concatenate([t.diag, diag]), np.concatenate([t.offdiag, off]))


# ---------------------------------------------------------- tridiagonalization


def householder_tridiagonalize(m: DenseHermitian | np.ndarray, return_transform: bool = False):
    """Reduce a Hermitian matrix to real tridiagonal form fixing e1.

    Returns T (and Q with M = Q T Q^*, Q e1 = e1 when ``return_transform``).
    LAPACK ?sytrd/?hetrd (or ?gehrd when Q is wanted) apply reflectors to
    rows k+1..n only, so the first basis vector is untouched; off-diagonals
    are then made nonnegative by a diagonal phase change.
    """
    a = np.array(m.entries if isinstance(m, DenseHermitian) else m)
    n = a.shape[0]
    if n < 2:
        raise ValueError("need n >= 2")
    a = a.astype(complex if np.iscomplexobj(a) else float)
    if not return_transform:
        trd = lapack.zhetrd if np.iscomplexobj(a) else lapack.dsytrd
        _, d, e, _, info = trd(a, lower=1)
        if info != 0:
            raise ValueError(f"tridiagonal reduction failed (info={info})")
        return TridiagonalSym(np.asarray(d, dtype=float).copy(), np.abs(np.asarray(e, dtype=float)))
    h, q = hessenberg(a, calc_q=True)
    sub = np.diagonal(h, -1).copy()
    off = np.abs(sub)
    ph = np.where(off > 0, sub / np.where(off > 0, off, 1.0), 1.0)
    phases = np.concatenate([[1.0], np.cumprod(ph)])
    return TridiagonalSym(np.real(np.diagonal(h)).copy(), off), q * phases[None, :]


# ------------------------------------------------------------ eigensolvers


def _sort_desc(lam, w):
    # descending eigenvalue; ties broken by descending weight
    return np.lexsort((-w, -lam))


def _ql(t: TridiagonalSym, z: np.ndarray) -> np.ndarray:
    n = t.n
    d = t.diag.copy()
    e = np.zeros(n)
    e[: n - 1] = t.offdiag
    status = _tridiag.tql_implicit(d, e, z, 30 * n)
    if status >= 0:
        raise ConvergenceError(status, n)
    return d


def spectral_at_e1(t: TridiagonalSym) -> SpectralMeasureAtE1:
    """All eigenvalues and e1 weights by implicit QL, O(n^2) time, O(n) memory."""
    z = np.zeros((1, t.n))
    z[0, 0] = 1.0
    lam = _ql(t, z)
    w = z[0] ** 2
    order = _sort_desc(lam, w)
    return SpectralMeasureAtE1(t.n, lam[order], w[order])


def _gershgorin(t: TridiagonalSym):
    b = np.abs(t.offdiag)
    r = np.zeros(t.n)
    r[:-1] += b
    r[1:] += b
    return float(np.min(t.diag - r)) - 1.0, float(np.max(t.diag + r)) + 1.0


def edge_spectral_at_e1(
    t: TridiagonalSym,
    radius: float,
    n: int | None = None,
) -> SpectralMeasureAtE1:
    """Eigenvalues with |lambda| >= radius and their e1 weights.

    Uses Sturm counts with safeguarded Newton steps and the weight formula
    p = -1 / r1'(lambda), O(n) per eigenvalue.  ``n`` overrides the
    dimension recorded in the result (for corner blocks of a larger matrix).
    """
    dim = t.n
    d = t.diag
    e2 = t.offdiag**2
    lo, hi = _gershgorin(t)
    tol = 64.0 * np.finfo(float).eps
    if dim == 1:
        lam, w = d.copy(), np.ones(1)
    else:
        below = _tridiag.sturm_count(d, e2, -radius) if -radius > lo else 0
        below_hi = _tridiag.sturm_count(d, e2, radius) if radius < hi else dim
        lam_lo, w_lo = _tridiag.eigen_range(d, e2, 0, below, lo, -radius, tol)
        lam_hi, w_hi = _tridiag.eigen_range(d, e2, below_hi, dim, radius, hi, tol)
        lam = np.concatenate([lam_lo, lam_hi])
        w = np.concatenate([w_lo, w_hi])
    order = _sort_desc(lam, w)
    kept = float(np.sum(w))
    return SpectralMeasureAtE1(
        dim if n is None else n,
        lam[order],
        w[order],
        discarded_weight=max(0.0, 1.0 - kept),
        discarded_radius=float(radius),
    )


def top_eigenvalues(t: TridiagonalSym, k: int | None = None, above: float | None = None) -> np.ndarray:
    """Largest eigenvalues (descending): the top ``k``, or all above ``above``."""
    d = t.diag
    e2 = t.offdiag**2
    lo, hi = _gershgorin(t)
    tol = 64.0 * np.finfo(float).eps
    if k is None:
        if above is None:
            raise ValueError("give k or above")
        start = _tridiag.sturm_count(d, e2, above) if above > lo else 0
        lo = max(lo, above)
    else:
        if k > t.n:
            raise ValueError("k exceeds the matrix size")
        start = t.n - k
    lam, _ = _tridiag.eigen_range(d, e2, start, t.n, lo, hi, tol)
    return lam[::-1].copy()


def full_eigen(m: DenseHermitian, coordinate_indices=None, cap: int = DENSE_CAP) -> FullSpectrum:
    """Full eigendecomposition returning the requested eigenvector coordinate rows.

    Rows are 0-based; ``None`` requests all rows.
    """
    n = m.n
    if n > cap:
        raise SizeError(
            f"dense path is capped at n={cap} (got n={n}); use the tridiagonal path "
            "(sample_dumitriu_edelman + spectral_at_e1) for (1,1) statistics"
        )
    idx = np.arange(n) if coordinate_indices is None else np.atleast_1d(np.asarray(coordinate_indices, dtype=int))
    if n == 1:
        lam = np.real(np.diagonal(m.entries)).astype(float)
        rows = np.ones((idx.size, 1), dtype=m.entries.dtype)
        return FullSpectrum(n, m.beta, lam, idx, rows)
    t, q = householder_tridiagonalize(m, return_transform=True)
    z = np.ascontiguousarray(q[idx, :])
    lam = _ql(t, z)
    order = np.argsort(-lam, kind="stable")
    return FullSpectrum(n, m.beta, lam[order], idx, z[:, order])


# ------------------------------------------------------------- functionals


def power_exponent(n: int, alpha: float) -> int:
    """m = floor(alpha n^{2/3})."""
    if alpha <= 0:
        raise ValueError("alpha must be positive")
    # guard against n**(2/3) landing just below an exact integer
    return int(math.floor(alpha * n ** (2.0 / 3.0) * (1.0 + 1e-12)))


def signed_powers(x, k: int):
    """x**k via sign * exp(k log|x|); returns (values, overflow mask)."""
    x = np.asarray(x, dtype=float)
    with np.errstate(divide="ignore"):
        logabs = k * np.log(np.abs(x))
    overflow = logabs > _LOG_MAX
    sign = np.where((x < 0) & (k % 2 == 1), -1.0, 1.0)
    with np.errstate(over="ignore"):
        vals = sign * np.exp(logabs)
    return vals, overflow


def _edge_terms(lam, n, alpha):
    x = np.asarray(lam, dtype=float) / (2.0 * math.sqrt(n))
    m = power_exponent(n, alpha)
    even, o1 = signed_powers(x, 2 * m)
    odd, o2 = signed_powers(x, 2 * m + 1)
    return even + odd, bool(np.any(o1 | o2))


def _finish(value, overflow, with_flag):
    return (value, overflow) if with_flag else value


def moment_functional_11(spec: SpectralMeasureAtE1, alpha: float, beta: float, *, with_flag: bool = False):
    """(n/beta) [ (M/2sqrt n)^{2m} + (M/2sqrt n)^{2m+1} ]_{11}, m = floor(alpha n^{2/3})."""
    terms, overflow = _edge_terms(spec.eigenvalues, spec.n, alpha)
    value = spec.n / beta * float(np.sum(spec.weights * terms))
    return _finish(value, overflow, with_flag)


def discarded_bound(spec: SpectralMeasureAtE1, alpha: float, beta: float) -> float:
    """Bound on the omitted part of ``moment_functional_11`` for edge-only spectra."""
    if spec.discarded_weight == 0.0:
        return 0.0
    x = spec.discarded_radius / (2.0 * math.sqrt(spec.n))
    m = power_exponent(spec.n, alpha)
    return spec.n / beta * spec.discarded_weight * x ** (2 * m) * (1.0 + x)


def edge_radius(n: int, alpha: float, tol: float = 1e-13) -> float:
    """Radius below which eigenvalues change the (1,1) functional by < tol."""
    m = power_exponent(n, alpha)
    x = (tol / (2.0 * n)) ** (1.0 / (2 * m)) if m > 0 else 0.0
    return 2.0 * math.sqrt(n) * x


def matrix_element_functional(spec: FullSpectrum, a: int, b: int, alpha: float, *, with_flag: bool = False):
    """(n/2) sum_j z_a^j conj(z_b^j) (x_j^{2m} + x_j^{2m+1}); rows a, b are 0-based."""
    terms, overflow = _edge_terms(spec.eigenvalues, spec.n, alpha)
    value = spec.n / 2.0 * np.sum(spec.row(a) * np.conj(spec.row(b)) * terms)
    value = complex(value) if np.iscomplexobj(value) else float(value)
    if a == b and isinstance(value, complex):
        value = value.real
    return _finish(value, overflow, with_flag)


def trace_functional(spec, alpha: float, *, with_flag: bool = False):
    """(1/2) tr[ (M/2sqrt n)^{2m} + (M/2sqrt n)^{2m+1} ]."""
    terms, overflow = _edge_terms(spec.eigenvalues, spec.n, alpha)
    return _finish(0.5 * float(np.sum(terms)), overflow, with_flag)


def path_sum_oracle(m: DenseHermitian | np.ndarray, k: int, max_paths: int = 10**7):
    """[M^k]_{11} as the sum over index paths 1 -> j1 -> ... -> j_{k-1} -> 1."""
    a = np.asarray(m.entries if isinstance(m, DenseHermitian) else m)
    n = a.shape[0]
    if k < 1:
        raise ValueError("k must be >= 1")
    if n ** (k - 1) > max_paths:
        raise SizeError(f"{n}^{k - 1} paths exceed the limit of {max_paths}")
    rows = a.tolist()
    total = 0
    for path in itertools.product(range(n), repeat=k - 1):
        prev = 0
        prod = 1
        for j in path:
            prod *= rows[prev][j]
            prev = j
        total += prod * rows[prev][0]
    return total


# -------------------------------------------------------------- samplers


def functional_corner(n: int, alpha: float) -> int:
    """Leading block of a tridiagonal matrix that fixes [T^k]_{11} for all k <= 2m+1.

    A closed walk of length k from index 1 only visits indices <= floor(k/2)+1.
    """
    return min(n, power_exponent(n, alpha) + 2)


def tridiagonal_functional_sample(n: int, beta: float, alpha: float, stream, *, with_flag: bool = False):
    """One draw of the (1,1) moment functional of an n x n Dumitriu-Edelman matrix.

    Only the leading ``functional_corner(n, alpha)`` block is drawn; its law is
    that of the same block of the full matrix, and the functional depends on
    nothing else.
    """
    t = sample_dumitriu_edelman(n, beta, stream, size=functional_corner(n, alpha))
    spec = edge_spectral_at_e1(t, edge_radius(n, alpha), n=n)
    return moment_functional_11(spec, alpha, beta, with_flag=with_flag)


def dense_functional_sample(n: int, beta: int, alpha: float, stream, ensemble: str = "gaussian", *, with_flag: bool = False):
    """(1,1) functional of a dense GOE/GUE or four-moment-matched Wigner matrix."""
    if ensemble == "gaussian":
        m = sample_goe_gue(n, beta, stream)
    elif ensemble == "matched":
        m = sample_wigner_matched(n, beta, stream)
    else:
        raise ValueError(f"unknown dense ensemble {ensemble!r}")
    spec = edge_spectral_at_e1(householder_tridiagonalize(m), edge_radius(n, alpha), n=n)
    return moment_functional_11(spec, alpha, beta, with_flag=with_flag)
