import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from kpzlab.matrices import (
    DENSE_CAP,
    DenseHermitian,
    SizeError,
    SpectralMeasureAtE1,
    TridiagonalSym,
    edge_radius,
    edge_spectral_at_e1,
    full_eigen,
    functional_corner,
    householder_tridiagonalize,
    matrix_element_functional,
    moment_functional_11,
    path_sum_oracle,
    power_exponent,
    sample_dumitriu_edelman,
    sample_goe_gue,
    sample_wigner_matched,
    spectral_at_e1,
    top_eigenvalues,
    trace_functional,
    tridiagonal_functional_sample,
)
from kpzlab.rand import SeedSpec


def g(seed, sid=0):
    return SeedSpec(seed, sid).generator()


def toeplitz(n):
    return TridiagonalSym(np.zeros(n), np.ones(n - 1))


def power11(a, k):
    return np.linalg.matrix_power(a, k)[0, 0]


# ---------------------------------------------------------------- samplers


@pytest.mark.parametrize("beta", [1, 2])
def test_dense_hermitian(beta):
    m = sample_goe_gue(20, beta, g(1))
    assert np.array_equal(m.entries, m.entries.conj().T)
    assert np.all(np.imag(np.diagonal(m.entries)) == 0)


def test_goe_diagonal_variance():
    x = np.array([sample_goe_gue(3, 1, g(2, i)).entries[0, 0] for i in range(10000)])
    assert abs(x.var() - 2) < 0.1


def test_gue_offdiagonal_second_moment():
    x = np.array([sample_goe_gue(3, 2, g(3, i)).entries[0, 1] for i in range(10000)])
    assert abs(np.mean(np.abs(x) ** 2) - 1) < 0.05


@pytest.mark.parametrize("beta", [1, 2])
def test_matched_wigner_symmetric_and_bounded(beta):
    m = sample_wigner_matched(30, beta, g(4))
    assert np.array_equal(m.entries, m.entries.conj().T)
    assert np.max(np.abs(m.entries)) <= math.sqrt(6) + 1e-12


def test_dumitriu_edelman_offdiagonal_second_moment():
    # n = 6 makes the first off-diagonal chi(2*5)/sqrt(2), so E b^2 = 5
    b = np.array([sample_dumitriu_edelman(6, 2, g(5, i)).offdiag[0] for i in range(20000)])
    se = (b**2).std() / math.sqrt(b.size)
    assert abs((b**2).mean() - 5) < 3 * se


def test_dumitriu_edelman_deterministic():
    a = sample_dumitriu_edelman(50, 1.5, g(6))
    b = sample_dumitriu_edelman(50, 1.5, g(6))
    assert np.array_equal(a.diag, b.diag) and np.array_equal(a.offdiag, b.offdiag)


@pytest.mark.parametrize("beta", [1, 2])
def test_dumitriu_edelman_edge(beta):
    n = 2000
    top = [top_eigenvalues(sample_dumitriu_edelman(n, beta, g(7, i)), k=1)[0] for i in range(200)]
    assert abs(np.mean(top) / (2 * math.sqrt(n)) - 1) < 0.05


# ---------------------------------------------------------- tridiagonalization


def test_householder_three_by_three():
    m = np.array([[2.0, 1, 1], [1, 2, 1], [1, 1, 2]])
    t = householder_tridiagonalize(m)
    assert math.isclose(t.offdiag[0], math.sqrt(2), rel_tol=1e-14)
    assert math.isclose(power11(t.to_dense(), 2), 6.0, rel_tol=1e-14)


@pytest.mark.parametrize("beta", [1, 2])
def test_householder_keeps_e1_moments(beta):
    m = sample_goe_gue(8, beta, g(8))
    t = householder_tridiagonalize(m).to_dense()
    for k in range(1, 7):
        want = power11(m.entries, k).real
        assert abs(power11(t, k) - want) <= 1e-9 * max(1.0, abs(want))


def test_householder_on_tridiagonal_input():
    t0 = sample_dumitriu_edelman(12, 1, g(9))
    t = householder_tridiagonalize(t0.to_dense())
    assert np.allclose(t.diag, t0.diag, atol=1e-12)
    assert np.allclose(np.abs(t.offdiag), np.abs(t0.offdiag), atol=1e-12)


def test_householder_transform_reconstructs():
    m = sample_goe_gue(15, 2, g(10))
    t, q = householder_tridiagonalize(m, return_transform=True)
    assert np.max(np.abs(q @ t.to_dense() @ q.conj().T - m.entries)) < 1e-12


# ------------------------------------------------------------- eigensolvers


def test_toeplitz_three():
    s = spectral_at_e1(toeplitz(3))
    assert np.allclose(s.eigenvalues, [math.sqrt(2), 0, -math.sqrt(2)], atol=1e-14)
    assert np.allclose(s.weights, [0.25, 0.5, 0.25], atol=1e-14)


@pytest.mark.parametrize("n", [3, 10, 100])
def test_toeplitz_closed_form(n):
    s = spectral_at_e1(toeplitz(n))
    k = np.arange(1, n + 1)
    lam = 2 * np.cos(k * np.pi / (n + 1))
    w = 2 / (n + 1) * np.sin(k * np.pi / (n + 1)) ** 2
    assert np.max(np.abs(s.eigenvalues - lam)) < 1e-10
    assert np.max(np.abs(s.weights - w)) < 1e-10


def test_weights_sum_to_one():
    s = spectral_at_e1(sample_dumitriu_edelman(500, 1, g(11)))
    assert abs(s.weights.sum() - 1) < 1e-10
    assert np.all(s.weights >= 0)


def test_moments_match_tridiagonal_powers():
    t = sample_dumitriu_edelman(40, 2, g(12))
    s = spectral_at_e1(t)
    a = t.to_dense()
    for k in range(1, 5):
        want = power11(a, k)
        assert abs(s.moment(k) - want) <= 1e-8 * max(1.0, abs(want))


@given(st.integers(2, 60), st.integers(0, 10**6))
@settings(max_examples=30, deadline=None)
def test_spectral_first_two_moments(n, seed):
    t = sample_dumitriu_edelman(n, 1, g(seed))
    s = spectral_at_e1(t)
    assert math.isclose(s.moment(1), t.diag[0], abs_tol=1e-10 * (1 + abs(t.diag[0])))
    want2 = t.diag[0] ** 2 + t.offdiag[0] ** 2
    assert math.isclose(s.moment(2), want2, rel_tol=1e-10)


def test_full_eigen_reconstruction():
    m = sample_goe_gue(50, 2, g(13))
    fs = full_eigen(m)
    v = fs.rows
    rec = v @ np.diag(fs.eigenvalues) @ v.conj().T
    assert np.max(np.abs(rec - m.entries)) < 1e-8


def test_full_eigen_weights_match_spectral_at_e1():
    m = sample_goe_gue(40, 1, g(14))
    fs = full_eigen(m, [0])
    s = spectral_at_e1(householder_tridiagonalize(m))
    assert np.max(np.abs(np.abs(fs.row(0)) ** 2 - s.weights)) < 1e-8
    assert np.allclose(fs.eigenvalues, s.eigenvalues, atol=1e-10)


def test_full_eigen_identity():
    fs = full_eigen(DenseHermitian(1, np.eye(5)))
    assert np.allclose(fs.eigenvalues, 1)


def test_dense_cap():
    with pytest.raises(SizeError, match="tridiagonal"):
        full_eigen(DenseHermitian(1, np.zeros((DENSE_CAP + 1, 1))))


def test_edge_solver_matches_ql():
    n, alpha = 3000, 0.7
    t = sample_dumitriu_edelman(n, 2, g(15))
    full = moment_functional_11(spectral_at_e1(t), alpha, 2)
    edge = moment_functional_11(edge_spectral_at_e1(t, edge_radius(n, alpha)), alpha, 2)
    assert abs(edge - full) <= 1e-9 * abs(full)


def test_top_eigenvalues_match_ql():
    t = sample_dumitriu_edelman(300, 1, g(16))
    lam = spectral_at_e1(t).eigenvalues
    assert np.allclose(top_eigenvalues(t, k=7), lam[:7], atol=1e-11)
    above = top_eigenvalues(t, above=lam[4] - 1e-9)
    assert np.allclose(above, lam[:5], atol=1e-11)


# ------------------------------------------------------------- functionals


def test_functional_degenerate_spectrum():
    n = 400
    s = SpectralMeasureAtE1(n, np.array([2 * math.sqrt(n)]), np.array([1.0]))
    assert math.isclose(moment_functional_11(s, 1.0, 2), n / 2 * 2)


def test_functional_nonnegative_inside_unit_interval():
    n = 100
    lam = np.linspace(-2 * math.sqrt(n), 2 * math.sqrt(n), 21)
    s = SpectralMeasureAtE1(n, lam[::-1], np.full(21, 1 / 21))
    assert moment_functional_11(s, 1.0, 1) >= 0
    assert trace_functional(s, 1.0) >= 0


def test_trace_single_point():
    s = SpectralMeasureAtE1(64, np.array([16.0]), np.array([1.0]))
    assert math.isclose(trace_functional(s, 1.0), 1.0)


def test_overflow_flagged():
    s = SpectralMeasureAtE1(1000, np.array([1e4]), np.array([1.0]))
    _, flag = moment_functional_11(s, 2.0, 2, with_flag=True)
    assert flag


def test_matrix_element_conventions():
    m = sample_goe_gue(60, 2, g(17))
    fs = full_eigen(m)
    s = spectral_at_e1(householder_tridiagonalize(m))
    assert math.isclose(matrix_element_functional(fs, 0, 0, 1.0), moment_functional_11(s, 1.0, 2), rel_tol=1e-8)
    ab = matrix_element_functional(fs, 2, 5, 1.0)
    ba = matrix_element_functional(fs, 5, 2, 1.0)
    assert ab == pytest.approx(np.conj(ba), rel=1e-12, abs=1e-14)


def test_matrix_element_offdiagonal_centered():
    x = np.array([matrix_element_functional(full_eigen(sample_goe_gue(60, 1, g(18, i)), [0, 1]), 0, 1, 1.0) for i in range(600)])
    assert abs(x.mean()) < 3 * x.std(ddof=1) / math.sqrt(x.size)


def test_path_sum_oracle():
    m = sample_goe_gue(4, 1, g(19)).entries
    assert math.isclose(path_sum_oracle(m, 1), m[0, 0])
    assert math.isclose(path_sum_oracle(m, 2), np.sum(np.abs(m[0]) ** 2))
    assert math.isclose(path_sum_oracle(m, 5), power11(m, 5), rel_tol=1e-10)
    with pytest.raises(SizeError):
        path_sum_oracle(np.eye(50), 6)


def test_power_exponent():
    assert power_exponent(1000, 1.0) == 100
    with pytest.raises(ValueError):
        power_exponent(10, 0.0)


def test_corner_block_gives_same_functional():
    n, alpha = 4000, 0.5
    t = sample_dumitriu_edelman(n, 1, g(20))
    c = functional_corner(n, alpha)
    corner = TridiagonalSym(t.diag[:c].copy(), t.offdiag[: c - 1].copy())
    full = moment_functional_11(spectral_at_e1(t), alpha, 1)
    part = moment_functional_11(edge_spectral_at_e1(corner, edge_radius(n, alpha), n=n), alpha, 1)
    assert abs(part - full) <= 1e-9 * abs(full)


def test_tridiagonal_functional_sample_positive():
    assert tridiagonal_functional_sample(10**5, 2, 0.5, g(21)) > 0
