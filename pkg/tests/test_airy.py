import math

import mpmath
import numpy as np
import pytest
from scipy import special

from kpzlab.airy import AI0, AIP0, NEAR_DIAGONAL, airy_ai, airy_ai_prime, airy_kernel, airy_kernel_diagonal, airy_kernel_matrix, airy_pair


def test_values_at_zero():
    assert abs(airy_ai(0.0) - 0.355028053887817) < 1e-12
    assert abs(airy_ai_prime(0.0) - (-0.258819403792807)) < 1e-12
    assert airy_ai(0.0) == AI0 and airy_ai_prime(0.0) == AIP0


def test_against_scipy_on_bulk_range():
    x = np.linspace(-20, 10, 3001)
    ai, aip = airy_pair(x)
    ref = special.airy(x)
    assert np.max(np.abs(ai - ref[0])) < 1e-13
    assert np.max(np.abs(aip - ref[1])) < 1e-13


def test_far_left_against_scipy():
    x = np.linspace(-200, -20, 1001)
    ai, aip = airy_pair(x)
    ref = special.airy(x)
    assert np.max(np.abs(ai - ref[0])) < 1e-11
    assert np.max(np.abs(aip - ref[1])) < 1e-10


@pytest.mark.parametrize("x", [10.5, 15.0, 30.0, 80.0])
def test_right_tail_relative(x):
    ai, aip = airy_pair(x)
    assert abs(ai / float(mpmath.airyai(x)) - 1) < 1e-12
    assert abs(aip / float(mpmath.airyai(x, derivative=1)) - 1) < 1e-12


def test_asymptotic_ratio_at_ten():
    # the ratio to the leading term is 1 - 5/(72 zeta) + O(zeta^-2), zeta = (2/3) 10^{3/2}
    x = 10.0
    zeta = 2 / 3 * x**1.5
    r = airy_ai(x) * 2 * math.sqrt(math.pi) * x**0.25 * math.exp(zeta)
    assert abs(r - (1 - 5 / (72 * zeta))) < 1e-4
    assert abs(r - 1) < 4e-3


def test_ode_residual():
    x = np.linspace(-15, 15, 601)
    h = 1e-4
    lo, _ = airy_pair(x - h)
    mid, _ = airy_pair(x)
    hi, _ = airy_pair(x + h)
    second = (hi - 2 * mid + lo) / h**2
    assert np.max(np.abs(second - x * mid)) < 1e-6


def test_derivative_is_consistent():
    x = np.linspace(-10, 5, 301)
    h = 1e-5
    fd = (airy_ai(x + h) - airy_ai(x - h)) / (2 * h)
    assert np.max(np.abs(fd - airy_ai_prime(x))) < 1e-8


def test_domain():
    with pytest.raises(ValueError):
        airy_ai(201.0)
    with pytest.raises(ValueError):
        airy_ai(np.nan)


def test_kernel_symmetric_and_diagonal():
    x = np.linspace(-5, 3, 17)
    k = airy_kernel(x[:, None], x[None, :])
    assert np.array_equal(k, k.T)
    assert abs(airy_kernel(0.0, 0.0) - AIP0**2) < 1e-15
    assert abs(airy_kernel(0.0, 0.0) - (3 ** (-1 / 3) / math.gamma(1 / 3)) ** 2) < 1e-15


def test_kernel_continuous_across_switch():
    s = np.linspace(-8, 4, 121)
    d = NEAR_DIAGONAL
    inner = airy_kernel(s + 0.4999 * d, s - 0.4999 * d)
    outer = airy_kernel(s + 0.5001 * d, s - 0.5001 * d)
    assert np.max(np.abs(inner - outer)) < 1e-10


def test_kernel_diagonal_is_limit():
    x = np.linspace(-6, 3, 19)
    assert np.allclose(airy_kernel(x, x), airy_kernel_diagonal(x), atol=1e-15)
    assert np.allclose(np.diag(airy_kernel_matrix(x)), airy_kernel_diagonal(x), atol=1e-15)
