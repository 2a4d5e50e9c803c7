import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from kpzlab.rand import SeedSpec, as_stream, chi, four_moment_matched, gaussian, make_stream, replica_map


def test_same_key_same_stream():
    a = SeedSpec(1, 0).generator().standard_normal(100)
    b = SeedSpec(1, 0).generator().standard_normal(100)
    assert np.array_equal(a, b)


def test_distinct_streams_look_independent():
    a = SeedSpec(1, 0).generator().standard_normal(20000)
    b = SeedSpec(1, 1).generator().standard_normal(20000)
    assert not np.array_equal(a, b)
    assert abs(np.corrcoef(a, b)[0, 1]) < 4 / math.sqrt(20000)


@given(st.integers(0, 2**64 - 1), st.integers(0, 2**64 - 1))
@settings(max_examples=25, deadline=None)
def test_any_u64_key_is_accepted(master, sid):
    g = SeedSpec(master, sid).generator()
    assert np.isfinite(g.standard_normal())


def test_bad_key_rejected():
    with pytest.raises(ValueError):
        SeedSpec(-1, 0)
    with pytest.raises(ValueError):
        SeedSpec(0, 2**64)


def test_gaussian_moments():
    x = gaussian(make_stream(1, 0), 10**6)
    assert abs(x.mean()) < 4 / 1000
    assert abs(x.var() - 1) < 0.01


def test_gaussian_replay():
    assert np.array_equal(gaussian(make_stream(1, 0), 50), gaussian(make_stream(1, 0), 50))


def test_chi_second_moment():
    x = chi(make_stream(2), 3.0, 200000)
    se = (x**2).std() / math.sqrt(x.size)
    assert abs((x**2).mean() - 3.0) < 3 * se


def test_chi_concentrates():
    x = chi(make_stream(3), 1e4, 2000)
    assert abs(np.mean(x / 100.0) - 1) < 0.02


def test_chi_rejects_nonpositive():
    with pytest.raises(ValueError):
        chi(make_stream(0), 0.0)


def test_matched_raw_moments_exact():
    # support {-sqrt3, 0, sqrt3} with masses 1/6, 2/3, 1/6
    pts = np.array([-math.sqrt(3), 0, math.sqrt(3)])
    p = np.array([1 / 6, 2 / 3, 1 / 6])
    assert math.isclose(np.dot(p, pts**2), 1.0)
    assert math.isclose(np.dot(p, pts**4), 3.0)
    assert abs(np.dot(p, pts**3)) < 1e-15


def test_matched_samples_take_three_values():
    x = four_moment_matched(make_stream(4), 1, "offdiagonal", 10000)
    assert set(np.round(np.unique(x) ** 2, 12)) <= {0.0, 3.0}
    d = four_moment_matched(make_stream(4), 1, "diagonal", 1000)
    assert np.max(np.abs(d)) <= math.sqrt(6) + 1e-12


def test_matched_complex_offdiagonal_unit_variance():
    z = four_moment_matched(make_stream(5), 2, "offdiagonal", 200000)
    assert abs(np.mean(np.abs(z) ** 2) - 1) < 0.01


def _draw(spec):
    return float(spec.generator().standard_normal())


def test_replica_map_is_ordered_and_worker_independent():
    a = replica_map(_draw, 6, 9, workers=1)
    b = replica_map(_draw, 6, 9, workers=2)
    assert a == b
    assert a[2] == _draw(SeedSpec(9, 2))


def test_as_stream_accepts_spec_and_int():
    assert np.array_equal(as_stream(SeedSpec(3, 0)).random(3), as_stream(3).random(3))
