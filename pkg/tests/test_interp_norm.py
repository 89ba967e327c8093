import math

import numpy as np
import pytest
from hypothesis import given, strategies as st
from hypothesis.extra.numpy import arrays

from polylab.errors import ConfigurationError, DomainError
from polylab.interp_norm import (
    InterpolationIndex,
    dual_gauge_exact,
    holmstedt_approx,
    normalize_to_dual_sphere,
    primal_gauge,
    rearrange_desc,
    water_filling_maximizer,
)

finite = st.floats(-1e3, 1e3, allow_nan=False, allow_infinity=False)


@st.composite
def vec_and_r(draw, max_n=12, integer_r=False):
    n = draw(st.integers(1, max_n))
    z = draw(arrays(float, n, elements=finite))
    if integer_r:
        r = draw(st.integers(1, n))
    else:
        r = draw(st.floats(1, n))
    return z, r


def test_rearrange_examples():
    v = rearrange_desc([-3, 1, 2])
    assert v.values.tolist() == [3, 2, 1] and v.perm.tolist() == [0, 2, 1]
    assert rearrange_desc([0, 0]).values.tolist() == [0, 0]
    assert rearrange_desc([1, 1, 1]).perm.tolist() == [0, 1, 2]


@given(arrays(float, st.integers(1, 20), elements=finite))
def test_rearrange_properties(z):
    v = rearrange_desc(z)
    assert np.all(np.diff(v.values) <= 0)
    assert np.array_equal(np.abs(z)[v.perm], v.values)


def test_primal_examples():
    assert primal_gauge(np.eye(4)[0], 4) == 1
    assert primal_gauge(np.ones(4), 4) == 1
    assert primal_gauge([3, 4], 1) == 5
    with pytest.raises(DomainError):
        primal_gauge([1, 2], InterpolationIndex(3, 2))


def test_dual_examples():
    assert dual_gauge_exact(np.eye(5)[0], 3.7) == 1
    assert dual_gauge_exact(np.ones(9), 4) == pytest.approx(6, abs=1e-12)
    assert dual_gauge_exact([2, 1, 1], 1) == pytest.approx(math.sqrt(6), abs=1e-12)
    assert dual_gauge_exact(np.zeros(3), 2) == 0
    w = math.sqrt(4 / 9) * np.ones(9)
    assert np.ones(9) @ w == pytest.approx(6)


def test_holmstedt_examples():
    assert holmstedt_approx(np.eye(3)[0], 1) == 1
    assert holmstedt_approx([2, 1, 1], 1) == pytest.approx(2 + math.sqrt(2))
    assert holmstedt_approx(np.ones(9), 4) == pytest.approx(4 + 2 * math.sqrt(5))
    with pytest.raises(ConfigurationError):
        holmstedt_approx([1, 2, 3], 1.5)


def test_normalize_examples():
    assert np.allclose(normalize_to_dual_sphere(2 * np.eye(3)[0], 3), np.eye(3)[0])
    assert np.allclose(normalize_to_dual_sphere(np.ones(9), 4), np.ones(9) / 6)
    with pytest.raises(DomainError):
        normalize_to_dual_sphere(np.zeros(3), 2)


def test_index_validation():
    with pytest.raises(ConfigurationError):
        InterpolationIndex(3, 4)
    with pytest.raises(ConfigurationError):
        InterpolationIndex(0, 1)
    with pytest.raises(DomainError):
        dual_gauge_exact([1, 2], 3)


@given(vec_and_r())
def test_normalized_on_sphere(zr):
    z, r = zr
    if not np.any(z):
        return
    u = normalize_to_dual_sphere(z, r)
    assert abs(dual_gauge_exact(u, r) - 1) <= 1e-12


@given(vec_and_r())
def test_maximizer_attains_and_is_feasible(zr):
    z, r = zr
    w = water_filling_maximizer(z, r)
    val = dual_gauge_exact(z, r)
    assert primal_gauge(w, r) <= 1 + 1e-9
    assert abs(w @ z - val) <= 1e-9 * max(1.0, val)


@given(vec_and_r(), st.integers(0, 2**32 - 1))
def test_duality_random_feasible_points(zr, seed):
    z, r = zr
    gen = np.random.default_rng(seed)
    W = gen.standard_normal((1000, z.size))
    W /= primal_gauge(W, r)[:, None]
    assert np.max(W @ z) <= dual_gauge_exact(z, r) * (1 + 1e-12) + 1e-12


@given(vec_and_r(), vec_and_r(), st.floats(0.01, 100))
def test_norm_axioms(zr, yr, lam):
    z, r = zr
    y = yr[0]
    if y.size != z.size:
        y = np.resize(y, z.size)
    d = dual_gauge_exact
    tol = 1e-9 * (1 + np.abs(z).sum() + np.abs(y).sum())
    assert d(lam * z, r) == pytest.approx(lam * d(z, r), rel=1e-9, abs=1e-12)
    assert d(z + y, r) <= d(z, r) + d(y, r) + tol


@given(vec_and_r(), st.floats(0, 1))
def test_monotone_in_r(zr, t):
    z, r = zr
    r2 = r + t * (z.size - r)
    assert dual_gauge_exact(z, r2) >= dual_gauge_exact(z, r) * (1 - 1e-12) - 1e-12
    assert primal_gauge(z, r2) <= primal_gauge(z, r) * (1 + 1e-12) + 1e-12


@given(arrays(float, st.integers(1, 15), elements=finite))
def test_endpoints(z):
    n = z.size
    assert dual_gauge_exact(z, 1) == pytest.approx(np.linalg.norm(z), rel=1e-9, abs=1e-12)
    assert dual_gauge_exact(z, n) == pytest.approx(np.abs(z).sum(), rel=1e-12, abs=1e-12)


@given(vec_and_r(max_n=40, integer_r=True))
def test_holmstedt_sandwich(zr):
    z, r = zr
    exact = dual_gauge_exact(z, r)
    approx = holmstedt_approx(z, r)
    assert exact * (1 - 1e-9) - 1e-12 <= approx <= 3 * exact + 1e-12


def test_row_wise_matches_single():
    gen = np.random.default_rng(0)
    Z = gen.standard_normal((20, 7))
    batch = dual_gauge_exact(Z, 3.5)
    single = [dual_gauge_exact(z, 3.5) for z in Z]
    assert np.allclose(batch, single, rtol=0, atol=0)


@pytest.mark.parametrize("q,n,r", [(0.36, 797, 398), (0.359, 621, 310), (0.5, 2000, 1000)])
def test_steep_geometric_tails(q, n, r):
    # squares of the deep tail underflow; the value must still match the maximizer
    z = q ** np.arange(n)
    w = water_filling_maximizer(z, r)
    assert dual_gauge_exact(z, r) == pytest.approx(float(w @ z), rel=1e-14)
    assert dual_gauge_exact(z, r) <= holmstedt_approx(z, r) * (1 + 1e-14)
