import math

import numpy as np
import pytest
from hypothesis import given, strategies as st
from hypothesis.extra.numpy import arrays

from polylab.errors import DomainError
from polylab.interp_norm import dual_gauge_exact
from polylab.partition import (
    BlockPartition,
    block_l2_sum,
    partition_from_blocks,
    random_block_sums,
    random_partition,
    round_robin_partition,
    verify_sandwich,
)

finite = st.floats(-1e3, 1e3, allow_nan=False, allow_infinity=False)


@st.composite
def vec_and_int_r(draw, max_n=30):
    n = draw(st.integers(1, max_n))
    z = draw(arrays(float, n, elements=finite))
    return z, draw(st.integers(1, n))


def test_round_robin_examples():
    p = round_robin_partition(np.ones(4), 2)
    assert p.r == 2 and all(len(b) == 2 for b in p.blocks)
    assert block_l2_sum(p) == pytest.approx(2 * math.sqrt(2))
    assert dual_gauge_exact(np.ones(4), 2) == pytest.approx(math.sqrt(8))
    assert block_l2_sum(round_robin_partition([3, 4], 1)) == pytest.approx(5)
    assert block_l2_sum(round_robin_partition([2, 1, 1], 1)) == pytest.approx(math.sqrt(6))


def test_round_robin_assignment_order():
    z = np.array([0.1, 5.0, -3.0, 2.0, 0.0])
    p = round_robin_partition(z, 2)
    # sorted positions: 1, 2, 3, 0, 4 -> blocks {1, 3, 4} and {2, 0}
    assert [b.tolist() for b in p.blocks] == [[1, 3, 4], [0, 2]]


def test_block_sum_examples():
    assert block_l2_sum(round_robin_partition(np.eye(3)[0], 1)) == 1
    assert block_l2_sum(round_robin_partition(np.zeros(6), 3)) == 0


def test_sandwich_examples():
    rep = verify_sandwich(np.ones(4), 2)
    assert rep.ok and rep.ratio == pytest.approx(1)
    rep = verify_sandwich(np.eye(5)[0], 3)
    assert rep.ok and rep.block_sum == 1 and rep.exact == 1


def test_sandwich_gaussian_campaign():
    gen = np.random.default_rng(50)
    Z = gen.standard_normal((10_000, 50))
    assert all(verify_sandwich(z, 7).lower_ok for z in Z)


def test_invalid_r():
    with pytest.raises(DomainError):
        round_robin_partition([1, 2], 3)
    with pytest.raises(DomainError):
        round_robin_partition([1, 2], 0)
    with pytest.raises(DomainError):
        BlockPartition((np.array([0]), np.array([0, 1])), np.zeros(2), 2)


@given(vec_and_int_r())
def test_round_robin_is_partition(zr):
    z, r = zr
    p = round_robin_partition(z, r)
    idx = np.sort(np.concatenate(p.blocks))
    assert np.array_equal(idx, np.arange(z.size))
    assert all(len(b) > 0 for b in p.blocks)
    for b, l2 in zip(p.blocks, p.block_l2):
        assert l2**2 == pytest.approx(float(np.sum(z[b] ** 2)), rel=1e-12, abs=1e-300)


@given(vec_and_int_r())
def test_round_robin_sandwich(zr):
    z, r = zr
    assert verify_sandwich(z, r).ok


@given(vec_and_int_r(), st.integers(0, 2**32 - 1))
def test_any_partition_upper_bound(zr, seed):
    z, r = zr
    gen = np.random.default_rng(seed)
    exact = dual_gauge_exact(z, r)
    tol = 1e-9 * max(1.0, float(np.abs(z).max()) * math.sqrt(z.size))
    for _ in range(20):
        p = partition_from_blocks(z, random_partition(z.size, r, gen))
        assert p.r <= r
        assert verify_sandwich(z, r, p).upper_ok
    assert np.all(random_block_sums(z, r, 200, gen) <= exact + tol)


def test_vectorized_block_sums_match_loop():
    gen = np.random.default_rng(3)
    z = gen.standard_normal(11)
    fast = random_block_sums(z, 4, 5, np.random.default_rng(9))
    labels = np.random.default_rng(9).integers(0, 4, size=(5, 11))
    slow = [sum(np.linalg.norm(z[row == j]) for j in range(4)) for row in labels]
    assert np.allclose(fast, slow, rtol=1e-14)


def test_sparse_profile_lower_bound():
    # k << r nonzeros: every nonzero gets its own block, ratio is exactly 1
    z = np.zeros(40)
    z[[3, 17, 29]] = [5.0, -2.0, 0.5]
    rep = verify_sandwich(z, 10)
    assert rep.ok and rep.ratio == pytest.approx(1)
