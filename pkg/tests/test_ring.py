import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from polymul.ring import MAX_MODULUS, OpCounter, Ring, ring_op


@pytest.mark.parametrize("m", [1, 0, -5, MAX_MODULUS + 1])
def test_modulus_out_of_range(m):
    with pytest.raises(ValueError):
        Ring(m)


def test_scalar_ops_count_once():
    r, c = Ring(97), OpCounter()
    assert r.add(90, 10, c) == 3
    assert r.sub(3, 10, c) == 90
    assert r.neg(1, c) == 96
    assert r.mul(50, 2, c) == 3
    assert (c.muls, c.adds) == (1, 3)
    assert c.total() == 4


def test_ring_op_dispatch():
    r, c = Ring(7), OpCounter()
    assert ring_op("mul", 3, 5, c, r) == 1
    assert ring_op("neg", 3, None, c, r) == 4
    with pytest.raises(ValueError):
        ring_op("div", 1, 1, c, r)


def test_vector_counts():
    r, c = Ring(11), OpCounter()
    dst = r.array([1, 2, 3])
    r.add_into(dst, r.array([10, 10, 10]), c)
    assert dst.tolist() == [0, 1, 2] and c.snapshot() == (0, 3)
    r.axpy(dst, 2, r.array([1, 1, 1]), c)
    assert dst.tolist() == [2, 3, 4] and c.snapshot() == (3, 6)
    r.scale_into(dst, 3, dst.copy(), c)
    assert dst.tolist() == [6, 9, 1] and c.snapshot() == (6, 6)


@settings(max_examples=60, deadline=None)
@given(st.integers(2, MAX_MODULUS), st.integers(0, 2**32), st.integers(1, 40), st.integers(1, 40))
def test_convolve_exact(m, seed, la, lb):
    r = Ring(m)
    rng = np.random.default_rng(seed)
    a, b = r.random(rng, la), r.random(rng, lb)
    want = [0] * (la + lb - 1)
    for i, x in enumerate(a.tolist()):
        for j, y in enumerate(b.tolist()):
            want[i + j] = (want[i + j] + x * y) % m
    assert r.convolve(a, b).tolist() == want


def test_largest_modulus_products_fit():
    r, c = Ring(MAX_MODULUS), OpCounter()
    x = MAX_MODULUS - 1
    assert r.mul(x, x, c) == 1
