from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sftkit.errors import RangeError, ValidationError
from sftkit.grading import (
    OrbitGradingData,
    bott_degrees,
    degrees_pq,
    fractional_degree,
    is_bad_even_multiple,
    moduli_dim,
    moduli_dim_morse,
    parity_from_return_map,
)

CZ = st.integers(-10, 10)
N = st.integers(1, 5)


@settings(max_examples=500)
@given(CZ, N)
def test_pq_sum_rule(cz, n):
    dp, dq = degrees_pq(cz, n)
    assert dp + dq == 2 * (n - 3)
    assert dq - dp == 2 * cz


@settings(max_examples=500)
@given(st.integers(1, 6), st.integers(0, 8), st.integers(-3, 5))
def test_bott_integral_when_l_is_one(k, delta, c1):
    degs = bott_degrees(k, delta, c1, 1)
    assert all(d.denominator == 1 for d in degs)
    p, q, t, tau = degs
    assert p + q == 2 * t
    assert tau == t + 1


@settings(max_examples=200)
@given(st.integers(1, 6), st.integers(0, 8), st.integers(1, 5), st.integers(1, 5))
def test_bott_fractional(k, delta, c1, l):
    p, q, _, _ = bott_degrees(k, delta, c1, l)
    assert q - p == 4 * Fraction(c1, l) * k


@settings(max_examples=300)
@given(st.integers(-10, 10), st.integers(0, 5), st.integers(1, 15), st.integers(1, 5))
def test_odd_multiples_never_bad(cz, neg, mult, n):
    data = OrbitGradingData(cz, 1, neg, n)
    if mult % 2:
        assert not is_bad_even_multiple(data, mult)
    else:
        assert is_bad_even_multiple(data, mult) == (neg % 2 == 1)


@settings(max_examples=300)
@given(st.lists(CZ, max_size=3), st.lists(CZ, max_size=3), st.lists(CZ, max_size=3),
       st.integers(0, 3), st.integers(-3, 3), st.integers(-3, 3), N)
def test_moduli_dim_additive_under_gluing(a, b, c, g, A, B, n):
    # separating gluing along one orbit: dimensions add
    m = 1
    left = moduli_dim(a, b + [m], 0, 0, A, n)
    right = moduli_dim([m], c, g, 0, B, n)
    glued = moduli_dim(a, b + c, g, 0, A + B, n)
    assert left + right == glued


@given(CZ, N, st.sampled_from([1, -1]))
def test_parity_matches_data(cz, n, sign):
    par = parity_from_return_map(n, sign)
    assert OrbitGradingData(cz, n=n).consistent_with(sign) == (cz % 2 == par)


def test_examples():
    assert degrees_pq(3, 2) == (-4, 2)
    assert bott_degrees(1, 0, 2, 1) == (-6, 2, -2, -1)
    assert bott_degrees(2, 2, 2, 2) == (-4, 4, 0, 1)
    assert fractional_degree(5, 4, 2) == 3
    assert fractional_degree(5, 4, 3) == Fraction(11, 3)
    assert moduli_dim([3], [1], 0, 0, 0, 2) == 2
    assert moduli_dim_morse([2, 1], 0, 0, 0, 3) == 3
    assert moduli_dim([5], [], 0, 1, 0, 3) == 7
    assert parity_from_return_map(2, 1) == 1
    assert parity_from_return_map(3, 1) == 0


def test_errors():
    with pytest.raises(RangeError):
        bott_degrees(0, 0, 1, 1)
    with pytest.raises(RangeError):
        bott_degrees(1, 0, 1, 0)
    with pytest.raises(RangeError):
        fractional_degree(1, 2, 0)
    with pytest.raises(ValidationError):
        parity_from_return_map(2, 0)
    with pytest.raises(ValidationError):
        OrbitGradingData(1, multiplicity=0)
    with pytest.raises(ValidationError):
        OrbitGradingData(1, return_map_neg_eigen_mult=-1)
    with pytest.raises(RangeError):
        is_bad_even_multiple(OrbitGradingData(1), 0)
