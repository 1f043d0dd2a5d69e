import cmath

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.special import poch

from qonsager.errors import DegenerateDenominator, InvalidQ, NonConvergent
from qonsager.qcore import (hypergeometric_terminating, phi_terminating, pochhammer, qpochhammer,
                            qpochhammer_inf_array, qpochhammer_multi, qsum_divfree, sum_divfree,
                            validate_q)


def direct_qpoch(a, q, n):
    out = 1.0 + 0j
    for k in range(n):
        out *= 1 - a * q**k
    return out


@pytest.mark.parametrize("a,q,n", [(0.3, 0.7, 5), (0.2 + 0.4j, 0.9, 8), (-1.5, 0.5 - 0.2j, 3), (2.0, 0.7, 0)])
def test_qpochhammer_matches_direct_product(a, q, n):
    assert abs(qpochhammer(a, q, n) - direct_qpoch(a, q, n)) < 1e-13 * max(1, abs(direct_qpoch(a, q, n)))


def test_qpochhammer_negative_index():
    a, q = 0.3 + 0.1j, 0.6
    for n in range(1, 5):
        expected = 1 / direct_qpoch(a * q**-n, q, n)
        assert abs(qpochhammer(a, q, -n) - expected) < 1e-12 * abs(expected)


def test_qpochhammer_infinite_product_converges():
    a, q = 0.4 - 0.2j, 0.5
    assert abs(qpochhammer(a, q, np.inf) - direct_qpoch(a, q, 200)) < 1e-14


def test_infinite_product_array_matches_scalar():
    q = 0.7 + 0.1j
    a = np.array([0.1, 0.3j, -0.5 + 0.2j])
    arr = qpochhammer_inf_array(a, q)
    for ai, v in zip(a, arr):
        assert abs(v - direct_qpoch(ai, q, 400)) < 1e-12


def test_infinite_product_needs_small_q():
    with pytest.raises(NonConvergent):
        qpochhammer(0.3, 1.2, np.inf)


def test_multi_product():
    a, b, q = 0.3, -0.2j, 0.8
    assert abs(qpochhammer_multi([a, b], q, 4) - direct_qpoch(a, q, 4) * direct_qpoch(b, q, 4)) < 1e-14


@settings(max_examples=60, deadline=None)
@given(m=st.integers(0, 6), n=st.integers(0, 6),
       a=st.complex_numbers(max_magnitude=2, allow_nan=False, allow_infinity=False),
       q=st.floats(0.2, 0.95))
def test_qpochhammer_splits(m, n, a, q):
    lhs = qpochhammer(a, q, m + n)
    rhs = qpochhammer(a, q, m) * qpochhammer(a * q**m, q, n)
    assert abs(lhs - rhs) <= 1e-12 * max(1.0, abs(lhs), abs(qpochhammer(a, q, m)) * abs(qpochhammer(a * q**m, q, n)))


@pytest.mark.parametrize("q", [0.0, 1.0, -1.0, cmath.exp(2j * cmath.pi / 5)])
def test_validate_q_rejects(q):
    with pytest.raises(InvalidQ):
        validate_q(q)


def test_validate_q_allows_one_when_asked():
    assert validate_q(1.0, allow_one=True) == 1.0


@pytest.mark.parametrize("n", [0, 1, 3, 6])
def test_q_chu_vandermonde(n):
    # sum_k (q^-n, b; q)_k q^k / ((c, q; q)_k) = b^n (c/b; q)_n / (c; q)_n
    q, b, c = 0.7, 0.3 + 0.2j, -0.45
    lhs = phi_terminating([q**-n, b], [c], q, q, n)
    rhs = b**n * direct_qpoch(c / b, q, n) / direct_qpoch(c, q, n)
    assert abs(lhs - rhs) < 1e-11 * max(1, abs(rhs))
    lhs_df = qsum_divfree([q**-n, b], [c], q, q, n)
    assert abs(lhs_df - b**n * direct_qpoch(c / b, q, n)) < 1e-11 * max(1, abs(rhs))


@pytest.mark.parametrize("n", [0, 2, 5])
def test_chu_vandermonde(n):
    b, c = 1.7, 3.2
    rhs = poch(c - b, n) / poch(c, n)
    assert abs(hypergeometric_terminating([-n, b], [c], 1.0, n) - rhs) < 1e-13
    assert abs(sum_divfree([-n, b], [c], 1.0, n) - poch(c - b, n)) < 1e-11 * max(1, poch(c - b, n))


def test_pochhammer_matches_scipy():
    for y in (0.5, 2.0, -3.5):
        for n in range(6):
            assert abs(pochhammer(y, n) - poch(y, n)) < 1e-12 * max(1, abs(poch(y, n)))


def test_terminating_series_flags_vanishing_denominator():
    q = 0.5
    with pytest.raises(DegenerateDenominator):
        phi_terminating([q**-3, 0.2], [q**-1], q, q, 3)
