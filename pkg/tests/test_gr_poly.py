from itertools import permutations
from math import comb

import numpy as np
import pytest

from qonsager.errors import InvalidMultiIndex, InvalidParameters, NotOnDiscreteSupport
from qonsager.gr_poly import (Qhat_tensor_grid, askey_wilson_p, askey_wilson_p_series, box_indices,
                              discrete_support_point, involution_alpha, involution_f, multi_indices,
                              normalized_Qhat, random_generic_alpha, random_point, recover_index)

AW_PARAMS = (0.5, 0.3 + 0.1j, -0.4, 0.6j)


def qp(a, q, n):
    return np.prod([1 - a * q**k for k in range(n)]) if n else 1.0


def aw_by_recurrence(nmax, z, a, b, c, d, q):
    """p_n via the standard three-term recurrence for the 4phi3 form, rescaled to a^-n (ab, ac, ad)_n."""
    x = (z + 1 / z) / 2
    abcd = a * b * c * d
    ptil = [1.0 + 0j]
    prev = 0.0
    for n in range(nmax):
        A = ((1 - a * b * q**n) * (1 - a * c * q**n) * (1 - a * d * q**n) * (1 - abcd * q ** (n - 1))
             / (a * (1 - abcd * q ** (2 * n - 1)) * (1 - abcd * q ** (2 * n))))
        C = (a * (1 - q**n) * (1 - b * c * q ** (n - 1)) * (1 - b * d * q ** (n - 1)) * (1 - c * d * q ** (n - 1))
             / ((1 - abcd * q ** (2 * n - 2)) * (1 - abcd * q ** (2 * n - 1))))
        nxt = (2 * x * ptil[n] - (a + 1 / a - A - C) * ptil[n] - C * prev) / A
        prev = ptil[n]
        ptil.append(nxt)
    return [ptil[n] * qp(a * b, q, n) * qp(a * c, q, n) * qp(a * d, q, n) / a**n for n in range(nmax + 1)]


# the terminating sum cancels more as q shrinks; tolerances track that
@pytest.mark.parametrize("q,tol", [(0.5, 1e-8), (0.8, 1e-10), (0.7 + 0.2j, 1e-10)])
def test_askey_wilson_matches_recurrence(q, tol, rng):
    for z in random_point(5, rng):
        ref = aw_by_recurrence(6, z, *AW_PARAMS, q)
        for n, r in enumerate(ref):
            got = askey_wilson_p(n, z, *AW_PARAMS, q)
            assert abs(got - r) < tol * max(1, abs(r))
            assert abs(askey_wilson_p_series(n, z, *AW_PARAMS, q) - r) < tol * max(1, abs(r))


def test_askey_wilson_symmetric_in_parameters():
    z, q = 0.8 + 0.4j, 0.75
    ref = askey_wilson_p(4, z, *AW_PARAMS, q)
    for perm in permutations(AW_PARAMS):
        assert abs(askey_wilson_p(4, z, *perm, q) - ref) < 1e-11 * abs(ref)


def test_askey_wilson_depends_on_x_only():
    z = 1.3 * np.exp(0.4j)
    assert abs(askey_wilson_p(5, z, *AW_PARAMS, 0.7) - askey_wilson_p(5, 1 / z, *AW_PARAMS, 0.7)) < 1e-11


def test_degree_zero_is_one(rng):
    for N in (1, 2, 3):
        alpha = random_generic_alpha(N, rng)
        assert abs(normalized_Qhat((0,) * N, random_point(N, rng), alpha, 0.7) - 1) < 1e-15


def test_invariant_under_each_inversion(rng):
    alpha = random_generic_alpha(3, rng)
    z = random_point(3, rng)
    ref = normalized_Qhat((2, 1, 2), z, alpha, 0.8)
    for j in range(3):
        w = z.copy()
        w[j] = 1 / w[j]
        assert abs(normalized_Qhat((2, 1, 2), w, alpha, 0.8) - ref) < 1e-10 * abs(ref)


def test_tensor_grid_matches_pointwise(rng):
    alpha = random_generic_alpha(2, rng)
    nodes = [random_point(4, rng), random_point(3, rng)]
    grid = Qhat_tensor_grid((2, 1), nodes, alpha, 0.7)
    for i, z1 in enumerate(nodes[0]):
        for j, z2 in enumerate(nodes[1]):
            ref = normalized_Qhat((2, 1), [z1, z2], alpha, 0.7)
            assert abs(grid[i, j] - ref) < 1e-12 * max(1, abs(ref))


def test_involution_is_an_involution(rng):
    q = 0.7
    for N in (1, 2, 3):
        alpha = random_generic_alpha(N, rng)
        assert np.abs(involution_alpha(involution_alpha(alpha, q), q) - alpha).max() < 1e-13
        qn2, z = np.exp(rng.normal(size=N)), random_point(N, rng)
        back = involution_f(*involution_f(qn2, z, alpha, q), q)
        assert np.abs(back[0] - qn2).max() < 1e-12 and np.abs(back[1] - z).max() < 1e-12


def test_support_point_reads_back_dual_index(rng):
    q = 0.7
    alpha = random_generic_alpha(2, rng)
    for nt in [(0, 0), (1, 2), (3, 0)]:
        z = discrete_support_point(nt, alpha, q)
        qn2_t, _, _ = involution_f(np.ones(2), z, alpha, q)
        assert recover_index(qn2_t, q) == nt


def test_recover_index_rejects_non_powers():
    with pytest.raises(NotOnDiscreteSupport):
        recover_index([0.3], 0.7)
    assert recover_index([0.49**2, 1.0], 0.7) == (2, 0)


@pytest.mark.parametrize("N,m", [(1, 4), (2, 3), (3, 4)])
def test_index_enumeration_counts(N, m):
    idx = multi_indices(N, m)
    assert len(idx) == comb(N + m, N) and len(set(idx)) == len(idx)
    assert all(sum(a) <= sum(b) for a, b in zip(idx, idx[1:]))
    assert len(box_indices((2, 1))) == 6


def test_bad_inputs_raise(rng):
    alpha = random_generic_alpha(2, rng)
    with pytest.raises(InvalidMultiIndex):
        normalized_Qhat((-1, 0), [1.1, 0.9], alpha, 0.7)
    with pytest.raises(InvalidParameters):
        normalized_Qhat((1, 0), [1.1], alpha, 0.7)
