from math import comb, factorial

import numpy as np
import pytest
from scipy.special import poch

from qonsager import classical_q1 as cq
from qonsager.errors import InvalidParameters
from qonsager.onsager_modules import classify_spectrum


def test_one_variable_krawtchouk_orthogonality():
    # K_n(x; p, M) = 2F1(-n, -x; -M; 1/p) against the binomial weight
    p, M = 0.3, 7
    K = np.array([[cq.krawtchouk_k(n, x, p, M) / poch(-M, n) for x in range(M + 1)] for n in range(M + 1)])
    w = np.array([comb(M, x) * p**x * (1 - p) ** (M - x) for x in range(M + 1)])
    G = (K * w) @ K.T
    norms = [(-1) ** n * factorial(n) / poch(-M, n) * ((1 - p) / p) ** n for n in range(M + 1)]
    assert np.abs(G - np.diag(norms)).max() < 1e-11 * max(norms)


@pytest.mark.parametrize("alpha,M", [((0.2,), 6), ((0.15, 0.2), 6), ((0.1, 0.15, 0.2), 4)])
def test_multivariable_orthogonality(alpha, M):
    kp = cq.KrawtchoukParams(alpha, M)
    grid = cq.simplex_grid(kp.N, M)
    w = np.array([cq.krawtchouk_weight(x, kp) for x in grid])
    assert (w > 0).all()
    K = np.array([[cq.krawtchouk_Khat(n, x, kp) for x in grid] for n in grid])
    G = (K * w) @ K.T
    d = np.abs(np.diag(G))
    assert np.abs(G - np.diag(np.diag(G))).max() < 1e-10 * d.max()
    assert d.min() > 0


def test_bispectral_and_duality(rng):
    kp = cq.KrawtchoukParams((0.1, 0.2), 6)
    for n in cq.simplex_grid(2, 3):
        for x in [(0, 0), (2, 1), (4, 2)]:
            K = cq.krawtchouk_Khat(n, x, kp)
            for l in (1, 2):
                lhs = cq.apply_dIstar(l, lambda y: cq.krawtchouk_Khat(n, y, kp), x, kp)
                assert abs(lhs - cq.dIstar_eigenvalue(l, n) * K) < 1e-10 * max(1, abs(lhs))
                lhs = cq.apply_dI_dual(l, lambda m: cq.krawtchouk_Khat(m, x, kp) if min(m) >= 0 else 0.0, n, kp)
                assert abs(lhs - cq.dI_dual_eigenvalue(l, x) * K) < 1e-10 * max(1, abs(lhs))
            dual = cq.krawtchouk_Khat(tuple(reversed(x)), tuple(reversed(n)), cq.dual_params(kp))
            assert abs(K - dual) < 1e-12 * max(1, abs(K))


def test_eigenvalues_are_partial_sums():
    assert cq.dIstar_eigenvalue(1, (1, 2, 3)) == 3 and cq.dIstar_eigenvalue(2, (1, 2, 3)) == 5
    assert cq.dI_dual_eigenvalue(1, (1, 2, 3)) == 1 and cq.dI_dual_eigenvalue(2, (1, 2, 3)) == 3
    with pytest.raises(InvalidParameters):
        cq.dIstar_stencil(3, (0, 0), cq.KrawtchoukParams((0.1, 0.2), 4))


@pytest.mark.parametrize("N,J", [(1, 4), (2, 3), (3, 2)])
def test_dolan_grady_module(N, J):
    for l in range(1, N + 1):
        m = cq.build_onsager_module_q1(J, tuple(0.1 + 0.05 * i for i in range(N)), l)
        assert len(m.grid) == comb(N + J, N)
        assert max(m.dg_residuals) < 1e-9 and m.leakage < 1e-12
        assert np.abs(m.W1_spectrum - m.expected_spectrum).max() < 1e-9


def test_q1_spectrum_is_arithmetic():
    m = cq.build_onsager_module_q1(4, (0.1, 0.2))
    distinct = np.unique(np.round(m.W1_spectrum, 8))
    fit = classify_spectrum(distinct, 1.0)
    a, b, c = fit.coefficients
    assert fit.case == "II" and fit.degenerate
    assert max(abs(a), abs(b - 1), abs(c)) < 1e-8


def test_scalar_dolan_grady_identity():
    for v in (0.0, 1.5, -3.0):
        lhs, rhs = cq.dg_scalar_identity(v)
        assert abs(lhs - rhs) < 1e-12 * max(1, abs(lhs))


@pytest.mark.parametrize("l", [1, 2])
def test_racah_orthogonality_and_tridiagonal_relations(l):
    rp = cq.RacahParams((0.4, 1.1, 2.3, 3.7), 5)
    r = cq.racah_gram_and_td_check(rp, l)
    assert r.weight_positive
    assert r.gram_offdiag < 1e-10 and max(r.td_residuals) < 1e-10 and r.blocktri_violation < 1e-10
    assert r.parameters["beta"] == 2.0 and r.parameters["gamma"] == r.parameters["gamma_star"] == -2.0


def test_racah_one_variable_orthogonality():
    # univariate Racah on x = 0..M via the library weight for N = 1
    rp = cq.RacahParams((0.4, 1.3, 2.9), 6)
    xs = cq.ordered_simplex(1, 6)
    w = np.array([cq.racah_weight(x, rp) for x in xs])
    R = np.array([[cq.racah_Rhat(n, x, rp) for x in xs] for n in cq.racah_degrees(1, 6)])
    G = (R * w) @ R.T
    assert np.abs(G - np.diag(np.diag(G))).max() < 1e-10 * np.abs(np.diag(G)).max()
