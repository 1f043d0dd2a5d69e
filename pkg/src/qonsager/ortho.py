"""Continuous orthogonality of the product polynomials by Gauss-Chebyshev quadrature."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import ConditionViolation
from .gr_poly import Qhat_tensor_grid, as_alpha, as_multi_index, multi_indices, partial_sums, qhat_normalization
from .qcore import DEFAULT_POLICY, NumericPolicy, qpochhammer, qpochhammer_inf_array


def check_orthogonality_region(alpha, tol: float = 0.0) -> None:
    """Raise ConditionViolation unless 0 < |a_{N+1}| < ... < |a_1| < min(1, |a_0|^2) and
    |a_{N+1}|/|a_N| < |a_{N+2}| < |a_N|/|a_{N+1}|."""
    a = np.abs(as_alpha(alpha))
    N = a.size - 3
    chain = a[1: N + 2]
    if not (a[N + 1] > tol and np.all(np.diff(chain) < -tol) and a[1] < min(1.0, a[0] ** 2) - tol):
        raise ConditionViolation("moduli must decrease from alpha_1 to alpha_{N+1} below min(1, |alpha_0|^2)")
    r = a[N + 1] / a[N]
    if not (r < a[N + 2] < 1 / r):
        raise ConditionViolation("|alpha_{N+2}| must lie strictly between |alpha_{N+1}/alpha_N| and its inverse")


def chebyshev_nodes(K: int) -> tuple[np.ndarray, np.ndarray]:
    """z = exp(i theta) at the K Gauss-Chebyshev angles and the per-node weight of the normalised measure."""
    theta = (2 * np.arange(1, K + 1) - 1) * np.pi / (2 * K)
    return np.exp(1j * theta), np.full(K, 1.0 / (2 * K))


def _pair_factor(c, u, v, q2, policy):
    """prod over both signs of (c u^{+/-1} v^{+/-1}; q^2)_inf on the outer grid of u and v."""
    U, V = np.meshgrid(u, v, indexing="ij")
    out = np.ones(U.shape, dtype=complex)
    for e1 in (1, -1):
        for e2 in (1, -1):
            out *= qpochhammer_inf_array(c * U**e1 * V**e2, q2, policy)
    return out


def aw_measure_density_grid(nodes: Sequence[np.ndarray], alpha, q,
                            policy: NumericPolicy = DEFAULT_POLICY) -> np.ndarray:
    """Density of the product measure relative to prod dx_j / (2 pi sqrt(1 - x_j^2)) on a tensor grid."""
    alpha = as_alpha(alpha)
    N = alpha.size - 3
    q2 = complex(q) ** 2
    shape = tuple(len(v) for v in nodes)
    dens = np.ones(shape, dtype=complex)

    def put(arr, axes):
        sh = [1] * N
        for ax, ln in zip(axes, arr.shape):
            sh[ax] = ln
        return arr.reshape(sh)

    for j in range(N):
        z = np.asarray(nodes[j], dtype=complex)
        dens = dens * put(qpochhammer_inf_array(z**2, q2, policy) * qpochhammer_inf_array(z**-2, q2, policy), [j])
    for j in range(N + 1):
        c = alpha[j + 1] / alpha[j]
        if j == 0:
            z = np.asarray(nodes[0], dtype=complex)
            f = np.ones(len(z), dtype=complex)
            for e1 in (1, -1):
                for e2 in (1, -1):
                    f *= qpochhammer_inf_array(c * z**e1 * alpha[0] ** e2, q2, policy)
            dens = dens / put(f, [0])
        elif j == N:
            z = np.asarray(nodes[N - 1], dtype=complex)
            f = np.ones(len(z), dtype=complex)
            for e1 in (1, -1):
                for e2 in (1, -1):
                    f *= qpochhammer_inf_array(c * alpha[N + 2] ** e1 * z**e2, q2, policy)
            dens = dens / put(f, [N - 1])
        else:
            f = _pair_factor(c, np.asarray(nodes[j], dtype=complex), np.asarray(nodes[j - 1], dtype=complex), q2, policy)
            dens = dens / put(f, [j, j - 1])
    return dens


def aw_measure_density(z, alpha, q, policy: NumericPolicy = DEFAULT_POLICY) -> complex:
    """Density at a single point z (N-vector on the unit torus)."""
    z = np.atleast_1d(np.asarray(z, dtype=complex))
    return complex(aw_measure_density_grid([np.array([v]) for v in z], alpha, q, policy).reshape(-1)[0])


def norm_Hbar(n, alpha, q, policy: NumericPolicy = DEFAULT_POLICY) -> complex:
    """<Q_n, Q_n> for the unnormalised product polynomial."""
    n = as_multi_index(n)
    N = len(n)
    alpha = as_alpha(alpha, N)
    q2 = complex(q) ** 2
    a0s = alpha[0] ** 2
    Nk = partial_sums(n)
    inf = math.inf
    out = 1.0 + 0j
    for k in range(1, N + 1):
        lo, hi = Nk[k - 1], Nk[k]
        nk = n[k - 1]
        ak2, ak12 = alpha[k] ** 2, alpha[k + 1] ** 2
        num = (qpochhammer(ak12 / a0s * q2 ** (lo + hi - 1), q2, nk, policy)
               * qpochhammer(ak12 / a0s * q2 ** (2 * hi), q2, inf, policy))
        den = (qpochhammer(q2 ** (nk + 1), q2, inf, policy)
               * qpochhammer(ak2 / a0s * q2 ** (lo + hi), q2, inf, policy)
               * qpochhammer(ak12 / ak2 * q2 ** nk, q2, inf, policy))
        out *= num / den
    T = Nk[N]
    for e in (1, -1):
        t = alpha[N + 1] * alpha[N + 2] ** e * q2**T
        out /= qpochhammer(t, q2, inf, policy) * qpochhammer(t / a0s, q2, inf, policy)
    return out


def norm_Qhat(n, alpha, q, policy: NumericPolicy = DEFAULT_POLICY) -> complex:
    """<Q-hat_n, Q-hat_n>."""
    return norm_Hbar(n, alpha, q, policy) * qhat_normalization(n, alpha, q, policy) ** 2


def inner_product_quadrature(f_grid: np.ndarray, g_grid: np.ndarray, density: np.ndarray, weights) -> complex:
    """Sum of f g density over the tensor grid with the per-axis weights (bilinear, no conjugation)."""
    w = np.ones(1)
    for wk in weights:
        w = np.multiply.outer(w, wk)
    w = w.reshape(density.shape)
    return complex(np.sum(f_grid * g_grid * density * w))


@dataclass
class GramReport:
    N: int
    nodes: int
    indices: list
    gram: np.ndarray
    expected: np.ndarray
    max_offdiag: float
    max_diag_deviation: float


def quadrature_gram(alpha, q, max_total: int, nodes: int,
                    policy: NumericPolicy = DEFAULT_POLICY, check: bool = True) -> GramReport:
    """Gram matrix of Q-hat over all degrees with total <= max_total, against the closed-form norms."""
    alpha = as_alpha(alpha)
    N = alpha.size - 3
    if check:
        check_orthogonality_region(alpha)
    z, w = chebyshev_nodes(nodes)
    grid = [z] * N
    dens = aw_measure_density_grid(grid, alpha, q, policy)
    idx = multi_indices(N, max_total)
    vals = [Qhat_tensor_grid(n, grid, alpha, q, policy) for n in idx]
    G = np.empty((len(idx), len(idx)), dtype=complex)
    for i in range(len(idx)):
        for j in range(i, len(idx)):
            G[i, j] = G[j, i] = inner_product_quadrature(vals[i], vals[j], dens, [w] * N)
    expected = np.array([norm_Qhat(n, alpha, q, policy) for n in idx])
    d = np.sqrt(np.abs(np.diag(G)))
    off = np.abs(G) / np.outer(d, d)
    np.fill_diagonal(off, 0.0)
    dev = np.abs(np.diag(G) - expected) / np.abs(expected)
    return GramReport(N, nodes, idx, G, expected, float(off.max()) if off.size else 0.0, float(dev.max()))
