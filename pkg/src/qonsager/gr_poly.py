"""Multivariate Askey-Wilson polynomials of Gasper-Rahman type and their duality.

Conventions
-----------
``alpha`` is a complex vector ``(alpha_0, ..., alpha_{N+2})`` of length N + 3.
``z`` is a complex vector ``(z_1, ..., z_N)`` and the physical variables are
``x_j = (z_j + 1/z_j) / 2``. Indices in docstrings are 1-based like the maths,
arrays are 0-based: ``z[j - 1]`` is z_j while ``alpha[j]`` is alpha_j.
Each factor is a one-variable Askey-Wilson polynomial in base q^2.
"""

from __future__ import annotations

import itertools
from typing import Iterable, Sequence

import numpy as np

from . import kernels
from .errors import (DegenerateDenominator, InvalidMultiIndex, InvalidParameters,
                     NotOnDiscreteSupport)
from .qcore import (DEFAULT_POLICY, NumericPolicy, nearest_integer_exponent,
                    phi43_terminating, qpochhammer, qpochhammer_multi, validate_q)


def as_alpha(alpha, N: int | None = None) -> np.ndarray:
    a = np.asarray(alpha, dtype=complex).reshape(-1)
    if a.size < 4:
        raise InvalidParameters("alpha needs at least four entries (N >= 1)")
    if N is not None and a.size != N + 3:
        raise InvalidParameters(f"alpha must have length N + 3 = {N + 3}, got {a.size}")
    if np.any(a == 0) or not np.all(np.isfinite(a)):
        raise InvalidParameters("alpha entries must be finite and nonzero")
    return a


def as_multi_index(n) -> tuple[int, ...]:
    out = []
    for v in n:
        if isinstance(v, (float, np.floating)) and float(v).is_integer():
            v = int(v)
        if not isinstance(v, (int, np.integer)) or v < 0:
            raise InvalidMultiIndex(f"multi-index entries must be non-negative integers, got {n}")
        out.append(int(v))
    return tuple(out)


def partial_sums(n: Sequence[int]) -> list[int]:
    """[N_0, N_1, ..., N_N] with N_0 = 0 and N_k = n_1 + ... + n_k."""
    return [0] + list(itertools.accumulate(n))


def multi_indices(N: int, max_total: int) -> list[tuple[int, ...]]:
    """All n in N^N with |n| <= max_total, graded then lexicographic."""
    out = []
    for total in range(max_total + 1):
        level = [m for m in itertools.product(range(total + 1), repeat=N) if sum(m) == total]
        out.extend(sorted(level))
    return out


def box_indices(limits: Sequence[int]) -> list[tuple[int, ...]]:
    """All n with 0 <= n_k <= limits[k], graded then lexicographic."""
    pts = list(itertools.product(*(range(m + 1) for m in limits)))
    return sorted(pts, key=lambda m: (sum(m), m))


def askey_wilson_p(n: int, z, a, b, c, d, q) -> complex:
    """p_n(x; a, b, c, d | q) with x = (z + 1/z)/2.

    Evaluated as a^{-n} sum_k (q^{-n}, abcd q^{n-1}, az, a/z; q)_k q^k / (q; q)_k
    times (ab q^k, ac q^k, ad q^k; q)_{n-k}, which never divides by (ab, ac, ad; q)_k.
    """
    return kernels.aw_poly(int(n), complex(z), complex(a), complex(b), complex(c),
                           complex(d), complex(q))


def askey_wilson_p_series(n: int, z, a, b, c, d, q, policy: NumericPolicy = DEFAULT_POLICY) -> complex:
    """Same polynomial via the textbook 4phi3 form; fails on degenerate lower parameters."""
    q = complex(q)
    upper = (q ** (-n), a * b * c * d * q ** (n - 1), a * z, a / z)
    lower = (a * b, a * c, a * d)
    pre = qpochhammer_multi(lower, q, n, policy) / complex(a) ** n
    return pre * phi43_terminating(upper, lower, q, q, n, policy)


def factor_parameters(j: int, n: Sequence[int], z, alpha, q):
    """Askey-Wilson parameters (a, b, c, d) of the j-th factor (1-based) in base q^2."""
    N = len(n)
    Nk = partial_sums(n)
    q2 = complex(q) ** 2
    zn = complex(alpha[N + 2]) if j == N else complex(z[j])
    r = alpha[j + 1] / alpha[j]
    shift = q2 ** Nk[j - 1]
    return (alpha[j] * shift, alpha[j] / alpha[0] ** 2 * shift, r * zn, r / zn)


def gasper_rahman_Q(n, z, alpha, q) -> complex:
    """Unnormalised product polynomial Q^{(N)}_n(x; alpha | q)."""
    n = as_multi_index(n)
    N = len(n)
    alpha = as_alpha(alpha, N)
    z = np.asarray(z, dtype=complex).reshape(-1)
    if z.size != N:
        raise InvalidParameters(f"z must have length {N}")
    q2 = complex(q) ** 2
    out = 1.0 + 0j
    for j in range(1, N + 1):
        a, b, c, d = factor_parameters(j, n, z, alpha, q)
        out *= kernels.aw_poly(n[j - 1], complex(z[j - 1]), a, b, c, d, q2)
        if out == 0:
            break
    return out


def qhat_normalization(n, alpha, q, policy: NumericPolicy = DEFAULT_POLICY) -> complex:
    """Factor turning Q into the normalised polynomial Q-hat."""
    n = as_multi_index(n)
    N = len(n)
    alpha = as_alpha(alpha, N)
    q2 = complex(q) ** 2
    total = sum(n)
    top = alpha[N + 1] * alpha[N + 2]
    den = qpochhammer(top, q2, total, policy) * qpochhammer(top / alpha[0] ** 2, q2, total, policy)
    for j in range(1, N + 1):
        den *= alpha[j] ** n[j - 1] * qpochhammer(alpha[j + 1] ** 2 / alpha[j] ** 2, q2, n[j - 1], policy)
    if abs(den) < policy.denominator_tol:
        raise DegenerateDenominator(f"normalisation of Q-hat vanishes at n = {n}")
    return top**total / den


def normalized_Qhat(n, z, alpha, q, policy: NumericPolicy = DEFAULT_POLICY) -> complex:
    """Q-hat_n(x; alpha | q), the duality-normalised polynomial with Q-hat_0 = 1."""
    return qhat_normalization(n, alpha, q, policy) * gasper_rahman_Q(n, z, alpha, q)


def Qhat_tensor_grid(n, nodes: Sequence[np.ndarray], alpha, q, policy: NumericPolicy = DEFAULT_POLICY) -> np.ndarray:
    """Q-hat_n on the tensor grid nodes[0] x ... x nodes[N-1] of z values.

    Factor j depends only on (z_j, z_{j+1}), so each is tabulated on a 2-D slice.
    """
    n = as_multi_index(n)
    N = len(n)
    alpha = as_alpha(alpha, N)
    q2 = complex(q) ** 2
    Nk = partial_sums(n)
    out = np.ones(tuple(len(v) for v in nodes), dtype=complex)
    for j in range(1, N + 1):
        zj = np.asarray(nodes[j - 1], dtype=complex)
        shift = q2 ** Nk[j - 1]
        a = alpha[j] * shift
        b = alpha[j] / alpha[0] ** 2 * shift
        r = alpha[j + 1] / alpha[j]
        if j == N:
            zn = complex(alpha[N + 2])
            table = kernels.aw_poly_array(n[j - 1], zj, a, b, r * zn, r / zn, q2)
            shape = [1] * N
            shape[j - 1] = len(zj)
            out *= table.reshape(shape)
        else:
            znext = np.asarray(nodes[j], dtype=complex)
            table = np.empty((len(zj), len(znext)), dtype=complex)
            for i, zn in enumerate(znext):
                table[:, i] = kernels.aw_poly_array(n[j - 1], zj, a, b, r * zn, r / zn, q2)
            shape = [1] * N
            shape[j - 1] = len(zj)
            shape[j] = len(znext)
            out *= table.reshape(shape)
    return out * qhat_normalization(n, alpha, q, policy)


def involution_alpha(alpha, q) -> np.ndarray:
    """Parameter part of the duality map.

    alpha~_0 = alpha_0, alpha~_j = alpha_0 alpha_{N+1} alpha_{N+2} q / alpha_{N+2-j}
    for j = 1..N+1 and alpha~_{N+2} = alpha_1 / (alpha_0 q).
    """
    alpha = as_alpha(alpha)
    N = alpha.size - 3
    q = complex(q)
    out = np.empty_like(alpha)
    out[0] = alpha[0]
    c = alpha[0] * alpha[N + 1] * alpha[N + 2] * q
    for j in range(1, N + 2):
        out[j] = c / alpha[N + 2 - j]
    out[N + 2] = alpha[1] / (alpha[0] * q)
    return out


def involution_f(qn2, z, alpha, q):
    """Duality map on (q^{2n}, z, alpha), with n passed through its exponentials.

    ``qn2[j-1]`` holds q^{2 n_j}; this allows non-integer n. Returns the images
    (q^{2 n~}, z~, alpha~). Applying the map twice gives back the input.
    """
    alpha = as_alpha(alpha)
    N = alpha.size - 3
    q = complex(q)
    qn2 = np.asarray(qn2, dtype=complex).reshape(-1)
    z = np.asarray(z, dtype=complex).reshape(-1)
    if qn2.size != N or z.size != N:
        raise InvalidParameters("qn2 and z must have length N")
    cum = np.concatenate([[1.0 + 0j], np.cumprod(qn2)])  # q^{2 N_k}
    z_t = np.array([alpha[N + 2 - j] / (alpha[0] * q) * cum[N + 1 - j] for j in range(1, N + 1)])
    zz = np.concatenate([[alpha[0]], z, [alpha[N + 2]]])
    qn2_t = np.array([alpha[N + 1 - j] * zz[N + 1 - j] / (alpha[N + 2 - j] * zz[N + 2 - j])
                      for j in range(1, N + 1)])
    return qn2_t, z_t, involution_alpha(alpha, q)


def discrete_support_point(ntilde, alpha, q) -> np.ndarray:
    """z on the discrete support labelled by n~: z_k = alpha_{N+1} alpha_{N+2} / alpha_k q^{2 N~_{N+1-k}}."""
    ntilde = as_multi_index(ntilde)
    N = len(ntilde)
    alpha = as_alpha(alpha, N)
    q2 = complex(q) ** 2
    Nk = partial_sums(ntilde)
    top = alpha[N + 1] * alpha[N + 2]
    return np.array([top / alpha[k] * q2 ** Nk[N + 1 - k] for k in range(1, N + 1)])


def restricted_Qtilde(n, ntilde, alpha, q, policy: NumericPolicy = DEFAULT_POLICY) -> complex:
    """Q-hat_n evaluated on the discrete support point labelled by n~."""
    return normalized_Qhat(n, discrete_support_point(ntilde, alpha, q), alpha, q, policy)


def recover_index(qn2, q, policy: NumericPolicy = DEFAULT_POLICY) -> tuple[int, ...]:
    """Read integers n_j back from values q^{2 n_j}; raise if any is not a natural power."""
    out = []
    for v in np.asarray(qn2, dtype=complex).reshape(-1):
        m = nearest_integer_exponent(v, complex(q) ** 2, policy)
        if m is None or m < 0:
            raise NotOnDiscreteSupport(f"{v} is not q^(2m) for a natural m")
        out.append(m)
    return tuple(out)


def dual_Qhat_at(n, z, alpha, q, policy: NumericPolicy = DEFAULT_POLICY) -> complex:
    """Right-hand side of the duality identity: Q-hat_{n~}(x~; alpha~) at a discrete-support z."""
    n = as_multi_index(n)
    alpha = as_alpha(alpha, len(n))
    q2 = complex(q) ** 2
    qn2 = np.array([q2**m for m in n])
    qn2_t, z_t, alpha_t = involution_f(qn2, z, alpha, q)
    return normalized_Qhat(recover_index(qn2_t, q, policy), z_t, alpha_t, q, policy)


def random_generic_alpha(N: int, rng: np.random.Generator, spread: float = 0.35) -> np.ndarray:
    """Random complex parameters of modulus close to 1, away from degenerate loci."""
    mod = np.exp(rng.uniform(-spread, spread, N + 3))
    phase = rng.uniform(-np.pi, np.pi, N + 3)
    return mod * np.exp(1j * phase)


def random_point(N: int, rng: np.random.Generator, spread: float = 0.4) -> np.ndarray:
    mod = np.exp(rng.uniform(-spread, spread, N))
    phase = rng.uniform(-np.pi, np.pi, N)
    return mod * np.exp(1j * phase)


def iter_factors(n, z, alpha, q) -> Iterable[tuple[int, tuple]]:
    """Yield (degree, (a, b, c, d)) for each factor, mostly for debugging and tests."""
    n = as_multi_index(n)
    for j in range(1, len(n) + 1):
        yield n[j - 1], factor_parameters(j, n, z, alpha, q)
