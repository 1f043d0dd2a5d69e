"""Pure-Python scalar kernels. Reference implementation and fallback for the compiled core."""

import numpy as np

BACKEND = "python"


def qpoch(a, q, n):
    """Finite q-Pochhammer symbol (a; q)_n for integer n >= 0."""
    out = 1.0 + 0j
    qk = 1.0 + 0j
    for _ in range(n):
        out *= 1.0 - a * qk
        qk *= q
    return out


def qpoch_inf(a, q, eps, max_terms):
    """(a; q)_inf truncated once |a q^k| < eps. Caller guarantees |q| < 1."""
    out = 1.0 + 0j
    t = complex(a)
    for _ in range(max_terms):
        if abs(t) < eps:
            return out
        out *= 1.0 - t
        t *= q
    return out


def qsum_divfree(upper, lower, q, z, n):
    """Sum_k prod_i (u_i;q)_k / (q;q)_k z^k prod_j (v_j q^k; q)_{n-k}.

    This equals prod_j (v_j;q)_n times the terminating basic series with the
    given upper and lower parameters, but never divides by a lower factor.
    """
    # suffix[k] = prod_j prod_{i=k}^{n-1} (1 - v_j q^i)
    suffix = [1.0 + 0j] * (n + 1)
    qpow = [q**i for i in range(n + 1)]
    for i in range(n - 1, -1, -1):
        f = 1.0 + 0j
        for v in lower:
            f *= 1.0 - v * qpow[i]
        suffix[i] = suffix[i + 1] * f
    total = 0j
    head = 1.0 + 0j
    for k in range(n + 1):
        total += head * suffix[k]
        if k == n:
            break
        r = z / (1.0 - qpow[k + 1])
        for u in upper:
            r *= 1.0 - u * qpow[k]
        head *= r
        if head == 0:
            break
    return total


def sum_divfree(upper, lower, z, n):
    """Sum_k prod_i (u_i)_k / k! z^k prod_j (v_j + k)_{n-k}, the q = 1 analogue."""
    suffix = [1.0 + 0j] * (n + 1)
    for i in range(n - 1, -1, -1):
        f = 1.0 + 0j
        for v in lower:
            f *= v + i
        suffix[i] = suffix[i + 1] * f
    total = 0j
    head = 1.0 + 0j
    for k in range(n + 1):
        total += head * suffix[k]
        if k == n:
            break
        r = z / (k + 1.0)
        for u in upper:
            r *= u + k
        head *= r
        if head == 0:
            break
    return total


def aw_poly(n, z, a, b, c, d, q):
    """Askey-Wilson polynomial p_n((z + 1/z)/2; a, b, c, d | q), division-free form."""
    upper = (q ** (-n), a * b * c * d * q ** (n - 1), a * z, a / z)
    return qsum_divfree(upper, (a * b, a * c, a * d), q, q, n) / a**n


def aw_poly_array(n, z, a, b, c, d, q):
    """Vectorised aw_poly over an array of z."""
    z = np.asarray(z, dtype=complex)
    qpow = q ** np.arange(n + 1)
    lower = (a * b, a * c, a * d)
    suffix = np.ones(n + 1, dtype=complex)
    for i in range(n - 1, -1, -1):
        f = 1.0 + 0j
        for v in lower:
            f *= 1.0 - v * qpow[i]
        suffix[i] = suffix[i + 1] * f
    const_up = (q ** (-n), a * b * c * d * q ** (n - 1))
    total = np.zeros_like(z)
    head = np.ones_like(z)
    az, a_z = a * z, a / z
    for k in range(n + 1):
        total += head * suffix[k]
        if k == n:
            break
        r = q / (1.0 - qpow[k + 1])
        for u in const_up:
            r *= 1.0 - u * qpow[k]
        head = head * r * (1.0 - az * qpow[k]) * (1.0 - a_z * qpow[k])
    return total / a**n


def qpoch_inf_array(a, q, eps, max_terms):
    """Elementwise (a; q)_inf for an array a."""
    a = np.asarray(a, dtype=complex)
    out = np.ones_like(a)
    t = a.copy()
    for _ in range(max_terms):
        if np.max(np.abs(t), initial=0.0) < eps:
            break
        out *= 1.0 - t
        t *= q
    return out
