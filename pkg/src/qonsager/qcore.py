"""q-Pochhammer symbols, terminating hypergeometric sums and the numeric policy."""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from . import kernels
from .errors import DegenerateDenominator, InvalidQ, NonConvergent


@dataclass(frozen=True)
class NumericPolicy:
    """Tolerances used by every verifier.

    ``root_of_unity_tol`` guards |q^m - 1| for m up to ``root_of_unity_order``.
    ``denominator_tol`` is the threshold below which a denominator is treated as zero.
    ``series_eps`` is where an infinite product is truncated (|a q^k| below it).
    """

    rel_tol: float = 1e-9
    abs_tol: float = 1e-12
    denominator_tol: float = 1e-14
    root_of_unity_tol: float = 1e-12
    root_of_unity_order: int = 64
    series_eps: float = 1e-18
    max_series_terms: int = 20000
    seed: int = 0
    extra: dict = field(default_factory=dict, compare=False)


DEFAULT_POLICY = NumericPolicy()


def validate_q(q, policy: NumericPolicy = DEFAULT_POLICY, *, allow_one: bool = False) -> complex:
    """Return q as a complex number, rejecting 0, non-finite values and roots of unity.

    ``allow_one`` lets the classical limit q = 1 through for q = 1 code paths.
    """
    q = complex(q)
    if not (math.isfinite(q.real) and math.isfinite(q.imag)):
        raise InvalidQ(f"q must be finite, got {q}")
    if abs(q) < policy.denominator_tol:
        raise InvalidQ("q must be nonzero")
    if allow_one and q == 1:
        return q
    qm = 1.0 + 0j
    for m in range(1, policy.root_of_unity_order + 1):
        qm *= q
        if abs(qm - 1.0) < policy.root_of_unity_tol:
            raise InvalidQ(f"q is (numerically) a root of unity of order {m}")
    return q


def qpochhammer(a, q, n, policy: NumericPolicy = DEFAULT_POLICY) -> complex:
    """(a; q)_n = prod_{k<n} (1 - a q^k).

    ``n`` may be a non-negative integer, a negative integer (using
    (a;q)_{-m} = 1 / (a q^{-m}; q)_m) or ``math.inf``.
    """
    a = complex(a)
    q = complex(q)
    if n == math.inf:
        if abs(q) >= 1.0:
            raise NonConvergent(f"(a; q)_inf needs |q| < 1, got |q| = {abs(q)}")
        return kernels.qpoch_inf(a, q, policy.series_eps, policy.max_series_terms)
    if int(n) != n:
        raise ValueError(f"n must be an integer or inf, got {n}")
    n = int(n)
    if n >= 0:
        return kernels.qpoch(a, q, n)
    den = kernels.qpoch(a * q**n, q, -n)
    if abs(den) < policy.denominator_tol:
        raise DegenerateDenominator(f"(a; q)_{n} has a vanishing denominator")
    return 1.0 / den


def qpochhammer_multi(params: Sequence, q, n, policy: NumericPolicy = DEFAULT_POLICY) -> complex:
    """(a_1, ..., a_r; q)_n as a product of single symbols."""
    out = 1.0 + 0j
    for a in params:
        out *= qpochhammer(a, q, n, policy)
    return out


def qpochhammer_inf_array(a, q, policy: NumericPolicy = DEFAULT_POLICY) -> np.ndarray:
    """Elementwise (a; q)_inf over an array."""
    if abs(complex(q)) >= 1.0:
        raise NonConvergent("(a; q)_inf needs |q| < 1")
    return kernels.qpoch_inf_array(a, complex(q), policy.series_eps, policy.max_series_terms)


def phi_terminating(upper: Sequence, lower: Sequence, q, z, n: int,
                    policy: NumericPolicy = DEFAULT_POLICY) -> complex:
    """Terminating basic hypergeometric series r+1 phi r, summed to k = n.

    The caller promises one upper parameter equals q^{-n}; terms are built by the
    ratio recursion and any lower factor (1 - b q^k) with k < n that vanishes
    raises DegenerateDenominator.
    """
    q = complex(q)
    z = complex(z)
    for b in lower:
        for k in range(n):
            if abs(1.0 - b * q**k) < policy.denominator_tol:
                raise DegenerateDenominator(f"lower parameter {b} hits q^-{k}")
    total = 0j
    term = 1.0 + 0j
    for k in range(n + 1):
        total += term
        if k == n:
            break
        r = z / (1.0 - q ** (k + 1))
        for a in upper:
            r *= 1.0 - a * q**k
        for b in lower:
            r /= 1.0 - b * q**k
        term *= r
        if term == 0:
            break
    return total


def phi43_terminating(upper: Sequence, lower: Sequence, q, z, n: int,
                      policy: NumericPolicy = DEFAULT_POLICY) -> complex:
    """4 phi 3 specialisation of :func:`phi_terminating` with arity checks."""
    if len(upper) != 4 or len(lower) != 3:
        raise ValueError("4phi3 needs four upper and three lower parameters")
    return phi_terminating(upper, lower, q, z, n, policy)


def qsum_divfree(upper: Sequence, lower: Sequence, q, z, n: int) -> complex:
    """prod_j (lower_j; q)_n times the terminating series, without dividing by lower factors."""
    return kernels.qsum_divfree(tuple(complex(u) for u in upper),
                                tuple(complex(v) for v in lower), complex(q), complex(z), int(n))


def pochhammer(y, n: int) -> complex:
    """Rising factorial (y)_n = y (y+1) ... (y+n-1)."""
    out = 1.0 + 0j
    for k in range(int(n)):
        out *= y + k
    return out


def hypergeometric_terminating(upper: Sequence, lower: Sequence, z, n: int,
                               policy: NumericPolicy = DEFAULT_POLICY) -> complex:
    """Terminating r+1 F r series summed to k = n (one upper parameter is -n)."""
    for b in lower:
        for k in range(n):
            if abs(b + k) < policy.denominator_tol:
                raise DegenerateDenominator(f"lower parameter {b} hits -{k}")
    total = 0j
    term = 1.0 + 0j
    for k in range(n + 1):
        total += term
        if k == n:
            break
        r = complex(z) / (k + 1)
        for a in upper:
            r *= a + k
        for b in lower:
            r /= b + k
        term *= r
        if term == 0:
            break
    return total


def sum_divfree(upper: Sequence, lower: Sequence, z, n: int) -> complex:
    """prod_j (lower_j)_n times the terminating series, without dividing by lower factors."""
    return kernels.sum_divfree(tuple(complex(u) for u in upper),
                               tuple(complex(v) for v in lower), complex(z), int(n))


def qpow(q, e) -> complex:
    """q**e on the principal branch, exact for integer e."""
    q = complex(q)
    if isinstance(e, (int, np.integer)):
        return q ** int(e)
    return cmath.exp(complex(e) * cmath.log(q))


def nearest_integer_exponent(value, q, policy: NumericPolicy = DEFAULT_POLICY):
    """Return the integer m with q^m == value within tolerance, or None."""
    value = complex(value)
    q = complex(q)
    if value == 0 or abs(q) == 1.0:
        return None
    m = round(math.log(abs(value)) / math.log(abs(q)))
    target = q**m
    if abs(target - value) <= max(policy.abs_tol, policy.rel_tol * abs(value)):
        return int(m)
    return None
