"""Raising and lowering operators built from spectral projectors of the W1 tower.

B^{+/-(k)}_n = prod_{l<k} P_l(n) * P_k^{+/-}(n) * W0^{(k)}, where P_l keeps the
component with unchanged partial degree N_l and P_k^{+/-} keeps the component
with N_k shifted by +/-1. W0^{(k)} is multiplication by x_1 and W1^{(l)} is
D*^{(l)}/2, so the operators touch only z_1..z_k; z_{k+1} enters as a parameter.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DegenerateGap, InvalidParameters
from .gr_poly import as_alpha, as_multi_index, normalized_Qhat, random_point
from .qdiff_ops import (LatticeFunction, apply_stencil, dstar_eigenvalue, dstar_stencil,
                        multiplication_stencil, operator_parameters, recurrence_coefficients,
                        scaled_stencil)

DEFAULT_GAP_TOL = 1e-12


def theta_star(n, alpha, q, l: int) -> complex:
    """Eigenvalue of W1^{(l)} on polynomials of degree n."""
    return dstar_eigenvalue(n, alpha, q, l) / 2


def _shift(n, l, s):
    m = list(n)
    m[l - 1] += s
    return tuple(m)


def _gap(a, b, tol):
    d = a - b
    if abs(d) <= tol * max(1.0, abs(a), abs(b)):
        raise DegenerateGap(f"eigenvalue gap {abs(d):.3g} below threshold")
    return d


def ladder_factors(sign: int, k: int, n, alpha, q, gap_tol: float = DEFAULT_GAP_TOL):
    """[(l, eigenvalue_to_subtract), ...] and the overall scalar divisor."""
    n = as_multi_index(n)
    if len(n) != k:
        raise InvalidParameters("n must have exactly k entries")
    roots, denom = [], 1.0 + 0j
    for l in range(1, k):
        t0 = theta_star(n, alpha, q, l)
        tp = theta_star(_shift(n, l, 1), alpha, q, l)
        tm = theta_star(_shift(n, l, -1), alpha, q, l)
        roots += [(l, tp), (l, tm)]
        denom *= _gap(t0, tp, gap_tol) * _gap(t0, tm, gap_tol)
    t0 = theta_star(n, alpha, q, k)
    tt = theta_star(_shift(n, k, sign), alpha, q, k)
    to = theta_star(_shift(n, k, -sign), alpha, q, k)
    roots += [(k, to), (k, t0)]
    denom *= _gap(tt, to, gap_tol) * _gap(tt, t0, gap_tol)
    return roots, denom


def apply_Bpm(sign: int, k: int, n, f, z, alpha, q, form: str = "cbar",
              gap_tol: float = DEFAULT_GAP_TOL) -> complex:
    """(B^{sign (k)}_n f)(z) for a callable f of the N-vector z; sign is +1 or -1."""
    if sign not in (1, -1):
        raise InvalidParameters("sign must be +1 or -1")
    alpha = as_alpha(alpha)
    N = alpha.size - 3
    if not 1 <= k <= N:
        raise InvalidParameters(f"k must be in 1..{N}")
    z = np.asarray(z, dtype=complex)
    roots, denom = ladder_factors(sign, k, n, alpha, q, gap_tol)
    g = LatticeFunction.from_callable(f, z, q)
    g = apply_stencil(multiplication_stencil(lambda w: (w[0] + 1 / w[0]) / 2), g, z, q)
    # projector factors commute; apply them in the written right-to-left order
    for l, theta in reversed(roots):
        g = apply_stencil(scaled_stencil(dstar_stencil(l, alpha, q, form), 0.5, -theta), g, z, q)
    return g((0,) * N) / denom


def ladder_coefficient(sign: int, k: int, n, z, alpha, q) -> complex:
    """Recurrence coefficient of x_1 towards n + sign e_k in the k-variable family."""
    sub = operator_parameters(k, z, alpha)
    shift = (0,) * (k - 1) + (sign,)
    return recurrence_coefficients(tuple(n), sub, q)[shift][1]


def ladder_prediction(sign: int, k: int, nprime, z, alpha, q) -> complex:
    """Right-hand side: coefficient * Q-hat^{(N)}_{n'} * Q-hat^{(k)}_{n+/-e_k} / Q-hat^{(k)}_n.

    For k = N this is coefficient * Q-hat_{n' +/- e_N}.
    """
    alpha = as_alpha(alpha)
    N = alpha.size - 3
    nprime = as_multi_index(nprime)
    n = nprime[:k]
    m = _shift(n, k, sign)
    if m[k - 1] < 0:
        return 0j
    coef = ladder_coefficient(sign, k, n, z, alpha, q)
    if k == N:
        return coef * normalized_Qhat(m, z, alpha, q)
    sub = operator_parameters(k, z, alpha)
    zk = np.asarray(z, dtype=complex)[:k]
    return (coef * normalized_Qhat(nprime, z, alpha, q)
            * normalized_Qhat(m, zk, sub, q) / normalized_Qhat(n, zk, sub, q))


@dataclass
class LadderReport:
    k: int
    n: tuple
    samples: int
    max_residual: float
    lowering_floor: float | None = None
    residuals: list = field(default_factory=list)


def verify_ladder(k: int, nprime, alpha, q, samples: int = 3, rng=None,
                  signs=(1, -1), form: str = "cbar") -> LadderReport:
    """Both sides of the ladder identities at random points; relative residuals.

    When the lowering side is forced to vanish (n_k = 0) the left side relative
    to |Q-hat_{n'}(z)| is reported instead.
    """
    rng = np.random.default_rng(rng)
    alpha = as_alpha(alpha)
    N = alpha.size - 3
    nprime = as_multi_index(nprime)
    n = nprime[:k]
    res, floor = [], None
    for _ in range(samples):
        z = random_point(N, rng)
        f = lambda w: normalized_Qhat(nprime, w, alpha, q)
        for s in signs:
            lhs = apply_Bpm(s, k, n, f, z, alpha, q, form)
            rhs = ladder_prediction(s, k, nprime, z, alpha, q)
            if s == -1 and n[k - 1] == 0:
                floor = max(floor or 0.0, abs(lhs) / max(abs(f(z)), 1e-300))
                continue
            res.append(abs(lhs - rhs) / max(abs(rhs), 1e-300))
    return LadderReport(k, nprime, samples, max(res) if res else 0.0, floor, res)
