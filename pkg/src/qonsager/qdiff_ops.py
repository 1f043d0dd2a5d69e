"""q-difference operators in the variables and in the degrees.

A *stencil* is a callable ``z -> list[(shift, coefficient)]``: applied to f it
gives sum_s coefficient * f(z q^{2 s}). Operators on the variable side act on
callables ``f(z)``; operators on the degree side act on callables ``g(n)``.
Evaluations at shifted points are cached on integer offsets so that products of
operators cost (number of distinct offsets) x (stencil width) evaluations.
"""

from __future__ import annotations

import csv
import itertools
from typing import Callable, Sequence

import numpy as np

from .errors import InvalidParameters
from .gr_poly import as_alpha, involution_alpha, partial_sums

Stencil = Callable[[np.ndarray], list]


def sign_patterns(k: int, values=(-1, 0, 1)) -> list[tuple[int, ...]]:
    return list(itertools.product(values, repeat=k))


def inverted(z, mask) -> np.ndarray:
    """Apply the reflections z_j -> 1/z_j wherever mask_j is true."""
    z = np.array(z, dtype=complex)
    for j, m in enumerate(mask):
        if m:
            z[j] = 1.0 / z[j]
    return z


# ---------------------------------------------------------------- variable side

def operator_parameters(k: int, z, alpha) -> np.ndarray:
    """Parameters of the k-variable operator embedded in N variables.

    The list is (alpha_0, ..., alpha_{k+1}, z_{k+1}); for k = N the last entry is alpha_{N+2}.
    """
    alpha = as_alpha(alpha)
    N = alpha.size - 3
    if not 1 <= k <= N:
        raise InvalidParameters(f"operator index k must be in 1..{N}")
    if k == N:
        return alpha.copy()
    return np.concatenate([alpha[: k + 2], [complex(z[k])]])


def phi_nu(nu: Sequence[int], z, alpha, q) -> complex:
    """Coefficient Phi_nu of the operator written with forward/backward differences.

    ``alpha`` has length len(nu) + 3. For nu in {0,1}^k with support
    i_1 < ... < i_s the coefficient is a product of a boundary factor at i_1,
    nearest-neighbour factors between consecutive support points, the
    denominator (1 - z^2)(1 - q^2 z^2) at each support point and a boundary
    factor at i_s. Negative entries reflect the corresponding variable.
    """
    k = len(nu)
    alpha = as_alpha(alpha, k)
    q2 = complex(q) ** 2
    z = inverted(z, [v < 0 for v in nu])
    supp = [i + 1 for i, v in enumerate(nu) if v != 0]
    if not supp:
        raise InvalidParameters("phi_nu is defined for nonzero nu only")
    i1, i_s = supp[0], supp[-1]
    zi = lambda i: z[i - 1]
    out = (1 - alpha[i1] * zi(i1)) * (1 - alpha[i1] * zi(i1) / alpha[0] ** 2)
    for prev, cur in zip(supp, supp[1:]):
        t = alpha[cur] * zi(cur) * zi(prev) / alpha[prev]
        out *= (1 - t) * (1 - q2 * t)
    for i in supp:
        out /= (1 - zi(i) ** 2) * (1 - q2 * zi(i) ** 2)
    top, last = alpha[k + 1], alpha[k + 2]
    out *= (1 - top * last * zi(i_s) / alpha[i_s]) * (1 - top * zi(i_s) / (alpha[i_s] * last))
    return out


def _B(j: int, s: int, t: int, zz, alpha, q2) -> complex:
    """Nearest-neighbour factor B_j^{s,t} with zz = (z_0, z_1, ..., z_{k+1})."""
    r = alpha[j + 1] / alpha[j]
    zj, zn = zz[j], zz[j + 1]
    if s == 0 and t == 0:
        xj, xn = (zj + 1 / zj) / 2, (zn + 1 / zn) / 2
        return 1 + r * r / q2 - 4 * r * xj * xn / (q2 + 1)
    if s < 0:
        zj = 1 / zj
    if t < 0:
        zn = 1 / zn
    first = 1 - r * zj * zn
    if s and t:
        return first * (1 - q2 * r * zj * zn)
    if t:
        return first * (1 - r * zn / zj)
    return first * (1 - r * zj / zn)


def _b(s: int, z, q2) -> complex:
    if s == 0:
        return (1 - q2 * z * z) * (1 - q2 / (z * z))
    if s < 0:
        z = 1 / z
    return (1 - z * z) * (1 - q2 * z * z)


def cbar_coefficient(nu: Sequence[int], z, alpha, q) -> complex:
    """Coefficient C-bar_nu of the shift E^nu in the nearest-neighbour form.

    C-bar_nu = (q^2 (q^2 + 1))^{#zeros of nu} prod_{j=0}^{k} B_j^{nu_j, nu_{j+1}} / prod_j b_j^{nu_j}
    with nu_0 = nu_{k+1} = 0, z_0 = alpha_0 and z_{k+1} = alpha_{k+2}.
    """
    k = len(nu)
    alpha = as_alpha(alpha, k)
    q2 = complex(q) ** 2
    zz = np.concatenate([[alpha[0]], np.asarray(z, dtype=complex)[:k], [alpha[k + 2]]])
    ext = (0,) + tuple(nu) + (0,)
    out = (q2 * (q2 + 1)) ** sum(1 for v in nu if v == 0)
    for j in range(k + 1):
        out *= _B(j, ext[j], ext[j + 1], zz, alpha, q2)
    for j in range(1, k + 1):
        out /= _b(ext[j], zz[j], q2)
    return out


def cbar_constant(alpha, q) -> complex:
    """Constant term 4 alpha_{k+1} x_0 x_{k+1} / (alpha_0 (q^2 + 1)) of the nearest-neighbour form."""
    alpha = as_alpha(alpha)
    k = alpha.size - 3
    q2 = complex(q) ** 2
    x0 = (alpha[0] + 1 / alpha[0]) / 2
    xl = (alpha[k + 2] + 1 / alpha[k + 2]) / 2
    return 4 * alpha[k + 1] * x0 * xl / (alpha[0] * (q2 + 1))


def dstar_prefactor(alpha, q) -> complex:
    alpha = as_alpha(alpha)
    k = alpha.size - 3
    return alpha[0] * complex(q) / alpha[k + 1]


def dstar_eigenvalue(n, alpha, q, k: int | None = None) -> complex:
    """alpha_{k+1} q^{2N_k} / (alpha_0 q) + alpha_0 q q^{-2N_k} / alpha_{k+1}."""
    alpha = as_alpha(alpha)
    N = alpha.size - 3
    k = N if k is None else k
    q = complex(q)
    Nk = sum(n[:k])
    u = alpha[k + 1] / (alpha[0] * q)
    return u * q ** (2 * Nk) + q ** (-2 * Nk) / u


def _embed(nu, N):
    return tuple(nu) + (0,) * (N - len(nu))


def dstar_stencil_phi(k: int, alpha, q) -> Stencil:
    """Stencil of D*^{(k)} built from Phi_nu and the difference operators."""
    alpha = as_alpha(alpha)
    N = alpha.size - 3
    q = complex(q)

    def stencil(z):
        a = operator_parameters(k, z, alpha)
        pref = dstar_prefactor(a, q)
        acc: dict[tuple, complex] = {}
        const = 1 + a[k + 1] ** 2 / (q**2 * a[0] ** 2)
        acc[(0,) * N] = pref * const
        for nu in sign_patterns(k):
            if not any(nu):
                continue
            sign = (-1) ** sum(1 for v in nu if v < 0)
            ph = sign * phi_nu(nu, z[:k], a, q) * pref
            supp = [i for i, v in enumerate(nu) if v]
            # (E - 1) for +1 entries, (1 - E^{-1}) for -1 entries, expanded over choices
            for choice in itertools.product((0, 1), repeat=len(supp)):
                shift = [0] * N
                c = ph
                for i, take in zip(supp, choice):
                    if nu[i] > 0:
                        c = c if take else -c
                    else:
                        c = -c if take else c
                    if take:
                        shift[i] = nu[i]
                key = tuple(shift)
                acc[key] = acc.get(key, 0) + c
        return list(acc.items())

    return stencil


def dstar_stencil_cbar(k: int, alpha, q) -> Stencil:
    """Stencil of D*^{(k)} in the nearest-neighbour (C-bar) form."""
    alpha = as_alpha(alpha)
    N = alpha.size - 3
    q = complex(q)

    def stencil(z):
        a = operator_parameters(k, z, alpha)
        pref = dstar_prefactor(a, q)
        out = []
        for nu in sign_patterns(k):
            c = cbar_coefficient(nu, z[:k], a, q)
            if not any(nu):
                c = c + cbar_constant(a, q)
            out.append((_embed(nu, N), pref * c))
        return out

    return stencil


def dstar_stencil(k: int, alpha, q, form: str = "cbar") -> Stencil:
    if form == "cbar":
        return dstar_stencil_cbar(k, alpha, q)
    if form == "phi":
        return dstar_stencil_phi(k, alpha, q)
    raise ValueError(f"unknown operator form {form!r}")


def scaled_stencil(stencil: Stencil, scale=1.0, diagonal_shift=0.0) -> Stencil:
    """Stencil of scale * S + diagonal_shift * Id."""
    def out(z):
        items = [(s, scale * c) for s, c in stencil(z)]
        if diagonal_shift:
            zero = None
            for i, (s, _) in enumerate(items):
                if not any(s):
                    zero = i
                    break
            if zero is None:
                items.append(((0,) * len(z), diagonal_shift))
            else:
                items[zero] = (items[zero][0], items[zero][1] + diagonal_shift)
        return items
    return out


def multiplication_stencil(fn: Callable[[np.ndarray], complex]) -> Stencil:
    def out(z):
        return [((0,) * len(z), fn(z))]
    return out


class LatticeFunction:
    """f(z0 q^{2m}) for integer offsets m, memoised."""

    def __init__(self, evaluate: Callable[[tuple], complex]):
        self._evaluate = evaluate
        self._cache: dict[tuple, complex] = {}

    def __call__(self, m: tuple) -> complex:
        v = self._cache.get(m)
        if v is None:
            v = self._evaluate(m)
            self._cache[m] = v
        return v

    @classmethod
    def from_callable(cls, f: Callable, z0, q) -> "LatticeFunction":
        z0 = np.asarray(z0, dtype=complex)
        q2 = complex(q) ** 2
        return cls(lambda m: complex(f(z0 * q2 ** np.asarray(m))))


def apply_stencil(stencil: Stencil, g: LatticeFunction, z0, q) -> LatticeFunction:
    """Lattice function of the operator applied to g."""
    z0 = np.asarray(z0, dtype=complex)
    q2 = complex(q) ** 2

    def ev(m):
        pt = z0 * q2 ** np.asarray(m)
        total = 0j
        for s, c in stencil(pt):
            if c == 0:
                continue
            total += c * g(tuple(a + b for a, b in zip(m, s)))
        return total

    return LatticeFunction(ev)


def apply_operator_chain(stencils: Sequence[Stencil], f: Callable, z0, q) -> complex:
    """(S_1 S_2 ... S_r f)(z0); the rightmost stencil acts first."""
    N = len(np.atleast_1d(z0))
    g = LatticeFunction.from_callable(f, z0, q)
    for st in reversed(stencils):
        g = apply_stencil(st, g, z0, q)
    return g((0,) * N)


def apply_stencil_terms(stencil: Stencil, f: Callable, z, q) -> tuple[complex, float]:
    """(S f)(z) together with sum |c f| (the scale of the summed terms)."""
    z = np.asarray(z, dtype=complex)
    q2 = complex(q) ** 2
    total, scale = 0j, 0.0
    for s, c in stencil(z):
        v = c * f(z * q2 ** np.asarray(s))
        total += v
        scale += abs(v)
    return total, scale


def apply_Dstar(k: int, f: Callable, z, alpha, q, form: str = "cbar") -> complex:
    """(D*^{(k)} f)(z) for a callable f of the N-vector z."""
    return apply_stencil_terms(dstar_stencil(k, alpha, q, form), f, z, q)[0]


# ------------------------------------------------------------------ degree side

def dual_map_b(n, alpha, q):
    """Images (z~_1..z~_N, z~_{N+1}, alpha~) of the variables and parameters under the duality map.

    z~_j = alpha_{N+2-j} / (alpha_0 q) q^{2 N_{N+1-j}}; z~_{N+1} = alpha~_{N+2}.
    """
    alpha = as_alpha(alpha)
    N = alpha.size - 3
    q = complex(q)
    Nk = partial_sums(n)
    zt = np.array([alpha[N + 2 - j] / (alpha[0] * q) * q ** (2 * Nk[N + 1 - j]) for j in range(1, N + 1)])
    at = involution_alpha(alpha, q)
    return zt, at


def shift_image(nu: Sequence[int], N: int) -> tuple[int, ...]:
    """Degree shift produced by the image of E^nu (nu of length k <= N).

    E_{z_j} maps to E_{n_{N+1-j}} E_{n_{N+2-j}}^{-1} with E_{n_{N+1}} = Id.
    """
    s = [0] * N
    for j, v in enumerate(nu, start=1):
        if v:
            s[N - j] += v
            if N + 2 - j <= N:
                s[N + 1 - j] -= v
    return tuple(s)


def dual_stencil(k: int, n, alpha, q) -> list:
    """Terms (shift, coefficient) of D^{(k)}_n, the image of D*^{(k)}, at the degree n."""
    alpha = as_alpha(alpha)
    N = alpha.size - 3
    zt, at = dual_map_b(n, alpha, q)
    zfull = np.concatenate([zt, [at[N + 2]]])
    a = np.concatenate([at[: k + 2], [zfull[k]]])
    pref = dstar_prefactor(a, q)
    out = []
    for nu in sign_patterns(k):
        c = cbar_coefficient(nu, zt[:k], a, q)
        if not any(nu):
            c = c + cbar_constant(a, q)
        out.append((shift_image(nu, N), pref * c))
    return out


def apply_Dn(k: int, g: Callable, n, alpha, q) -> complex:
    """(D^{(k)}_n g)(n) for a callable g on multi-indices; g is not called at negative degrees."""
    total = 0j
    for s, c in dual_stencil(k, n, alpha, q):
        m = tuple(a + b for a, b in zip(n, s))
        if min(m) < 0:
            continue
        total += c * g(m)
    return total


def dual_eigenvalue(k: int, z, alpha) -> complex:
    """z_{N+1-k} + 1/z_{N+1-k}, the eigenvalue of D^{(k)}_n."""
    alpha = as_alpha(alpha)
    N = alpha.size - 3
    w = complex(z[N - k])
    return w + 1 / w


def coefficient_kind(shift: Sequence[int]) -> str:
    t = sum(shift)
    return "b" if t > 0 else ("c" if t < 0 else "a")


def tabulated_factor_image(j: int, s: int, t: int, n, alpha, q) -> complex:
    """Closed forms for the image of B_j^{s,t} in terms of n (only the listed cases).

    Raises KeyError for entries without a tabulated closed form.
    """
    alpha = as_alpha(alpha)
    N = alpha.size - 3
    q = complex(q)
    Nk = partial_sums(n)
    a0 = alpha[0]
    if j == 0:
        tot = Nk[N]
        top = alpha[N + 1] * alpha[N + 2]
        if (s, t) == (0, 1):
            return (1 - top * q ** (2 * tot)) * (1 - top / a0**2 * q ** (2 * tot))
        if (s, t) == (0, -1):
            return ((1 - alpha[N + 2] * a0**2 / alpha[N + 1] * q ** (-2 * tot + 2))
                    * (1 - alpha[N + 2] / alpha[N + 1] * q ** (-2 * tot + 2)))
        raise KeyError((j, s, t))
    if j == N:
        n1 = n[0]
        if (s, t) == (1, 0):
            return (1 - alpha[2] ** 2 / a0**2 * q ** (2 * n1 - 2)) * (1 - alpha[2] ** 2 / alpha[1] ** 2 * q ** (2 * n1))
        if (s, t) == (-1, 0):
            return (1 - q ** (-2 * n1)) * (1 - a0**2 / alpha[1] ** 2 * q ** (-2 * n1 + 2))
        raise KeyError((j, s, t))
    m = n[N - j]  # n_{N+1-j}
    M = Nk[N - j]  # N_{N-j}
    hi, lo = alpha[N + 2 - j], alpha[N + 1 - j]
    A = 1 - hi**2 / a0**2 * q ** (4 * M + 2 * m - 2)
    R = 1 - hi**2 / lo**2 * q ** (2 * m)
    table = {
        (0, 1): lambda: A * (1 - q ** (-2 * m)),
        (1, 0): lambda: A * R,
        (0, -1): lambda: (1 - hi**2 / lo**2 * q ** (2 * m)) * (1 - a0**2 / lo**2 * q ** (-4 * M - 2 * m + 2)),
        (-1, 0): lambda: (1 - q ** (-2 * m)) * (1 - a0**2 / lo**2 * q ** (-4 * M - 2 * m + 2)),
        (1, -1): lambda: R * (1 - hi**2 / lo**2 * q ** (2 * m + 2)),
        (-1, 1): lambda: (1 - q ** (-2 * m)) * (1 - q ** (-2 * m + 2)),
    }
    return table[(s, t)]()


def _cbar_image_closed(nu, n, alpha, q) -> complex:
    """Image of C-bar_nu using tabulated closed forms wherever available."""
    alpha = as_alpha(alpha)
    N = alpha.size - 3
    q2 = complex(q) ** 2
    zt, at = dual_map_b(n, alpha, q)
    zz = np.concatenate([[at[0]], zt, [at[N + 2]]])
    ext = (0,) + tuple(nu) + (0,)
    out = (q2 * (q2 + 1)) ** sum(1 for v in nu if v == 0)
    for j in range(N + 1):
        try:
            out *= tabulated_factor_image(j, ext[j], ext[j + 1], n, alpha, q)
        except KeyError:
            out *= _B(j, ext[j], ext[j + 1], zz, at, q2)
    for j in range(1, N + 1):
        out /= _b(ext[j], zz[j], q2)
    return out


def recurrence_coefficients(n, alpha, q, method: str = "closed") -> dict:
    """Coefficients of x_1 Q-hat_n = sum_shift coef * Q-hat_{n + shift}.

    Returns {shift: (kind, value)} with kind in {"b", "c", "a"} by the sign of the
    total shift. Non-trivial shifts come from the image of C-bar_nu times
    alpha_1 / (2 alpha_{N+1} alpha_{N+2}); the diagonal entry comes from the
    constant-function sum rule. ``method`` chooses between the tabulated closed
    forms ("closed") and plain substitution ("substitution").
    """
    alpha = as_alpha(alpha)
    N = alpha.size - 3
    half = alpha[1] / (2 * alpha[N + 1] * alpha[N + 2])
    out = {}
    total = 0j
    zt, at = dual_map_b(n, alpha, q)
    for nu in sign_patterns(N):
        if not any(nu):
            continue
        if method == "closed":
            c = _cbar_image_closed(nu, n, alpha, q)
        elif method == "substitution":
            c = cbar_coefficient(nu, zt, at, q)
        else:
            raise ValueError(f"unknown method {method!r}")
        s = shift_image(nu, N)
        out[s] = (coefficient_kind(s), half * c)
        total += half * c
    diag = half + 1 / (4 * half) - total
    out[(0,) * N] = ("a", diag)
    return out


def apply_recurrence(g: Callable, n, alpha, q) -> complex:
    """sum_shift coef(n) g(n + shift), i.e. the action of x_1 expressed on degrees."""
    total = 0j
    for s, (_, c) in recurrence_coefficients(n, alpha, q).items():
        m = tuple(a + b for a, b in zip(n, s))
        if min(m) < 0:
            continue
        total += c * g(m)
    return total


def reference_coefficients(N: int, n, alpha, q) -> dict:
    """Hand-written coefficient tables for N = 1 and N = 2, independent of the generic code."""
    alpha = as_alpha(alpha, N)
    q = complex(q)
    if N == 1:
        return _reference_N1(n, alpha, q)
    if N == 2:
        return _reference_N2(n, alpha, q)
    raise InvalidParameters("reference tables exist for N = 1 and N = 2 only")


def _reference_N1(n, alpha, q) -> dict:
    (n1,) = n
    a0, a1, a2, a3 = alpha
    P = lambda e: q ** (2 * e)
    up, down = a1 / (2 * a2 * a3), a2 * a3 / (2 * a1)
    b = up * ((1 - a2 * a3 * P(n1)) * (1 - a2 * a3 / a0**2 * P(n1))
              * (1 - a2**2 / a0**2 * P(n1 - 1)) * (1 - a2**2 / a1**2 * P(n1))
              / ((1 - a2**2 / a0**2 * P(2 * n1 - 1)) * (1 - a2**2 / a0**2 * P(2 * n1))))
    c = down * ((1 - P(n1)) * (1 - a2 / a3 * P(n1 - 1)) * (1 - a2 / (a3 * a0**2) * P(n1 - 1))
                * (1 - a1**2 / a0**2 * P(n1 - 1))
                / ((1 - a2**2 / a0**2 * P(2 * n1 - 1)) * (1 - a2**2 / a0**2 * P(2 * n1 - 2))))
    a = down + up - b - c
    return {(1,): ("b", b), (-1,): ("c", c), (0,): ("a", a)}


def _reference_N2(n, alpha, q) -> dict:
    n1, n2 = n
    a0, a1, a2, a3, a4 = alpha
    T = n1 + n2
    P = lambda e: q ** (2 * e)
    up, down = a1 / (2 * a3 * a4), a3 * a4 / (2 * a1)
    r30, r20 = a3**2 / a0**2, a2**2 / a0**2
    head_b = (1 - a3 * a4 * P(T)) * (1 - a3 * a4 / a0**2 * P(T))
    den_b = (1 - r30 * P(2 * T - 1)) * (1 - r30 * P(2 * T))
    head_c = (1 - a3 / (a0**2 * a4) * P(T - 1)) * (1 - a3 / a4 * P(T - 1))
    den_c = (1 - r30 * P(2 * T - 1)) * (1 - r30 * P(2 * T - 2))
    b10 = up * head_b * ((1 - r30 * P(2 * n1 + n2 - 1)) * (1 - r30 * P(2 * n1 + n2))
                         * (1 - r20 * P(n1 - 1)) * (1 - a2**2 / a1**2 * P(n1))) / (
        den_b * (1 - r20 * P(2 * n1 - 1)) * (1 - r20 * P(2 * n1)))
    bm12 = up * head_b * ((1 - a3**2 / a2**2 * P(n2)) * (1 - a3**2 / a2**2 * P(n2 + 1))
                          * (1 - P(-n1)) * (1 - a0**2 / a1**2 * P(1 - n1))) / (
        den_b * (1 - a0**2 / a2**2 * P(1 - 2 * n1)) * (1 - a0**2 / a2**2 * P(2 - 2 * n1)))
    b01 = up * head_b * (1 - r30 * P(T - 1)) * (1 - a3**2 / a1**2 * P(T)) / den_b - b10 - bm12
    cm10 = down * head_c * ((1 - r20 * P(2 * n1 + n2 - 1)) * (1 - r20 * P(2 * n1 + n2 - 2))
                            * (1 - P(n1)) * (1 - a1**2 / a0**2 * P(n1 - 1))) / (
        den_c * (1 - r20 * P(2 * n1 - 1)) * (1 - r20 * P(2 * n1 - 2)))
    c1m2 = down * head_c * ((1 - P(n2)) * (1 - P(n2 - 1)) * (1 - a0**2 / a2**2 * P(1 - n1))
                            * (1 - a1**2 / a2**2 * P(-n1))) / (
        den_c * (1 - a0**2 / a2**2 * P(1 - 2 * n1)) * (1 - a0**2 / a2**2 * P(-2 * n1)))
    c0m1 = down * head_c * (1 - P(T)) * (1 - a1**2 / a0**2 * P(T - 1)) / den_c - cm10 - c1m2
    a1m1 = up * ((1 - r20 * P(n1 - 1)) * (1 - a2**2 / a1**2 * P(n1)) * (1 - a3 * a4 * P(n1))
                 * (1 - a3 * a4 / a0**2 * P(n1))) / (
        (1 - r20 * P(2 * n1 - 1)) * (1 - r20 * P(2 * n1))) - b10 - c1m2
    am11 = down * ((1 - P(n1)) * (1 - a1**2 / a0**2 * P(n1 - 1))
                   * (1 - a2**2 / (a0**2 * a3 * a4) * P(n1 - 1)) * (1 - a2**2 / (a3 * a4) * P(n1 - 1))) / (
        (1 - r20 * P(2 * n1 - 1)) * (1 - r20 * P(2 * n1 - 2))) - cm10 - bm12
    a00 = down + up - a1m1 - am11 - bm12 - b10 - b01 - c1m2 - cm10 - c0m1
    return {
        (1, 0): ("b", b10), (0, 1): ("b", b01), (-1, 2): ("b", bm12),
        (-1, 0): ("c", cm10), (0, -1): ("c", c0m1), (1, -2): ("c", c1m2),
        (1, -1): ("a", a1m1), (-1, 1): ("a", am11), (0, 0): ("a", a00),
    }
