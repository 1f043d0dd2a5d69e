"""Commuting elements of the q-Onsager algebra and their spectral problems on finite modules."""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .errors import EigensolverFailure, RecurrenceBreakdown
from .gr_poly import as_alpha, involution_alpha
from .onsager_modules import (GradedBasis, ModuleSpec, build_dual_pair, build_W0_blocktri,
                              build_W1_diag, onsager_rho, q_commutator)
from .qdiff_ops import dstar_eigenvalue, recurrence_coefficients


@dataclass(frozen=True)
class BoundaryParams:
    """Coupling constants of I_1 = w0 W0 + w1 W1 + g+ G1 + g- G~1 and of H = h0 I1 + h_-1 I3 + h0'."""

    omega0: complex
    omega1: complex
    g_plus: complex
    g_minus: complex
    h0: complex = 1.0
    h_minus1: complex = 0.0
    h0_prime: complex = 0.0


def build_descendants(W0, W1, q, rho) -> dict:
    """First descendants W_{-1}, W_2, G_1, G~_1, G_2, G~_2 as matrices."""
    W0 = np.asarray(W0, dtype=complex)
    W1 = np.asarray(W1, dtype=complex)
    q = complex(q)
    rho = complex(rho)
    qq = q**2 + q**-2

    def w_minus(A, B):
        return (qq * A @ B @ A - A @ A @ B - B @ A @ A) / rho + B

    def g2(A, B):
        AA, BB = A @ A, B @ B
        out = ((q**-3 + q**-1) * AA @ BB - (q**3 + q) * BB @ AA
               + (q**-3 - q**3) * (A @ BB @ A + B @ AA @ B)
               - (q**-5 + q**-3 + 2 / q) * A @ B @ A @ B
               + (q**5 + q**3 + 2 * q) * B @ A @ B @ A
               + rho * (q - 1 / q) * (AA + BB))
        return out / (rho * qq)

    return {
        "W_-1": w_minus(W0, W1),
        "W_2": w_minus(W1, W0),
        "G_1": q_commutator(W1, W0, q),
        "G~_1": q_commutator(W0, W1, q),
        "G_2": g2(W0, W1),
        "G~_2": g2(W1, W0),
    }


def build_I(which: int, W0, W1, q, rho, bp: BoundaryParams) -> np.ndarray:
    """I_1 or I_3 from the generators."""
    d = build_descendants(W0, W1, q, rho)
    if which == 1:
        return (bp.omega0 * np.asarray(W0) + bp.omega1 * np.asarray(W1)
                + bp.g_plus * d["G_1"] + bp.g_minus * d["G~_1"])
    if which == 3:
        return (bp.omega0 * d["W_-1"] + bp.omega1 * d["W_2"]
                + bp.g_plus * d["G_2"] + bp.g_minus * d["G~_2"])
    raise ValueError("only I_1 and I_3 are implemented")


def build_H(W0, W1, q, rho, bp: BoundaryParams) -> np.ndarray:
    I1 = build_I(1, W0, W1, q, rho, bp)
    I3 = build_I(3, W0, W1, q, rho, bp)
    return bp.h0 * I1 + bp.h_minus1 * I3 + bp.h0_prime * np.eye(I1.shape[0])


def _split(q):
    q = complex(q)
    return q, (q**2 - q**-2) / 2


def raising_factor(total: int, u, q, bp: BoundaryParams, w) -> complex:
    """w + (q^2 - q^-2)/2 (g- u q^{-2T-1} + g+ u^{-1} q^{2T+1})."""
    q, h = _split(q)
    return w + h * (bp.g_minus * u * q ** (-2 * total - 1) + bp.g_plus / u * q ** (2 * total + 1))


def lowering_factor(total: int, u, q, bp: BoundaryParams, w) -> complex:
    """w + (q^2 - q^-2)/2 (g- u^{-1} q^{2T-1} + g+ u q^{-2T+1})."""
    q, h = _split(q)
    return w + h * (bp.g_minus / u * q ** (2 * total - 1) + bp.g_plus * u * q ** (-2 * total + 1))


def i1_coefficients(n, alpha, q, bp: BoundaryParams) -> dict:
    """Entries of I_1 in the polynomial basis: {shift: (kind, value)} at source n."""
    alpha = as_alpha(alpha)
    N = alpha.size - 3
    q = complex(q)
    u = alpha[0] * q / alpha[N + 1]
    T = sum(n)
    theta = dstar_eigenvalue(n, alpha, q) / 2
    out = {}
    for s, (kind, c) in recurrence_coefficients(n, alpha, q).items():
        if kind == "b":
            v = raising_factor(T, u, q, bp, bp.omega0) * c
        elif kind == "c":
            v = lowering_factor(T, u, q, bp, bp.omega0) * c
        else:
            v = (bp.omega0 + (bp.g_plus + bp.g_minus) * (q - 1 / q) * theta) * c
            if not any(s):
                v += bp.omega1 * theta
        out[s] = (kind, v)
    return out


def i1_dual_coefficients(nt, alpha, q, bp: BoundaryParams) -> dict:
    """Entries of I_1 in the dual description: {shift: (kind, value)} at source n~.

    The exchanges omega0 <-> omega1, theta* -> theta, and the raising/lowering
    multipliers use v = alpha_1 / (alpha_{N+1} alpha_{N+2}) in place of
    alpha_0 q / alpha_{N+1}, with g+ attached to v^{-1} q^{2T+1} on raising.
    """
    alpha = as_alpha(alpha)
    N = alpha.size - 3
    q = complex(q)
    ad = involution_alpha(alpha, q)
    v = alpha[1] / (alpha[N + 1] * alpha[N + 2])
    T = sum(nt)
    theta = dstar_eigenvalue(nt, ad, q) / 2
    swapped = replace(bp, g_plus=bp.g_minus, g_minus=bp.g_plus)
    out = {}
    for s, (kind, c) in recurrence_coefficients(nt, ad, q).items():
        if kind == "b":
            val = raising_factor(T, v, q, swapped, bp.omega1) * c
        elif kind == "c":
            val = lowering_factor(T, v, q, swapped, bp.omega1) * c
        else:
            val = (bp.omega1 + (bp.g_plus + bp.g_minus) * (q - 1 / q) * theta) * c
            if not any(s):
                val += bp.omega0 * theta
        out[s] = (kind, val)
    return out


def _assemble(basis: GradedBasis, coeff_fn) -> np.ndarray:
    dim = len(basis)
    M = np.zeros((dim, dim), dtype=complex)
    for col, n in enumerate(basis.indices):
        for s, (_, c) in coeff_fn(n).items():
            m = tuple(a + b for a, b in zip(n, s))
            if m in basis.position:
                M[basis.position[m], col] += c
    return M


def i1_matrix_from_coefficients(spec: ModuleSpec, bp: BoundaryParams) -> np.ndarray:
    basis = GradedBasis(spec.limits)
    return _assemble(basis, lambda n: i1_coefficients(n, spec.alpha, spec.q, bp))


def i1_dual_matrix(spec: ModuleSpec, bp: BoundaryParams) -> np.ndarray:
    basis = GradedBasis(tuple(reversed(spec.limits)))
    return _assemble(basis, lambda n: i1_dual_coefficients(n, spec.alpha, spec.q, bp))


def primal_I(spec: ModuleSpec, which: int, bp: BoundaryParams) -> np.ndarray:
    W0 = build_W0_blocktri(spec).matrix
    W1 = build_W1_diag(spec).matrix
    return build_I(which, W0, W1, spec.q, onsager_rho(spec.q), bp)


def dual_I(spec: ModuleSpec, which: int, bp: BoundaryParams) -> np.ndarray:
    D0, D1 = build_dual_pair(spec)
    return build_I(which, D0.matrix, D1.matrix, spec.q, onsager_rho(spec.q), bp)


# ---------------------------------------------------------------- invariant subspaces

RELATIONS = ("W+", "W-", "W+bar", "W-bar")


def nepomechie_value(which: str, P: int, alpha, q, bp: BoundaryParams) -> complex:
    """Left-hand side of the scalar relation that makes the named window invariant."""
    alpha = as_alpha(alpha)
    N = alpha.size - 3
    q = complex(q)
    u = alpha[0] * q / alpha[N + 1]
    v = alpha[1] / (alpha[N + 1] * alpha[N + 2])
    swapped = replace(bp, g_plus=bp.g_minus, g_minus=bp.g_plus)
    if which == "W+":
        return raising_factor(P, u, q, bp, bp.omega0)
    if which == "W+bar":
        return lowering_factor(P + 1, u, q, bp, bp.omega0)
    if which == "W-":
        return raising_factor(P, v, q, swapped, bp.omega1)
    if which == "W-bar":
        return lowering_factor(P + 1, v, q, swapped, bp.omega1)
    raise ValueError(f"unknown window {which!r}")


def solve_nepomechie(which: str, P: int, alpha, q, bp: BoundaryParams) -> BoundaryParams:
    """Return bp with omega0 (primal windows) or omega1 (dual windows) solving the relation."""
    if which in ("W+", "W+bar"):
        probe = replace(bp, omega0=0.0)
        return replace(bp, omega0=-nepomechie_value(which, P, alpha, q, probe))
    probe = replace(bp, omega1=0.0)
    return replace(bp, omega1=-nepomechie_value(which, P, alpha, q, probe))


@dataclass
class WindowCheck:
    which: str
    P: int
    relation_value: complex
    coupling: float
    outside_support: float
    window_eigenvalues: np.ndarray


def window_coupling(M: np.ndarray, grades: np.ndarray, P: int, upper: bool) -> float:
    """Largest entry carrying the window into its complement (relative to max |M|)."""
    inside = grades <= P if not upper else grades > P
    block = M[np.ix_(~inside, inside)]
    scale = max(float(np.max(np.abs(M))), 1e-300)
    return float(np.max(np.abs(block))) / scale if block.size else 0.0


def check_window(spec: ModuleSpec, which: str, P: int, bp: BoundaryParams) -> WindowCheck:
    """Coupling out of the window and the support of the eigenvectors belonging to it."""
    if which in ("W+", "W+bar"):
        M = i1_matrix_from_coefficients(spec, bp)
        grades = GradedBasis(spec.limits).grades()
    else:
        M = i1_dual_matrix(spec, bp)
        grades = GradedBasis(tuple(reversed(spec.limits))).grades()
    upper = which.endswith("bar")
    coupling = window_coupling(M, grades, P, upper)
    inside = grades > P if upper else grades <= P
    sub = M[np.ix_(inside, inside)]
    win_ev = np.linalg.eigvals(sub)
    ev, V = np.linalg.eig(M)
    outside = 0.0
    for lam in win_ev:
        i = int(np.argmin(np.abs(ev - lam)))
        vec = V[:, i] / np.linalg.norm(V[:, i])
        outside = max(outside, float(np.linalg.norm(vec[~inside])))
    return WindowCheck(which, P, nepomechie_value(which, P, spec.alpha, spec.q, bp), coupling, outside, win_ev)


# ---------------------------------------------------------------- spectra

@dataclass
class Eigensystem:
    values: np.ndarray
    vectors: np.ndarray
    residual: float
    condition: float


def solve_finite_spectrum(M, tol: float = 1e-8, max_condition: float = 1e12) -> Eigensystem:
    """Dense eigendecomposition; each eigenvector is scaled so its first significant entry is 1."""
    M = np.asarray(M, dtype=complex)
    ev, V = np.linalg.eig(M)
    V = V.copy()
    for i in range(V.shape[1]):
        col = V[:, i]
        big = np.max(np.abs(col))
        j = int(np.flatnonzero(np.abs(col) > 1e-8 * big)[0])
        V[:, i] = col / col[j]
    cond = float(np.linalg.cond(V))
    scale = max(float(np.linalg.norm(M, 2)), 1e-300)
    res = float(np.linalg.norm(M @ V - V * ev, 2) / (scale * max(1.0, np.linalg.norm(V, 2))))
    if not np.isfinite(cond) or cond > max_condition or res > tol:
        raise EigensolverFailure(f"eigenvector matrix condition {cond:.3g}, residual {res:.3g}")
    return Eigensystem(ev, V, res, cond)


def leakage(V: np.ndarray, X: np.ndarray) -> float:
    """Largest off-diagonal entry of V^{-1} X V relative to its largest diagonal entry."""
    T = np.linalg.solve(V, X @ V)
    off = T - np.diag(np.diag(T))
    return float(np.max(np.abs(off)) / max(float(np.max(np.abs(np.diag(T)))), 1e-300))


@dataclass
class MarchResult:
    coefficients: np.ndarray
    tail_residual: float
    terminates: bool


def recurrence_march_N1(Lambda, alpha, q, bp: BoundaryParams, cutoff: int,
                        tol: float = 1e-8, breakdown_tol: float = 1e-14) -> MarchResult:
    """March f_{n+1} = -(f_{n-1} B_{n-1} + f_n (A_n - Lambda)) / C_{n+1} from f_{-1} = 0, f_0 = 1.

    ``tail_residual`` is the relative residual of equation ``cutoff`` with
    f_{cutoff+1} = 0; it vanishes when Lambda is an eigenvalue of the truncated problem.
    """
    alpha = as_alpha(alpha, 1)
    coef = [i1_coefficients((m,), alpha, q, bp) for m in range(cutoff + 2)]
    B = lambda m: coef[m][(1,)][1]
    C = lambda m: coef[m][(-1,)][1]
    A = lambda m: coef[m][(0,)][1]
    f = np.zeros(cutoff + 1, dtype=complex)
    f[0] = 1.0
    for m in range(cutoff):
        prev = f[m - 1] * B(m - 1) if m >= 1 else 0.0
        c = C(m + 1)
        if abs(c) < breakdown_tol:
            raise RecurrenceBreakdown(f"lowering coefficient vanishes at n = {m + 1}")
        f[m + 1] = -(prev + f[m] * (A(m) - Lambda)) / c
    last = cutoff
    prev = f[last - 1] * B(last - 1) if last >= 1 else 0.0
    tail = prev + f[last] * (A(last) - Lambda)
    scale = max(abs(prev), abs(f[last] * A(last)), abs(f[last] * Lambda), 1e-300)
    r = abs(tail) / scale
    return MarchResult(f, r, r < tol)


def galerkin_spectrum(alpha, q, bp: BoundaryParams, max_grade: int) -> np.ndarray:
    """Eigenvalues of I_1 restricted to polynomial degrees <= max_grade (infinite modules)."""
    alpha = as_alpha(alpha)
    N = alpha.size - 3
    from .gr_poly import multi_indices
    idx = multi_indices(N, max_grade)
    pos = {n: i for i, n in enumerate(idx)}
    M = np.zeros((len(idx), len(idx)), dtype=complex)
    for col, n in enumerate(idx):
        for s, (_, c) in i1_coefficients(n, alpha, q, bp).items():
            m = tuple(a + b for a, b in zip(n, s))
            if m in pos:
                M[pos[m], col] += c
    return np.linalg.eigvals(M)
