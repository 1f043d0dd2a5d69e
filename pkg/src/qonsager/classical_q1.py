"""The q = 1 track: multivariable Krawtchouk and Racah polynomials and their Onsager / tridiagonal modules."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np
from scipy.special import gammaln, gammasgn

from .errors import DegenerateDenominator, InvalidParameters
from .gr_poly import as_multi_index
from .qcore import pochhammer, sum_divfree

DEGENERACY_TOL = 1e-14


class DegeneratePrefactor(DegenerateDenominator):
    """The normalising Pochhammer prefactor vanishes."""


class IllConditionedGram(InvalidParameters):
    """The discrete Gram matrix cannot be inverted reliably."""


# ---------------------------------------------------------------- Krawtchouk

@dataclass(frozen=True)
class KrawtchoukParams:
    alpha: tuple
    M: float

    def __post_init__(self):
        a = tuple(float(v) for v in self.alpha)
        if not a or any(v == 0 for v in a):
            raise InvalidParameters("Krawtchouk parameters must be nonzero")
        object.__setattr__(self, "alpha", a)
        object.__setattr__(self, "M", float(self.M))

    @property
    def N(self) -> int:
        return len(self.alpha)

    def partial(self, j: int) -> float:
        """A_j = alpha_1 + ... + alpha_j, with A_0 = 0."""
        return float(sum(self.alpha[:j]))


def meixner_params(c: Sequence[float], s: float) -> KrawtchoukParams:
    """Parameters turning the Krawtchouk product into the Meixner one."""
    c = [float(v) for v in c]
    tot = sum(c) - 1.0
    return KrawtchoukParams(tuple(v / tot for v in c), -float(s))


def dual_params(kp: KrawtchoukParams) -> KrawtchoukParams:
    """Parameter part of the duality map: alpha_j -> alpha_{N+1-j}(1-A_N)/((1-A_{N+1-j})(1-A_{N-j}))."""
    N = kp.N
    AN = kp.partial(N)
    new = []
    for j in range(1, N + 1):
        new.append(kp.alpha[N - j] * (1 - AN) / ((1 - kp.partial(N + 1 - j)) * (1 - kp.partial(N - j))))
    return KrawtchoukParams(tuple(new), kp.M)


def krawtchouk_k(n: int, x, a, b) -> float:
    """(-b)_n 2F1(-n, -x; -b; 1/a), summed without dividing by (-b)_k."""
    if a == 0:
        raise DegenerateDenominator("Krawtchouk parameter a must be nonzero")
    return sum_divfree((-n, -x), (-b,), 1.0 / a, int(n)).real


def krawtchouk_Khat(n, x, kp: KrawtchoukParams) -> float:
    """Normalised N-variable Krawtchouk polynomial; K-hat_0 = 1."""
    n = as_multi_index(n)
    N = kp.N
    if len(n) != N or len(x) != N:
        raise InvalidParameters(f"n and x must have length {N}")
    total = sum(n)
    pref = pochhammer(-kp.M, total).real
    if abs(pref) < DEGENERACY_TOL:
        raise DegeneratePrefactor(f"(-M)_{total} vanishes for M = {kp.M}")
    out = 1.0
    Nj = np.cumsum((0,) + n)
    Xj = np.cumsum((0,) + tuple(x))
    for j in range(1, N + 1):
        a = kp.alpha[j - 1] / (1 - kp.partial(j - 1))
        b = kp.M - total + Nj[j] - Xj[j - 1]
        out *= krawtchouk_k(n[j - 1], x[j - 1], a, b)
        if out == 0:
            break
    return out / pref


def krawtchouk_weight(x, kp: KrawtchoukParams) -> float:
    """Orthogonality weight on {x in N^N : X_N <= M} (integer M, A_N < 1)."""
    N = kp.N
    AN = kp.partial(N)
    X = int(sum(x))
    logw = -gammaln(kp.M - X + 1)
    sign = 1.0
    for k in range(N):
        r = kp.alpha[k] / (1 - AN)
        logw += -gammaln(x[k] + 1) + x[k] * np.log(abs(r))
        if r < 0 and x[k] % 2:
            sign = -sign
    return sign * float(np.exp(logw))


def simplex_grid(N: int, J: int) -> list[tuple[int, ...]]:
    """{x in N^N : x_1 + ... + x_N <= J}, graded by total then lexicographic."""
    pts = [p for p in itertools.product(range(J + 1), repeat=N) if sum(p) <= J]
    return sorted(pts, key=lambda p: (sum(p), tuple(-v for v in p)))


def lstencil(x: Sequence[int], alpha: Sequence[float], M: float) -> list:
    """Stencil of the Krawtchouk operator L_N(x, alpha; M): [(shift, coefficient)]."""
    N = len(x)
    X = float(sum(x))
    A = float(sum(alpha))
    out = []
    e = np.eye(N, dtype=int)
    for i in range(N):
        out.append((tuple(e[i]), (X - M) * alpha[i]))
        out.append((tuple(-e[i]), (A - 1) * x[i]))
        for j in range(N):
            if j != i:
                out.append((tuple(e[i] - e[j]), -alpha[i] * x[j]))
    diag = X + A * (M - X) - sum(a * v for a, v in zip(alpha, x))
    out.append(((0,) * N, diag))
    return out


def dIstar_stencil(l: int, x: Sequence[int], kp: KrawtchoukParams) -> list:
    """Stencil of dI*^{(l)} at x: L_l in the last l variables with rescaled parameters."""
    N = kp.N
    if not 1 <= l <= N:
        raise InvalidParameters(f"l must be in 1..{N}")
    head = N - l
    scale = 1 - kp.partial(head)
    sub = lstencil(tuple(x[head:]), [a / scale for a in kp.alpha[head:]], kp.M - sum(x[:head]))
    return [((0,) * head + s, c) for s, c in sub]


def apply_dIstar(l: int, f: Callable, x, kp: KrawtchoukParams) -> float:
    x = tuple(int(v) for v in x)
    return sum(c * f(tuple(a + b for a, b in zip(x, s))) for s, c in dIstar_stencil(l, x, kp) if c != 0)


def apply_dI_dual(l: int, g: Callable, n, kp: KrawtchoukParams) -> float:
    """Dual operator on degree functions: dI*^{(l)} with dual parameters in reversed variables."""
    rev = lambda t: tuple(reversed(tuple(t)))
    return apply_dIstar(l, lambda y: g(rev(y)), rev(n), dual_params(kp))


def dIstar_eigenvalue(l: int, n) -> int:
    """N_N - N_{N-l}: the sum of the last l degrees."""
    return int(sum(tuple(n)[len(n) - l:]))


def dI_dual_eigenvalue(l: int, x) -> int:
    """Sum of the first l variables."""
    return int(sum(tuple(x)[:l]))


def dg_scalar_identity(v: float) -> tuple[float, float]:
    """v^2 - 2 v (v +/- 1) + (v +/- 1)^2 - 1 for both signs (both vanish)."""
    return tuple(v * v - 2 * v * (v + s) + (v + s) ** 2 - 1 for s in (1, -1))


@dataclass
class Q1Module:
    N: int
    J: int
    l: int
    grid: list
    W0: np.ndarray
    W1: np.ndarray
    leakage: float
    dg_residuals: tuple
    W1_spectrum: np.ndarray
    expected_spectrum: np.ndarray
    info: dict = field(default_factory=dict)


def operator_matrix_on_grid(l: int, kp: KrawtchoukParams, grid) -> tuple[np.ndarray, float]:
    """Matrix of dI*^{(l)} acting on function values over the grid, and the largest coefficient leaving it."""
    pos = {p: i for i, p in enumerate(grid)}
    L = np.zeros((len(grid), len(grid)))
    leak = 0.0
    for r, x in enumerate(grid):
        for s, c in dIstar_stencil(l, x, kp):
            y = tuple(a + b for a, b in zip(x, s))
            if y in pos:
                L[r, pos[y]] += c
            elif c != 0:
                leak = max(leak, abs(c))
    return L, leak


def build_onsager_module_q1(J: int, alpha: Sequence[float], l: int | None = None) -> Q1Module:
    """Finite module with M = J on the simplex grid: W0 = X_{N+1-l} (diagonal), W1 = dI*^{(l)}."""
    from .onsager_modules import qdg_residuals

    kp = KrawtchoukParams(tuple(alpha), J)
    N = kp.N
    l = N if l is None else l
    if any(abs(1 - kp.partial(j)) < DEGENERACY_TOL for j in range(N + 1)):
        raise InvalidParameters("1 - A_j must not vanish")
    grid = simplex_grid(N, J)
    W1, leak = operator_matrix_on_grid(l, kp, grid)
    W0 = np.diag([float(sum(x[: N + 1 - l])) for x in grid])
    res = qdg_residuals(W0, W1, 1.0, 1.0)
    spec = np.sort(np.linalg.eigvals(W1).real)
    expected = np.sort([float(dIstar_eigenvalue(l, n)) for n in simplex_grid(N, J)])
    return Q1Module(N, J, l, grid, W0, W1, leak, res, spec, expected)


# ---------------------------------------------------------------- Racah

@dataclass(frozen=True)
class RacahParams:
    zeta: tuple
    M: int

    def __post_init__(self):
        object.__setattr__(self, "zeta", tuple(float(v) for v in self.zeta))
        if len(self.zeta) < 3:
            raise InvalidParameters("need zeta_0 .. zeta_{N+1} with N >= 1")
        if int(self.M) != self.M or self.M < 1:
            raise InvalidParameters("M must be a positive integer")
        object.__setattr__(self, "M", int(self.M))

    @property
    def N(self) -> int:
        return len(self.zeta) - 2


def racah_r(n: int, x, a, b, c, d) -> float:
    """(a+1)_n (b+d+1)_n (c+1)_n 4F3(-n, n+a+b+1, -x, x+c+d+1; a+1, b+d+1, c+1; 1)."""
    return sum_divfree((-n, n + a + b + 1, -x, x + c + d + 1), (a + 1, b + d + 1, c + 1), 1.0, int(n)).real


def racah_Rhat(n, x, rp: RacahParams) -> float:
    """Normalised N-variable Racah polynomial on 0 <= x_1 <= ... <= x_N <= M."""
    n = as_multi_index(n)
    N = rp.N
    z = rp.zeta
    if len(n) != N or len(x) != N:
        raise InvalidParameters(f"n and x must have length {N}")
    total = sum(n)
    xs = tuple(x) + (rp.M,)
    Nk = np.cumsum((0,) + n)
    num = 1.0
    den = (pochhammer(-rp.M, total) * pochhammer(-rp.M - z[0], total)).real
    for k in range(1, N + 1):
        den *= pochhammer(z[k + 1] - z[k], n[k - 1]).real
        P = Nk[k - 1]
        num *= racah_r(n[k - 1], -P + xs[k - 1], 2 * P + z[k] - z[0] - 1, z[k + 1] - z[k] - 1,
                       P - xs[k] - 1, P + z[k] + xs[k])
        if num == 0:
            break
    if abs(den) < DEGENERACY_TOL:
        raise DegeneratePrefactor(f"Racah normalisation vanishes at n = {n}")
    return num / den


def racah_weight(x, rp: RacahParams) -> float:
    """Orthogonality weight with x_0 = 0 and x_{N+1} = M (computed through log-gamma)."""
    z = rp.zeta
    N = rp.N
    xs = (0,) + tuple(x) + (rp.M,)
    logw, sign = 0.0, 1.0
    for k in range(N + 1):
        for arg, s in ((z[k + 1] - z[k] + xs[k + 1] - xs[k], 1), (z[k + 1] + xs[k + 1] + xs[k], 1),
                       (xs[k + 1] - xs[k] + 1, -1), (z[k] + 1 + xs[k + 1] + xs[k], -1)):
            logw += s * gammaln(arg)
            sign *= gammasgn(arg)
    for k in range(1, N + 1):
        v = z[k] + 2 * xs[k]
        logw += np.log(abs(v))
        sign *= np.sign(v)
    return float(sign * np.exp(logw))


def ordered_simplex(N: int, M: int) -> list[tuple[int, ...]]:
    return [p for p in itertools.combinations_with_replacement(range(M + 1), N)]


def racah_degrees(N: int, M: int) -> list[tuple[int, ...]]:
    return simplex_grid(N, M)


def racah_lambda_star(l: int, n, zeta) -> float:
    P = sum(tuple(n)[:l])
    return -(zeta[l + 1] - zeta[0]) * P - P * (P - 1)


def racah_lambda(l: int, x, zeta) -> float:
    N = len(zeta) - 2
    v = x[N - l]
    return -(1 + zeta[N + 1 - l]) * v - v * (v - 1)


def racah_td_parameters(l: int, zeta) -> dict:
    N = len(zeta) - 2
    return {"beta": 2.0, "gamma": -2.0, "gamma_star": -2.0,
            "rho": zeta[N + 1 - l] ** 2 - 1, "rho_star": (zeta[0] - zeta[l + 1] + 1) ** 2 - 1}


@dataclass
class RacahReport:
    N: int
    M: int
    l: int
    gram_offdiag: float
    td_residuals: tuple
    blocktri_violation: float
    weight_positive: bool
    parameters: dict


def racah_gram_and_td_check(rp: RacahParams, l: int) -> RacahReport:
    """Discrete orthogonality, then A = lambda_x expanded in the basis and A* = diag lambda*."""
    from .onsager_modules import td_relation_residuals

    N, M = rp.N, rp.M
    xs = ordered_simplex(N, M)
    ns = racah_degrees(N, M)
    R = np.array([[racah_Rhat(n, x, rp) for n in ns] for x in xs])
    w = np.array([racah_weight(x, rp) for x in xs])
    G = R.T @ (w[:, None] * R)
    d = np.sqrt(np.abs(np.diag(G)))
    if np.any(d == 0):
        raise IllConditionedGram("zero norm in the Gram matrix")
    off = G / np.outer(d, d)
    gram_off = float(np.max(np.abs(off - np.diag(np.diag(off)))))
    lam = np.array([racah_lambda(l, x, rp.zeta) for x in xs])
    Gd = np.diag(G)
    # column placement: lambda_x R_n = sum_m A[m, n] R_m
    A = (R.T @ (w[:, None] * lam[:, None] * R)) / Gd[:, None]
    As = np.diag([racah_lambda_star(l, n, rp.zeta) for n in ns])
    p = racah_td_parameters(l, rp.zeta)
    res = td_relation_residuals(A, As, p["beta"], p["gamma"], p["gamma_star"], p["rho"], p["rho_star"])
    grades = np.array([sum(n[:l]) for n in ns])
    far = np.abs(grades[:, None] - grades[None, :]) > 1
    scale = float(np.max(np.abs(A)))
    viol = float(np.max(np.abs(A[far]))) / scale if far.any() else 0.0
    return RacahReport(N, M, l, gram_off, res, viol, bool(np.all(w > 0)), p)
