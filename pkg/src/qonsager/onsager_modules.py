"""Finite-dimensional q-Onsager modules built from truncated recurrence matrices.

Matrix convention: an operator X is stored so that X v_n = sum_m X[m, n] v_m,
i.e. column n holds the image of the basis vector labelled n.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from .errors import (AmbiguousFit, IncompatibleSpins, InvalidParameters)
from .gr_poly import as_alpha, box_indices, involution_alpha, restricted_Qtilde
from .qcore import qpow, validate_q
from .qdiff_ops import dstar_eigenvalue, recurrence_coefficients


def onsager_rho(q) -> complex:
    """rho = -(q^2 - q^{-2})^2 / 4 for the difference-operator realisation."""
    q = complex(q)
    return -((q**2 - q**-2) ** 2) / 4


def as_spins(spins) -> tuple[Fraction, ...]:
    out = []
    for j in spins:
        if isinstance(j, str):
            try:
                j = Fraction(j)
            except ValueError as exc:
                raise IncompatibleSpins(f"cannot read spin {j!r}") from exc
        f = Fraction(j).limit_denominator(4) if not isinstance(j, Fraction) else j
        if f <= 0 or (2 * f).denominator != 1 or abs(float(f) - float(j)) > 1e-12:
            raise IncompatibleSpins(f"spins must be positive half-integers, got {spins}")
        out.append(f)
    if not out:
        raise IncompatibleSpins("at least one spin is required")
    return tuple(out)


def alpha_from_spins(spins, beta, beta_star, q) -> np.ndarray:
    """Parameters of the finite module with spins j_1..j_N.

    alpha_0 = q^{beta* - beta - 1}, alpha_1 = q^{-beta}, alpha_{k+1} = alpha_k q^{-2 j_k},
    alpha_{N+2} = q^{-beta}. The three named families (one spin, two spins,
    all spins 1/2) are special cases.
    """
    spins = as_spins(spins)
    q = validate_q(q)
    N = len(spins)
    a = np.empty(N + 3, dtype=complex)
    a[0] = qpow(q, complex(beta_star) - complex(beta) - 1)
    a[1] = qpow(q, -complex(beta))
    for k, j in enumerate(spins, start=1):
        a[k + 1] = a[k] * q ** (-int(2 * j))
    a[N + 2] = qpow(q, -complex(beta))
    return a


def check_spin_constraint(alpha, spins, q, tol: float = 1e-10) -> None:
    """Raise unless alpha_{k+1} / alpha_k = q^{-2 j_k} for every k."""
    spins = as_spins(spins)
    alpha = as_alpha(alpha, len(spins))
    q = complex(q)
    for k, j in enumerate(spins, start=1):
        want = q ** (-int(2 * j))
        got = alpha[k + 1] / alpha[k]
        if abs(got - want) > tol * abs(want):
            raise IncompatibleSpins(f"alpha_{k + 1}/alpha_{k} = {got} but q^(-2 j_{k}) = {want}")


@dataclass(frozen=True)
class ModuleSpec:
    """Finite module data. ``family`` is informational: 'N1', 'N2', 'spin_half' or 'general'."""

    spins: tuple
    beta: complex
    beta_star: complex
    q: complex
    family: str = "general"

    def __post_init__(self):
        spins = as_spins(self.spins)
        object.__setattr__(self, "spins", spins)
        validate_q(self.q)
        if self.family == "N1" and len(spins) != 1:
            raise IncompatibleSpins("family N1 needs exactly one spin")
        if self.family == "N2" and len(spins) != 2:
            raise IncompatibleSpins("family N2 needs exactly two spins")
        if self.family == "spin_half" and any(j != Fraction(1, 2) for j in spins):
            raise IncompatibleSpins("family spin_half needs all spins equal to 1/2")

    @property
    def N(self) -> int:
        return len(self.spins)

    @property
    def alpha(self) -> np.ndarray:
        return alpha_from_spins(self.spins, self.beta, self.beta_star, self.q)

    @property
    def limits(self) -> tuple[int, ...]:
        return tuple(int(2 * j) for j in self.spins)

    @property
    def dimension(self) -> int:
        return int(np.prod([m + 1 for m in self.limits]))

    @property
    def diameter(self) -> int:
        return sum(self.limits)


@dataclass
class GradedBasis:
    """Multi-indices in a box 0 <= n_k <= limits[k], graded by total degree."""

    limits: tuple
    indices: list = field(init=False)
    position: dict = field(init=False)

    def __post_init__(self):
        self.limits = tuple(int(m) for m in self.limits)
        self.indices = box_indices(self.limits)
        self.position = {n: i for i, n in enumerate(self.indices)}

    def __len__(self):
        return len(self.indices)

    def __contains__(self, n):
        return tuple(n) in self.position

    def grade(self, i: int) -> int:
        return sum(self.indices[i])

    def grades(self) -> np.ndarray:
        return np.array([sum(n) for n in self.indices])


@dataclass
class OperatorMatrix:
    """Matrix with its basis and the largest coupling that left the box during assembly."""

    matrix: np.ndarray
    basis: GradedBasis
    leakage: float = 0.0
    leaks: list = field(default_factory=list)


def diagonal_eigenvalues(basis: GradedBasis, alpha, q) -> np.ndarray:
    """theta*_n = (alpha_0 q q^{-2|n|} / alpha_{N+1} + alpha_{N+1} q^{2|n|} / (alpha_0 q)) / 2."""
    return np.array([dstar_eigenvalue(n, alpha, q) / 2 for n in basis.indices])


def build_W1_diag(spec: ModuleSpec) -> OperatorMatrix:
    basis = GradedBasis(spec.limits)
    return OperatorMatrix(np.diag(diagonal_eigenvalues(basis, spec.alpha, spec.q)), basis)


def assemble_recurrence(basis: GradedBasis, alpha, q) -> OperatorMatrix:
    """Truncate the recurrence of x_1 to the box; leaks record couplings leaving it."""
    dim = len(basis)
    M = np.zeros((dim, dim), dtype=complex)
    leaks = []
    for col, n in enumerate(basis.indices):
        for s, (kind, c) in recurrence_coefficients(n, alpha, q).items():
            m = tuple(a + b for a, b in zip(n, s))
            if m in basis.position:
                M[basis.position[m], col] += c
            else:
                leaks.append((n, s, kind, complex(c)))
    leak = max((abs(c) for *_, c in leaks), default=0.0)
    return OperatorMatrix(M, basis, leak, leaks)


def build_W0_blocktri(spec: ModuleSpec) -> OperatorMatrix:
    return assemble_recurrence(GradedBasis(spec.limits), spec.alpha, spec.q)


def dual_alpha(spec: ModuleSpec) -> np.ndarray:
    """Parameters of the dual description (the duality map applied to alpha)."""
    return involution_alpha(spec.alpha, spec.q)


def build_dual_pair(spec: ModuleSpec) -> tuple[OperatorMatrix, OperatorMatrix]:
    """(W0, W1) in the basis labelled by the discrete support.

    W0 is diagonal with theta_n~ and W1 is the truncated recurrence assembled
    from the dual parameters. The dual box uses the spins in reverse order.
    """
    ad = dual_alpha(spec)
    basis = GradedBasis(tuple(reversed(spec.limits)))
    W0 = OperatorMatrix(np.diag(diagonal_eigenvalues(basis, ad, spec.q)), basis)
    W1 = assemble_recurrence(basis, ad, spec.q)
    return W0, W1


def overlap_matrix(spec: ModuleSpec) -> np.ndarray:
    """S[n~, n] = Q-hat_n on the discrete support point n~."""
    alpha = spec.alpha
    primal = GradedBasis(spec.limits)
    dual = GradedBasis(tuple(reversed(spec.limits)))
    S = np.empty((len(dual), len(primal)), dtype=complex)
    for i, nt in enumerate(dual.indices):
        for j, n in enumerate(primal.indices):
            S[i, j] = restricted_Qtilde(n, nt, alpha, spec.q)
    return S


def _norm(X) -> float:
    return float(np.linalg.norm(X, 2)) if X.size else 0.0


def q_commutator(X, Y, q):
    """[X, Y]_q = q X Y - q^{-1} Y X."""
    q = complex(q)
    return q * X @ Y - Y @ X / q


def qdg_residuals(A, B, q, rho) -> tuple[float, float]:
    """Relative residuals of both q-Dolan-Grady relations.

    [A, [A, [A, B]_q]_{q^{-1}}] = rho [A, B] is measured against |A|^3 |B|, and the
    same with A and B exchanged.
    """
    A = np.asarray(A, dtype=complex)
    B = np.asarray(B, dtype=complex)
    q = complex(q)

    def one(X, Y):
        inner = q_commutator(X, Y, q)
        mid = q_commutator(X, inner, 1 / q)
        lhs = X @ mid - mid @ X
        rhs = rho * (X @ Y - Y @ X)
        scale = _norm(X) ** 3 * _norm(Y)
        return _norm(lhs - rhs) / scale if scale else _norm(lhs - rhs)

    return one(A, B), one(B, A)


def verify_qdg(A, B, q, rho, tol: float = 1e-8) -> tuple[bool, float]:
    r = max(qdg_residuals(A, B, q, rho))
    return r < tol, r


def td_relation_residuals(A, B, beta, gamma, gamma_star, rho, rho_star) -> tuple[float, float]:
    """Residuals of the two tridiagonal relations with general (beta, gamma, gamma*, rho, rho*)."""
    A = np.asarray(A, dtype=complex)
    B = np.asarray(B, dtype=complex)

    def one(X, Y, g, r):
        inner = X @ X @ Y - beta * X @ Y @ X + Y @ X @ X - g * (X @ Y + Y @ X) - r * Y
        lhs = X @ inner - inner @ X
        nx, ny = _norm(X), _norm(Y)
        scale = nx * (nx * nx * ny * (2 + abs(beta)) + 2 * abs(g) * nx * ny + abs(r) * ny)
        return _norm(lhs) / scale if scale else _norm(lhs)

    return one(A, B, gamma, rho), one(B, A, gamma_star, rho_star)


def distinct_eigenvalues(A, tol: float = 1e-7) -> tuple[np.ndarray, np.ndarray]:
    """Cluster the eigenvalues of A; returns (representatives, multiplicities)."""
    ev = np.linalg.eigvals(np.asarray(A, dtype=complex))
    scale = max(1.0, float(np.max(np.abs(ev)))) if ev.size else 1.0
    reps, mult = [], []
    for v in sorted(ev, key=lambda c: (c.real, c.imag)):
        for i, r in enumerate(reps):
            if abs(v - r) <= tol * scale:
                mult[i] += 1
                reps[i] = r + (v - r) / mult[i]
                break
        else:
            reps.append(v)
            mult.append(1)
    return np.array(reps), np.array(mult)


def eigenspace_projectors(A, reps) -> list[np.ndarray]:
    """Spectral projectors prod_{r != p} (A - theta_r) / (theta_p - theta_r)."""
    A = np.asarray(A, dtype=complex)
    I = np.eye(A.shape[0], dtype=complex)
    out = []
    for p, tp in enumerate(reps):
        E = I.copy()
        for r, tr in enumerate(reps):
            if r != p:
                E = E @ (A - tr * I) / (tp - tr)
        out.append(E)
    return out


@dataclass
class TDPairReport:
    is_td_pair: bool
    diameter: int
    dual_diameter: int
    ordering: list
    dual_ordering: list
    bandwidth: int
    dual_bandwidth: int
    diagonalizable_residual: float
    max_forbidden_coupling: float
    multiplicities: list = field(default_factory=list)
    dual_multiplicities: list = field(default_factory=list)
    reason: str = ""


def _path_order(adj: np.ndarray):
    """Order nodes along paths if the graph is a disjoint union of paths, else None."""
    n = adj.shape[0]
    deg = adj.sum(axis=1)
    if np.any(deg > 2):
        return None
    seen, order = set(), []
    starts = [i for i in range(n) if deg[i] <= 1] + list(range(n))
    for s in starts:
        if s in seen:
            continue
        if deg[s] == 2:
            return None  # only cycles remain
        cur, prev = s, -1
        while True:
            seen.add(cur)
            order.append(cur)
            nxt = [j for j in np.flatnonzero(adj[cur]) if j != prev and j not in seen]
            if not nxt:
                break
            prev, cur = cur, nxt[0]
    return order if len(order) == n else None


def _one_direction(A, B, tol):
    reps, mult = distinct_eigenvalues(A)
    Es = eigenspace_projectors(A, reps)
    I = np.eye(A.shape[0])
    minpoly = I.astype(complex)
    for t in reps:
        minpoly = minpoly @ (A - t * I)
    scale = max(1.0, _norm(A)) ** len(reps)
    diag_res = _norm(minpoly) / scale
    nb = max(_norm(B), 1e-300)
    k = len(reps)
    coupling = np.zeros((k, k))
    for p in range(k):
        for r in range(k):
            if p != r:
                coupling[p, r] = _norm(Es[p] @ B @ Es[r]) / (nb * max(1.0, _norm(Es[p])) * max(1.0, _norm(Es[r])))
    adj = ((coupling > tol) | (coupling.T > tol)).astype(int)
    order = _path_order(adj)
    if order is None:
        forbidden = float(np.max(coupling))
        return reps, mult, None, 0, diag_res, forbidden
    pos = {v: i for i, v in enumerate(order)}
    forbidden = 0.0
    for p in range(k):
        for r in range(k):
            if abs(pos[p] - pos[r]) > 1:
                forbidden = max(forbidden, coupling[p, r])
    bandwidth = int(adj.any())
    return reps, mult, order, bandwidth, diag_res, forbidden


def verify_td_pair(A, B, tol: float = 1e-7) -> TDPairReport:
    """Check the defining properties of a tridiagonal pair numerically.

    Both maps must be diagonalisable, each must act on the other's eigenspaces
    with bandwidth at most one for some ordering, and the two diameters must agree.
    A pair where one map preserves every eigenspace of the other (bandwidth 0) passes.
    """
    A = np.asarray(A, dtype=complex)
    B = np.asarray(B, dtype=complex)
    ra, ma, oa, bwa, da, fa = _one_direction(A, B, tol)
    rb, mb, ob, bwb, db, fb = _one_direction(B, A, tol)
    reason = []
    if max(da, db) > 1e-6:
        reason.append("not diagonalisable")
    if oa is None or ob is None:
        reason.append("no ordering with bandwidth <= 1")
    if len(ra) != len(rb):
        reason.append("diameters differ")
    ok = not reason
    return TDPairReport(ok, len(ra) - 1, len(rb) - 1,
                        [complex(ra[i]) for i in (oa or range(len(ra)))],
                        [complex(rb[i]) for i in (ob or range(len(rb)))],
                        bwa, bwb, max(da, db), max(fa, fb),
                        [int(ma[i]) for i in (oa or range(len(ra)))],
                        [int(mb[i]) for i in (ob or range(len(rb)))],
                        "; ".join(reason))


@dataclass
class SpectrumFit:
    case: str
    coefficients: tuple
    residual: float
    residuals: dict
    degenerate: bool


def _case_bases(d: int, q):
    p = np.arange(d + 1, dtype=float)
    q = complex(q)
    sign = (-1.0) ** p
    bases = {
        "II": np.stack([np.ones_like(p), p, p * (p - 1) / 2], axis=1).astype(complex),
        "III": np.stack([np.ones_like(p), sign, p * sign], axis=1).astype(complex),
    }
    if abs(q - 1) > 1e-12:
        bases["I"] = np.stack([np.ones(d + 1), q ** (2 * p - d), q ** (d - 2 * p)], axis=1)
    return bases


def classify_spectrum(eigs: Sequence, q, tol: float = 1e-8) -> SpectrumFit:
    """Fit an ordered eigenvalue sequence to the three parametric forms.

    Case I: a + b q^{2p-d} + c q^{d-2p}; Case II: a + b p + c p(p-1)/2;
    Case III: a + b (-1)^p + c p (-1)^p. Needs at least four eigenvalues,
    otherwise every case fits. ``degenerate`` flags a fit whose leading
    coefficient vanishes (e.g. an arithmetic sequence in Case II has c = 0).
    """
    th = np.asarray(eigs, dtype=complex)
    d = th.size - 1
    if d < 3:
        raise AmbiguousFit("at least four eigenvalues are needed to separate the cases")
    scale = max(float(np.linalg.norm(th)), 1e-300)
    res, coef = {}, {}
    for name, X in _case_bases(d, q).items():
        c, *_ = np.linalg.lstsq(X, th, rcond=None)
        res[name] = float(np.linalg.norm(X @ c - th)) / scale
        coef[name] = tuple(complex(v) for v in c)
    fits = [k for k, v in res.items() if v < tol]
    if len(fits) > 1:
        raise AmbiguousFit(f"cases {fits} all fit within {tol}")
    best = min(res, key=res.get)
    cs = coef[best]
    cscale = max(abs(v) for v in cs) or 1.0
    degenerate = abs(cs[2]) < 1e-8 * cscale if best != "I" else (abs(cs[1]) < 1e-8 * cscale or abs(cs[2]) < 1e-8 * cscale)
    return SpectrumFit(best, cs, res[best], res, degenerate)


def reduction_scale(beta, gamma, rho_tilde, rho) -> complex:
    """Factor c with A = c (A~ + gamma / (beta - 2) I)."""
    return np.sqrt(complex(rho)) / np.sqrt(complex(rho_tilde) + complex(gamma) ** 2 / (2 - complex(beta)))


def reduce_sequence(A_tilde, beta, gamma, rho_tilde, rho) -> np.ndarray:
    """Map a tridiagonal-relation element with (beta, gamma, rho~) to one with gamma = 0 and rho."""
    A_tilde = np.asarray(A_tilde, dtype=complex)
    c = reduction_scale(beta, gamma, rho_tilde, rho)
    return c * (A_tilde + complex(gamma) / (complex(beta) - 2) * np.eye(A_tilde.shape[0]))


def unreduce_sequence(A, beta, gamma, rho_tilde, rho) -> np.ndarray:
    """Inverse of :func:`reduce_sequence`."""
    A = np.asarray(A, dtype=complex)
    c = reduction_scale(beta, gamma, rho_tilde, rho)
    return A / c - complex(gamma) / (complex(beta) - 2) * np.eye(A.shape[0])


def module_pair(spec: ModuleSpec) -> tuple[np.ndarray, np.ndarray]:
    """(W0, W1) matrices of the finite module in the polynomial basis."""
    return build_W0_blocktri(spec).matrix, build_W1_diag(spec).matrix


def dump_module(spec: ModuleSpec) -> dict:
    """JSON-ready description of the module."""
    W0 = build_W0_blocktri(spec)
    W1 = build_W1_diag(spec)
    return {
        "spins": [str(j) for j in spec.spins],
        "beta": complex(spec.beta),
        "beta_star": complex(spec.beta_star),
        "q": complex(spec.q),
        "family": spec.family,
        "alpha": [complex(a) for a in spec.alpha],
        "basis": [list(n) for n in W0.basis.indices],
        "W0": W0.matrix,
        "W1": W1.matrix,
        "truncation_leakage": W0.leakage,
    }


def closed_form_theta_star(spec: ModuleSpec, total: int) -> complex:
    """Eigenvalue of W1 on grade `total`, written through beta* and the spins."""
    q = complex(spec.q)
    d = spec.diameter
    e = spec.beta_star + d - 2 * total
    return (q**e + q**-e) / 2


def closed_form_theta(spec: ModuleSpec, total: int) -> complex:
    """Eigenvalue of W0 on dual grade `total`, written through beta and the spins."""
    q = complex(spec.q)
    d = spec.diameter
    e = spec.beta + d - 2 * total
    return (q**e + q**-e) / 2


def listed_vanishing_coefficients(spec: ModuleSpec) -> list[tuple[str, tuple, complex]]:
    """Recurrence coefficients that must vanish on the box, from the hand-written tables.

    Returns (label, n, value). N = 1 and N = 2 only.
    """
    from .qdiff_ops import reference_coefficients

    N = spec.N
    lim = spec.limits
    alpha, q = spec.alpha, spec.q
    out = []

    def coef(n, s):
        return reference_coefficients(N, n, alpha, q)[s][1]

    if N == 1:
        out.append(("b at n = 2j", (lim[0],), coef((lim[0],), (1,))))
        out.append(("c at n = 0", (0,), coef((0,), (-1,))))
        return out
    if N != 2:
        raise InvalidParameters("the tables cover N = 1 and N = 2")
    m1, m2 = lim
    rules = [
        ("c[-1,0] at n1 = 0", (-1, 0), lambda n: n[0] == 0),
        ("c[0,-1] at n2 = 0", (0, -1), lambda n: n[1] == 0),
        ("c[1,-2] at n2 = 0", (1, -2), lambda n: n[1] == 0),
        ("c[1,-2] at n2 = 1", (1, -2), lambda n: n[1] == 1),
        ("c[1,-2] at n1 = 2j1", (1, -2), lambda n: n[0] == m1),
        ("b[1,0] at n1 = 2j1", (1, 0), lambda n: n[0] == m1),
        ("b[0,1] at n2 = 2j2", (0, 1), lambda n: n[1] == m2),
        ("b[-1,2] at n2 = 2j2", (-1, 2), lambda n: n[1] == m2),
        ("b[-1,2] at n2 = 2j2-1", (-1, 2), lambda n: n[1] == m2 - 1),
        ("b[-1,2] at n1 = 0", (-1, 2), lambda n: n[0] == 0),
        ("a[1,-1] at n2 = 0", (1, -1), lambda n: n[1] == 0),
        ("a[-1,1] at n1 = 0", (-1, 1), lambda n: n[0] == 0),
        ("a[1,-1] at n1 = 2j1", (1, -1), lambda n: n[0] == m1),
        ("a[-1,1] at n2 = 2j2", (-1, 1), lambda n: n[1] == m2),
    ]
    for label, s, pred in rules:
        for n in box_indices(lim):
            if pred(n):
                out.append((label, n, coef(n, s)))
    return out
