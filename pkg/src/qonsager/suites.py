"""Verification suites driven by the command line and by the acceptance tests.

Each suite takes a parameter dict (already merged with its defaults) and a
numpy Generator and returns (checks, tables).
"""

from __future__ import annotations

import itertools
from typing import Callable

import numpy as np
from scipy.optimize import linear_sum_assignment

from . import classical_q1 as cq
from .gr_poly import (discrete_support_point, dual_Qhat_at, multi_indices, normalized_Qhat,
                      random_generic_alpha, random_point)
from .hierarchy import (RELATIONS, BoundaryParams, build_H, build_I, check_window, dual_I,
                        i1_dual_matrix, i1_matrix_from_coefficients, leakage, solve_finite_spectrum,
                        solve_nepomechie)
from .ladder import verify_ladder
from .onsager_modules import (GradedBasis, ModuleSpec, build_dual_pair, build_W0_blocktri, build_W1_diag,
                              classify_spectrum, closed_form_theta, closed_form_theta_star,
                              listed_vanishing_coefficients, onsager_rho, qdg_residuals, verify_td_pair)
from .ortho import quadrature_gram
from .qdiff_ops import (apply_stencil_terms, dstar_eigenvalue, dstar_stencil, dstar_stencil_phi,
                        dstar_stencil_cbar, dual_eigenvalue, dual_stencil, recurrence_coefficients,
                        reference_coefficients)
from .reports import Check

DEFAULT_MODULES = [{"spins": ["3/2"]}, {"spins": ["1", "1/2"]}, {"spins": ["1/2", "1/2", "1/2"]}]

DEFAULTS: dict[str, dict] = {
    "verify-bispectral": {"N": [1, 2, 3], "q": [0.7, 0.9], "max_total": 4, "points": 20,
                          "form_samples": 50, "duality_samples": 100},
    "verify-onsager": {"modules": DEFAULT_MODULES, "beta": [0.3, 0.2], "beta_star": [-0.4, 0.1], "q": 0.7},
    "build-module": {"spins": ["1", "1/2"], "beta": [0.3, 0.2], "beta_star": [-0.4, 0.1], "q": 0.7},
    "spectrum": {"modules": DEFAULT_MODULES, "beta": [0.3, 0.2], "beta_star": [-0.4, 0.1], "q": 0.7,
                 "omega0": [0.7, 0.2], "omega1": [-0.4, 0.3], "g_plus": [0.5, -0.1], "g_minus": [0.3, 0.6],
                 "h0": [1.0, 0.0], "h_minus1": [0.37, 0.0], "h0_prime": [0.1, 0.0]},
    "nepomechie-scan": {"modules": DEFAULT_MODULES, "beta": [0.3, 0.2], "beta_star": [-0.4, 0.1], "q": 0.7,
                        "omega0": [0.7, 0.2], "omega1": [-0.4, 0.3], "g_plus": [0.5, -0.1],
                        "g_minus": [0.3, 0.6]},
    "ladder-check": {"N": [1, 2, 3], "q": 0.5, "max_total": 3, "points": 2},
    "ortho-check": {"alpha_N1": [0.9, 0.5, 0.3, 0.8], "nodes_N1": 2000, "max_total_N1": 5,
                    "alpha_N2": [0.95, 0.6, 0.4, 0.25, 0.9], "nodes_N2": 100, "max_total_N2": 3, "q": 0.7},
    "classical-check": {"krawtchouk_M": [8, 8, 5], "krawtchouk_points": 3, "J": [4, 4, 3],
                        "racah_zeta": [0.4, 1.1, 2.3, 3.7], "racah_M": 5, "duality_samples": 100},
}

SUITES = list(DEFAULTS)


def as_complex(v) -> complex:
    if isinstance(v, (list, tuple)):
        return complex(float(v[0]), float(v[1]))
    return complex(v)


def module_specs(p: dict) -> list[ModuleSpec]:
    out = []
    for m in p["modules"]:
        out.append(ModuleSpec(tuple(m["spins"]), as_complex(m.get("beta", p["beta"])),
                              as_complex(m.get("beta_star", p["beta_star"])), as_complex(m.get("q", p["q"]))))
    return out


def boundary(p: dict) -> BoundaryParams:
    keys = ["omega0", "omega1", "g_plus", "g_minus", "h0", "h_minus1", "h0_prime"]
    return BoundaryParams(**{k: as_complex(p[k]) for k in keys if k in p})


def _rel(lhs, rhs, scale=0.0) -> float:
    return abs(lhs - rhs) / max(abs(rhs), scale, 1e-300)


def _worst(items):
    """(max value, witness) from an iterable of (value, witness)."""
    best, wit = -np.inf, None
    for v, w in items:
        if not np.isfinite(v):
            return float("inf"), w
        if v >= best:
            best, wit = v, w
    return (0.0, None) if wit is None and best == -np.inf else (best, wit)


def _label(spec: ModuleSpec) -> str:
    return "(" + ",".join(str(j) for j in spec.spins) + ")"


# ---------------------------------------------------------------- suites

def bispectral_residuals(N: int, q, alpha, z, max_total: int):
    """Yield (residual, witness) for the variable-side, degree-side and recurrence equations."""
    f = {}

    def Q(n, w=None):
        key = (n, None if w is None else tuple(np.round(w, 15)))
        if w is None:
            w = z
        v = f.get(key)
        if v is None:
            v = f[key] = normalized_Qhat(n, w, alpha, q) if min(n) >= 0 else 0j
        return v

    for k in range(1, N + 1):
        st = dstar_stencil(k, alpha, q)
        for n in multi_indices(N, max_total):
            val, scale = apply_stencil_terms(st, lambda w: normalized_Qhat(n, w, alpha, q), z, q)
            rhs = dstar_eigenvalue(n, alpha, q, k) * Q(n)
            yield _rel(val, rhs, scale), {"eq": "variable", "k": k, "n": n}
            tot, sc = 0j, 0.0
            for s, c in dual_stencil(k, n, alpha, q):
                m = tuple(a + b for a, b in zip(n, s))
                if min(m) < 0:
                    continue
                t = c * Q(m)
                tot += t
                sc += abs(t)
            rhs = dual_eigenvalue(k, z, alpha) * Q(n)
            yield _rel(tot, rhs, sc), {"eq": "degree", "k": k, "n": n}
    for n in multi_indices(N, max_total):
        tot, sc = 0j, 0.0
        for s, (_, c) in recurrence_coefficients(n, alpha, q).items():
            m = tuple(a + b for a, b in zip(n, s))
            if min(m) < 0:
                continue
            t = c * Q(m)
            tot += t
            sc += abs(t)
        rhs = (z[0] + 1 / z[0]) / 2 * Q(n)
        yield _rel(tot, rhs, sc), {"eq": "recurrence", "n": n}


def operator_form_deviation(N: int, q, alpha, z) -> float:
    """Largest entrywise relative gap between the two stencil constructions."""
    worst = 0.0
    for k in range(1, N + 1):
        a = dict(dstar_stencil_phi(k, alpha, q)(z))
        b = dict(dstar_stencil_cbar(k, alpha, q)(z))
        scale = max(abs(v) for v in b.values())
        for s in set(a) | set(b):
            worst = max(worst, abs(a.get(s, 0) - b.get(s, 0)) / scale)
    return worst


def table_deviation(N: int, n, q, alpha) -> float:
    gen = recurrence_coefficients(n, alpha, q)
    ref = reference_coefficients(N, n, alpha, q)
    scale = max(abs(v) for _, v in ref.values())
    return max(abs(gen[s][1] - ref[s][1]) / scale for s in ref)


def duality_residual(N: int, q, rng, max_part: int = 2):
    # larger per-variable degrees make the primal sum ill-conditioned (~1e5 at (3,3,3))
    alpha = random_generic_alpha(N, rng)
    nt = tuple(int(v) for v in rng.integers(0, max_part + 1, N))
    n = tuple(int(v) for v in rng.integers(0, max_part + 1, N))
    z = discrete_support_point(nt, alpha, q)
    lhs = normalized_Qhat(n, z, alpha, q)
    rhs = dual_Qhat_at(n, z, alpha, q)
    return _rel(lhs, rhs), {"N": N, "n": n, "ntilde": nt}


def suite_verify_bispectral(p: dict, rng) -> tuple[list, dict]:
    checks = []
    for N in p["N"]:
        for q in p["q"]:
            def gen():
                for _ in range(p["points"]):
                    alpha = random_generic_alpha(N, rng)
                    z = random_point(N, rng)
                    yield from bispectral_residuals(N, q, alpha, z, p["max_total"])
            v, w = _worst(gen())
            checks.append(Check(f"bispectral N={N} q={q}", v, 1e-9, witness=w))
    for N in (1, 2):
        dev_form, dev_tab = [], []
        for _ in range(p["form_samples"]):
            q = float(rng.choice(p["q"]))
            alpha = random_generic_alpha(N, rng)
            z = random_point(N, rng)
            n = tuple(int(v) for v in rng.integers(0, 4, N))
            dev_form.append((operator_form_deviation(N, q, alpha, z), {"n": n}))
            dev_tab.append((table_deviation(N, n, q, alpha), {"n": n, "q": q}))
        v, w = _worst(dev_form)
        checks.append(Check(f"operator forms agree N={N}", v, 1e-10, witness=w))
        v, w = _worst(dev_tab)
        checks.append(Check(f"recurrence tables agree N={N}", v, 1e-10, witness=w))
    v = _worst(duality_residual(int(rng.integers(1, 4)), float(rng.choice(p["q"])), rng)
               for _ in range(p["duality_samples"]))
    checks.append(Check("duality on the discrete support", v[0], 1e-10, witness=v[1]))
    return checks, {}


def onsager_module_checks(spec: ModuleSpec) -> list:
    lab = _label(spec)
    rho = onsager_rho(spec.q)
    W0 = build_W0_blocktri(spec)
    W1 = build_W1_diag(spec)
    D0, D1 = build_dual_pair(spec)
    basis = GradedBasis(spec.limits)
    out = [Check(f"{lab} dimension", len(basis), spec.dimension, "equal",
                 info={"expected": int(np.prod([2 * j + 1 for j in spec.spins]))})]
    r = qdg_residuals(W0.matrix, W1.matrix, spec.q, rho)
    out.append(Check(f"{lab} q-Dolan-Grady", max(r), 1e-8))
    r = qdg_residuals(D0.matrix, D1.matrix, spec.q, rho)
    out.append(Check(f"{lab} q-Dolan-Grady dual realisation", max(r), 1e-8))
    d1 = np.diag(W1.matrix)
    out.append(Check(f"{lab} W1 spectrum closed form",
                     max(abs(d1[i] - closed_form_theta_star(spec, basis.grade(i))) for i in range(len(basis))), 1e-10))
    d0 = np.diag(D0.matrix)
    out.append(Check(f"{lab} W0 spectrum closed form",
                     max(abs(d0[i] - closed_form_theta(spec, D0.basis.grade(i))) for i in range(len(D0.basis))), 1e-10))
    out.append(Check(f"{lab} truncation leakage", W0.leakage, 1e-12,
                     witness=[list(l[:3]) for l in W0.leaks if abs(l[3]) == W0.leakage][:1] or None))
    if spec.N <= 2:
        listed = listed_vanishing_coefficients(spec)
        v, w = _worst((abs(val), {"coefficient": lbl, "n": n}) for lbl, n, val in listed)
        out.append(Check(f"{lab} listed vanishing coefficients", v, 1e-12, witness=w,
                         info={"count": len(listed), "labels": len({l for l, *_ in listed})}))
    td = verify_td_pair(W0.matrix, W1.matrix)
    out.append(Check(f"{lab} tridiagonal pair", int(td.is_td_pair), 1, "equal",
                     info={"diameter": td.diameter, "multiplicities": td.dual_multiplicities, "reason": td.reason}))
    out.append(Check(f"{lab} distinct W1 eigenvalues", td.dual_diameter + 1, spec.diameter + 1, "equal",
                     info={"multiplicities": td.dual_multiplicities}))
    return out


def suite_verify_onsager(p: dict, rng) -> tuple[list, dict]:
    checks = []
    for spec in module_specs(p):
        checks += onsager_module_checks(spec)
    return checks, {}


def suite_build_module(p: dict, rng) -> tuple[list, dict]:
    spec = ModuleSpec(tuple(p["spins"]), as_complex(p["beta"]), as_complex(p["beta_star"]), as_complex(p["q"]))
    checks = onsager_module_checks(spec)
    W0 = build_W0_blocktri(spec)
    W1 = build_W1_diag(spec)
    basis = [{"index": i, "n": n, "grade": sum(n)} for i, n in enumerate(W0.basis.indices)]
    return checks, {"basis": basis, "W0": W0.matrix, "W1": W1.matrix}


def multiset_distance(a, b) -> float:
    """Max gap after optimal matching of two eigenvalue lists."""
    a, b = np.asarray(a), np.asarray(b)
    cost = np.abs(a[:, None] - b[None, :])
    r, c = linear_sum_assignment(cost)
    return float(cost[r, c].max() / max(1.0, np.abs(a).max()))


def suite_spectrum(p: dict, rng) -> tuple[list, dict]:
    bp = boundary(p)
    checks, rows = [], []
    for spec in module_specs(p):
        lab = _label(spec)
        W0 = build_W0_blocktri(spec).matrix
        W1 = build_W1_diag(spec).matrix
        rho = onsager_rho(spec.q)
        I1 = build_I(1, W0, W1, spec.q, rho, bp)
        I3 = build_I(3, W0, W1, spec.q, rho, bp)
        H = build_H(W0, W1, spec.q, rho, bp)
        comm = np.linalg.norm(I1 @ I3 - I3 @ I1, 2) / (np.linalg.norm(I1, 2) * np.linalg.norm(I3, 2))
        checks.append(Check(f"{lab} [I1, I3]", float(comm), 1e-8))
        es = solve_finite_spectrum(I1)
        checks.append(Check(f"{lab} I1 eigenvectors diagonalise I3", leakage(es.vectors, I3), 1e-7))
        checks.append(Check(f"{lab} I1 eigenvectors diagonalise H", leakage(es.vectors, H), 1e-7))
        Ic = i1_matrix_from_coefficients(spec, bp)
        checks.append(Check(f"{lab} I1 coefficient form", float(np.abs(Ic - I1).max() / np.abs(I1).max()), 1e-10))
        Id = i1_dual_matrix(spec, bp)
        checks.append(Check(f"{lab} primal and dual I1 spectra",
                            multiset_distance(es.values, np.linalg.eigvals(Id)), 1e-8))
        checks.append(Check(f"{lab} I1 on the dual realisation",
                            multiset_distance(es.values, np.linalg.eigvals(dual_I(spec, 1, bp))), 1e-8))
        for i, lam in enumerate(es.values):
            rows.append({"module": lab, "index": i, "eigenvalue": complex(lam)})
    return checks, {"spectrum": rows}


def suite_nepomechie(p: dict, rng) -> tuple[list, dict]:
    bp = boundary(p)
    checks, rows = [], []
    for spec in module_specs(p):
        lab = _label(spec)
        solved_c, solved_o, unsolved = [], [], []
        for which in RELATIONS:
            for P in range(spec.diameter + 1):
                b2 = solve_nepomechie(which, P, spec.alpha, spec.q, bp)
                wc = check_window(spec, which, P, b2)
                wn = check_window(spec, which, P, bp)
                rows.append({"module": lab, "window": which, "P": P, "solved": True,
                             "relation": complex(wc.relation_value), "coupling": wc.coupling,
                             "outside_support": wc.outside_support})
                rows.append({"module": lab, "window": which, "P": P, "solved": False,
                             "relation": complex(wn.relation_value), "coupling": wn.coupling,
                             "outside_support": wn.outside_support})
                w = {"window": which, "P": P}
                solved_c.append((wc.coupling, w))
                solved_o.append((wc.outside_support, w))
                if P < spec.diameter:
                    unsolved.append((-wn.coupling, w))
        v, w = _worst(solved_c)
        checks.append(Check(f"{lab} solved windows decouple", v, 1e-10, witness=w))
        v, w = _worst(solved_o)
        checks.append(Check(f"{lab} window eigenvectors supported inside", v, 1e-8, witness=w))
        v, w = _worst(unsolved)
        checks.append(Check(f"{lab} unsolved windows couple", -v, 1e-3, "above", witness=w))
    return checks, {"scan": rows}


def suite_ladder(p: dict, rng) -> tuple[list, dict]:
    checks = []
    q = float(p["q"])
    for N in p["N"]:
        alpha = random_generic_alpha(N, rng)
        for k in range(1, N + 1):
            res, floor = [], []
            for n in multi_indices(N, p["max_total"]):
                r = verify_ladder(k, n, alpha, q, samples=p["points"], rng=rng)
                res.append((r.max_residual, {"n": n}))
                if r.lowering_floor is not None:
                    floor.append((r.lowering_floor, {"n": n}))
            v, w = _worst(res)
            checks.append(Check(f"ladder N={N} k={k}", v, 1e-8, witness=w))
            if floor:
                v, w = _worst(floor)
                checks.append(Check(f"lowering vanishes at n_k=0 N={N} k={k}", v, 1e-8, witness=w))
    return checks, {}


def suite_ortho(p: dict, rng) -> tuple[list, dict]:
    checks, tables = [], {}
    for N, tol in ((1, 1e-6), (2, 1e-4)):
        nodes = p.get(f"nodes_N{N}")
        if not nodes:
            continue
        r = quadrature_gram([as_complex(a) for a in p[f"alpha_N{N}"]], p["q"], p[f"max_total_N{N}"], nodes)
        checks.append(Check(f"Gram off-diagonal N={N}", r.max_offdiag, tol, info={"nodes": nodes}))
        checks.append(Check(f"Gram diagonal vs closed-form norm N={N}", r.max_diag_deviation, tol))
        tables[f"gram_N{N}"] = r.gram
    return checks, tables


def suite_classical(p: dict, rng) -> tuple[list, dict]:
    checks = []
    for N, M in zip((1, 2, 3), p["krawtchouk_M"]):
        kp = cq.KrawtchoukParams(tuple(rng.uniform(0.05, 0.25, N)), M)
        res = []
        for n in cq.simplex_grid(N, min(M, 3)):
            for _ in range(p["krawtchouk_points"]):
                x = tuple(int(v) for v in rng.integers(0, M + 1, N))
                K = cq.krawtchouk_Khat(n, x, kp)
                for l in range(1, N + 1):
                    lhs = cq.apply_dIstar(l, lambda y: cq.krawtchouk_Khat(n, y, kp), x, kp)
                    res.append((_rel(lhs, cq.dIstar_eigenvalue(l, n) * K, 1.0), {"n": n, "x": x, "l": l, "side": "x"}))
                    lhs = cq.apply_dI_dual(l, lambda m: cq.krawtchouk_Khat(m, x, kp) if min(m) >= 0 else 0.0, n, kp)
                    res.append((_rel(lhs, cq.dI_dual_eigenvalue(l, x) * K, 1.0), {"n": n, "x": x, "l": l, "side": "n"}))
        v, w = _worst(res)
        checks.append(Check(f"Krawtchouk bispectral N={N} M={M}", v, 1e-10, witness=w))
    for N, J in zip((1, 2, 3), p["J"]):
        for l in range(1, N + 1):
            m = cq.build_onsager_module_q1(J, tuple(rng.uniform(0.05, 0.25, N)), l)
            checks.append(Check(f"Dolan-Grady q=1 N={N} J={J} l={l}", max(m.dg_residuals), 1e-9))
            checks.append(Check(f"simplex grid closed N={N} J={J} l={l}", m.leakage, 1e-12))
            checks.append(Check(f"W1 spectrum q=1 N={N} J={J} l={l}",
                                float(np.abs(m.W1_spectrum - m.expected_spectrum).max()), 1e-9))
    m = cq.build_onsager_module_q1(p["J"][1], tuple(rng.uniform(0.05, 0.25, 2)))
    distinct = np.unique(np.round(m.W1_spectrum, 8))
    fit = classify_spectrum(distinct, 1.0)
    a, b, c = (complex(v) for v in fit.coefficients)
    checks.append(Check("q=1 spectrum is Case II", int(fit.case == "II"), 1, "equal", info={"case": fit.case}))
    checks.append(Check("q=1 spectrum fit a=c=0 b=1", max(abs(a), abs(b - 1), abs(c), fit.residual), 1e-8))
    rp = cq.RacahParams(tuple(p["racah_zeta"]), p["racah_M"])
    for l in range(1, rp.N + 1):
        r = cq.racah_gram_and_td_check(rp, l)
        checks.append(Check(f"Racah Gram off-diagonal l={l}", r.gram_offdiag, 1e-8))
        checks.append(Check(f"Racah tridiagonal relations l={l}", max(r.td_residuals), 1e-8, info=r.parameters))
        checks.append(Check(f"Racah A block-tridiagonal l={l}", r.blocktri_violation, 1e-8))
    res = []
    for _ in range(p["duality_samples"]):
        N = int(rng.integers(1, 4))
        kp = cq.KrawtchoukParams(tuple(rng.uniform(0.05, 0.25, N)), float(rng.integers(6, 9)))
        n = tuple(int(v) for v in rng.integers(0, 3, N))
        x = tuple(int(v) for v in rng.integers(0, 3, N))
        lhs = cq.krawtchouk_Khat(n, x, kp)
        rhs = cq.krawtchouk_Khat(tuple(reversed(x)), tuple(reversed(n)), cq.dual_params(kp))
        res.append((_rel(lhs, rhs, 1.0), {"n": n, "x": x}))
    v, w = _worst(res)
    checks.append(Check("Krawtchouk duality", v, 1e-10, witness=w))
    return checks, {}


RUNNERS: dict[str, Callable] = {
    "verify-bispectral": suite_verify_bispectral,
    "verify-onsager": suite_verify_onsager,
    "build-module": suite_build_module,
    "spectrum": suite_spectrum,
    "nepomechie-scan": suite_nepomechie,
    "ladder-check": suite_ladder,
    "ortho-check": suite_ortho,
    "classical-check": suite_classical,
}
