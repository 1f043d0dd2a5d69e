import numpy as np
import pytest

from qonsager.errors import EigensolverFailure
from qonsager.hierarchy import (RELATIONS, BoundaryParams, build_descendants, build_H, build_I, check_window,
                                dual_I, galerkin_spectrum, i1_dual_matrix, i1_matrix_from_coefficients,
                                leakage, nepomechie_value, primal_I, recurrence_march_N1,
                                solve_finite_spectrum, solve_nepomechie)
from qonsager.gr_poly import random_generic_alpha
from qonsager.onsager_modules import ModuleSpec, build_dual_pair, module_pair, onsager_rho

Q = 0.7
BP = BoundaryParams(0.7 + 0.2j, -0.4 + 0.3j, 0.5 - 0.1j, 0.3 + 0.6j, h0=1.0, h_minus1=0.37, h0_prime=0.1)
MODULES = [("3/2",), ("1", "1/2"), ("1/2", "1/2", "1/2")]


def spec(spins):
    return ModuleSpec(spins, 0.3 + 0.2j, -0.4 + 0.1j, Q)


def comm(A, B):
    return A @ B - B @ A


def rel_norm(X, Y):
    return np.linalg.norm(X) / max(np.linalg.norm(Y), 1e-300)


def test_descendants_obey_current_relations():
    W0, W1 = module_pair(spec(("1", "1/2")))
    d = build_descendants(W0, W1, Q, onsager_rho(Q))
    scale = np.linalg.norm(d["G_2"]) ** 2
    assert rel_norm(comm(W0, d["W_2"]) - comm(d["W_-1"], W1), comm(W0, d["W_2"])) < 1e-12
    assert np.linalg.norm(comm(d["G_1"], d["G_2"])) < 1e-12 * scale
    assert np.linalg.norm(comm(d["G~_1"], d["G~_2"])) < 1e-12 * scale
    assert np.linalg.norm(comm(d["G_1"], d["G~_2"]) + comm(d["G~_1"], d["G_2"])) < 1e-12 * scale


@pytest.mark.parametrize("spins", MODULES)
def test_charges_commute(spins, rng):
    W0, W1 = module_pair(spec(spins))
    rho = onsager_rho(Q)
    for _ in range(3):
        bp = BoundaryParams(*(complex(*rng.normal(size=2)) for _ in range(4)))
        I1, I3 = build_I(1, W0, W1, Q, rho, bp), build_I(3, W0, W1, Q, rho, bp)
        assert np.linalg.norm(comm(I1, I3)) < 1e-10 * np.linalg.norm(I1) * np.linalg.norm(I3)
    H = build_H(W0, W1, Q, rho, BP)
    I1 = build_I(1, W0, W1, Q, rho, BP)
    assert np.linalg.norm(comm(I1, H)) < 1e-10 * np.linalg.norm(I1) * np.linalg.norm(H)
    with pytest.raises(ValueError):
        build_I(5, W0, W1, Q, rho, BP)


@pytest.mark.parametrize("spins", MODULES)
def test_coefficient_forms(spins):
    s = spec(spins)
    I1 = primal_I(s, 1, BP)
    assert np.abs(i1_matrix_from_coefficients(s, BP) - I1).max() < 1e-12 * np.abs(I1).max()
    D0, D1 = build_dual_pair(s)
    Id = build_I(1, D0.matrix, D1.matrix, Q, onsager_rho(Q), BP)
    assert np.abs(i1_dual_matrix(s, BP) - Id).max() < 1e-12 * np.abs(Id).max()
    ev = np.sort_complex(np.linalg.eigvals(I1))
    for other in (i1_dual_matrix(s, BP), dual_I(s, 1, BP)):
        assert np.abs(np.sort_complex(np.linalg.eigvals(other)) - ev).max() < 1e-9 * np.abs(ev).max()


def test_shared_eigenvectors():
    s = spec(("1", "1/2"))
    W0, W1 = module_pair(s)
    es = solve_finite_spectrum(primal_I(s, 1, BP))
    assert es.residual < 1e-10
    assert leakage(es.vectors, primal_I(s, 3, BP)) < 1e-9
    assert leakage(es.vectors, build_H(W0, W1, Q, onsager_rho(Q), BP)) < 1e-9


def test_defective_matrix_is_rejected():
    with pytest.raises(EigensolverFailure):
        solve_finite_spectrum(np.array([[1.0, 1.0], [0.0, 1.0]]))


@pytest.mark.parametrize("which", RELATIONS)
def test_nepomechie_windows(which):
    s = spec(("1", "1/2"))
    for P in range(s.diameter):
        solved = solve_nepomechie(which, P, s.alpha, Q, BP)
        assert abs(nepomechie_value(which, P, s.alpha, Q, solved)) < 1e-12
        w = check_window(s, which, P, solved)
        assert w.coupling < 1e-10 and w.outside_support < 1e-8
        assert check_window(s, which, P, BP).coupling > 1e-3


def test_march_terminates_on_truncated_eigenvalues(rng):
    alpha = random_generic_alpha(1, rng)
    cutoff = 4
    ev = galerkin_spectrum(alpha, Q, BP, cutoff)
    assert len(ev) == cutoff + 1
    for lam in ev:
        assert recurrence_march_N1(lam, alpha, Q, BP, cutoff).terminates
    off = recurrence_march_N1(ev[0] + 0.37, alpha, Q, BP, cutoff)
    assert not off.terminates and off.tail_residual > 1e-6
