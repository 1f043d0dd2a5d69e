import json
from fractions import Fraction
from math import prod

import numpy as np
import pytest

from qonsager.errors import AmbiguousFit, IncompatibleSpins
from qonsager.onsager_modules import (ModuleSpec, as_spins, build_dual_pair, check_spin_constraint,
                                      classify_spectrum, distinct_eigenvalues, dump_module, module_pair,
                                      onsager_rho, overlap_matrix, q_commutator, qdg_residuals,
                                      reduce_sequence, td_relation_residuals, unreduce_sequence,
                                      verify_qdg, verify_td_pair)
from qonsager.reports import dumps

BETA, BETA_STAR, Q = 0.3 + 0.2j, -0.4 + 0.1j, 0.7


def spec(*spins, q=Q):
    return ModuleSpec(tuple(spins), BETA, BETA_STAR, q)


def test_spin_parsing():
    assert as_spins(["3/2", 1, 0.5]) == (Fraction(3, 2), Fraction(1), Fraction(1, 2))
    for bad in (["0"], ["1/3"], ["x"], [-1]):
        with pytest.raises(IncompatibleSpins):
            as_spins(bad)
    with pytest.raises(IncompatibleSpins):
        ModuleSpec(("1",), BETA, BETA_STAR, Q, family="N2")


@pytest.mark.parametrize("spins", [("1/2",), ("2",), ("1", "1/2"), ("3/2", "1"), ("1/2", "1", "1/2")])
def test_dimension_and_relations(spins):
    s = spec(*spins)
    W0, W1 = module_pair(s)
    assert W0.shape[0] == prod(int(2 * Fraction(j)) + 1 for j in spins)
    ok, res = verify_qdg(W0, W1, Q, onsager_rho(Q))
    assert ok and res < 1e-9
    D0, D1 = build_dual_pair(s)
    assert max(qdg_residuals(D0.matrix, D1.matrix, Q, onsager_rho(Q))) < 1e-9


def test_relations_fail_for_wrong_rho():
    W0, W1 = module_pair(spec("1", "1/2"))
    assert not verify_qdg(W0, W1, Q, 1.3 * onsager_rho(Q))[0]


def test_spin_constraint():
    s = spec("1", "1/2")
    check_spin_constraint(s.alpha, s.spins, Q)
    bad = s.alpha.copy()
    bad[2] *= 1.01
    with pytest.raises(IncompatibleSpins):
        check_spin_constraint(bad, s.spins, Q)


def test_overlap_matrix_intertwines_both_realisations():
    s = spec("1", "1/2")
    S = overlap_matrix(s)
    W0, W1 = module_pair(s)
    D0, D1 = build_dual_pair(s)
    assert np.abs(S @ W0 - D0.matrix @ S).max() < 1e-10 * np.abs(S).max()
    assert np.abs(S @ W1 - D1.matrix.T @ S).max() < 1e-10 * np.abs(S).max()
    assert abs(np.linalg.det(S)) > 1e-8


def test_td_pair_positive_and_negative(rng):
    W0, W1 = module_pair(spec("3/2"))
    rep = verify_td_pair(W0, W1)
    assert rep.is_td_pair and rep.diameter == 3 and rep.dual_multiplicities == [1, 1, 1, 1]
    A = np.diag(np.arange(4.0))
    B = rng.normal(size=(4, 4))
    assert not verify_td_pair(A, B).is_td_pair


def test_distinct_eigenvalues_multiplicities():
    reps, mult = distinct_eigenvalues(np.diag([1.0, 2.0, 2.0, 3.0, 3.0, 3.0]))
    assert sorted(mult) == [1, 2, 3]


def test_q_commutator_definition(rng):
    X, Y = rng.normal(size=(2, 3, 3))
    assert np.allclose(q_commutator(X, Y, 2.0), 2 * X @ Y - Y @ X / 2)


@pytest.mark.parametrize("case,q", [("I", 0.7), ("II", 1.0), ("III", 1.0)])
def test_classify_recovers_synthetic_sequences(case, q):
    d, (a, b, c) = 5, (0.3, 1.2, -0.7)
    p = np.arange(d + 1)
    if case == "I":
        th = a + b * q ** (2 * p - d) + c * q ** (d - 2 * p)
    elif case == "II":
        th = a + b * p + c * p * (p - 1) / 2
    else:
        th = a + b * (-1.0) ** p + c * p * (-1.0) ** p
    fit = classify_spectrum(th, q)
    assert fit.case == case and fit.residual < 1e-12
    assert np.allclose(fit.coefficients, (a, b, c), atol=1e-10)


def test_classify_needs_four_values():
    with pytest.raises(AmbiguousFit):
        classify_spectrum([1.0, 2.0, 3.0], 0.7)


def test_reduction_round_trip(rng):
    A = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
    args = (0.4 + 0.1j, 0.3, 1.7, onsager_rho(Q))
    assert np.allclose(unreduce_sequence(reduce_sequence(A, *args), *args), A)


def test_td_relations_with_module_parameters():
    W0, W1 = module_pair(spec("3/2"))
    beta = Q**2 + Q**-2
    rho = onsager_rho(Q)
    assert max(td_relation_residuals(W0, W1, beta, 0.0, 0.0, rho, rho)) < 1e-9


def test_dump_is_serialisable():
    d = dump_module(spec("1", "1/2"))
    back = json.loads(dumps(d))
    assert back["spins"] == ["1", "1/2"] and len(back["basis"]) == 6
