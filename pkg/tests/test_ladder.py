import numpy as np
import pytest

from qonsager.errors import DegenerateGap, InvalidParameters
from qonsager.gr_poly import normalized_Qhat, random_generic_alpha, random_point
from qonsager.ladder import apply_Bpm, ladder_prediction, verify_ladder

Q = 0.5


@pytest.mark.parametrize("n", [(0,), (1,), (3,)])
def test_one_variable_shifts_degree(n, rng):
    alpha = random_generic_alpha(1, rng)
    rep = verify_ladder(1, n, alpha, Q, samples=3, rng=rng)
    assert rep.max_residual < 1e-9
    if n[0] == 0:
        assert rep.lowering_floor < 1e-9


@pytest.mark.parametrize("k,n", [(1, (1, 1)), (2, (1, 1)), (1, (0, 2)), (2, (2, 0))])
def test_two_variables(k, n, rng):
    alpha = random_generic_alpha(2, rng)
    rep = verify_ladder(k, n, alpha, Q, samples=2, rng=rng)
    assert rep.max_residual < 1e-8
    assert rep.lowering_floor is None or rep.lowering_floor < 1e-8


def test_both_operator_forms_agree(rng):
    alpha = random_generic_alpha(2, rng)
    z = random_point(2, rng)
    f = lambda w: normalized_Qhat((1, 1), w, alpha, Q)
    a = apply_Bpm(1, 2, (1, 1), f, z, alpha, Q, "cbar")
    b = apply_Bpm(1, 2, (1, 1), f, z, alpha, Q, "phi")
    assert abs(a - b) < 1e-9 * abs(a)
    assert abs(a - ladder_prediction(1, 2, (1, 1), z, alpha, Q)) < 1e-8 * abs(a)


def test_invalid_arguments(rng):
    alpha = random_generic_alpha(2, rng)
    z = random_point(2, rng)
    f = lambda w: 1.0
    with pytest.raises(InvalidParameters):
        apply_Bpm(0, 1, (0,), f, z, alpha, Q)
    with pytest.raises(InvalidParameters):
        apply_Bpm(1, 3, (0, 0, 0), f, z, alpha, Q)
    with pytest.raises(DegenerateGap):
        apply_Bpm(1, 2, (1, 1), f, z, alpha, Q, gap_tol=1e6)
