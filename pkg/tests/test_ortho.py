import numpy as np
import pytest

from qonsager.errors import ConditionViolation
from qonsager.ortho import (aw_measure_density, aw_measure_density_grid, check_orthogonality_region,
                            chebyshev_nodes, quadrature_gram)

ALPHA_N1 = (0.9, 0.5, 0.3, 0.8)
ALPHA_N2 = (0.95, 0.6, 0.4, 0.25, 0.9)
Q = 0.7


def test_chebyshev_rule_integrates_trigonometric_polynomials():
    z, w = chebyshev_nodes(50)
    theta = np.angle(z)
    assert abs(np.sum(w) - 0.5) < 1e-14  # half circle, weight 1/(2K)
    for m in range(1, 20):
        assert abs(np.sum(w * np.cos(m * theta))) < 1e-13


def test_region_checks():
    check_orthogonality_region(ALPHA_N1)
    with pytest.raises(ConditionViolation):
        check_orthogonality_region((0.9, 0.3, 0.5, 0.8))
    with pytest.raises(ConditionViolation):
        check_orthogonality_region((0.9, 0.5, 0.3, 3.0))


def test_density_is_real_positive_and_grid_matches(rng):
    z, _ = chebyshev_nodes(12)
    grid = aw_measure_density_grid([z, z], ALPHA_N2, Q)
    for i in (0, 5):
        for j in (3, 11):
            v = aw_measure_density([z[i], z[j]], ALPHA_N2, Q)
            assert abs(grid[i, j] - v) < 1e-12 * abs(v)
    assert np.all(grid.real > 0) and np.abs(grid.imag).max() < 1e-10 * grid.real.max()


def test_gram_one_variable():
    r = quadrature_gram(ALPHA_N1, Q, 5, 200)
    assert r.max_offdiag < 1e-10 and r.max_diag_deviation < 1e-10


def test_gram_two_variables_small():
    r = quadrature_gram(ALPHA_N2, Q, 2, 60)
    assert r.max_offdiag < 1e-8 and r.max_diag_deviation < 1e-8


def test_gram_converges_with_nodes():
    coarse = quadrature_gram(ALPHA_N1, Q, 5, 6).max_offdiag
    fine = quadrature_gram(ALPHA_N1, Q, 5, 100).max_offdiag
    assert fine < 1e-3 * coarse
