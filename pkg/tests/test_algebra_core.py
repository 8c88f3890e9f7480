from fractions import Fraction

import numpy as np
import pytest

from lieharm.algebra_core import (adjointness_residuals, form_definiteness, orthonormalize,
                                  snap_value, span_residual)
from lieharm.errors import DimensionMismatch
from .conftest import ALGEBRA_IDS

CARTAN_DIMENSIONS = {
    "sl2": (1, 2), "sl3": (3, 5), "sl4": (6, 9), "su12": (4, 4),
    "so13": (3, 3), "so23": (4, 6), "sp4": (4, 6), "g2split": (6, 8),
}


@pytest.mark.parametrize("algebra_id", ALGEBRA_IDS)
def test_structural_identities(context_for, algebra_id):
    g = context_for(algebra_id).g
    assert g.jacobi_residual() < 1e-10
    assert max(g.theta_residuals().values()) < 1e-10
    assert max(g.form_residuals().values()) < 1e-10


@pytest.mark.parametrize("algebra_id", ALGEBRA_IDS)
def test_cartan_decomposition(context_for, algebra_id):
    ctx = context_for(algebra_id)
    cartan = ctx.cartan
    assert (cartan.k_basis.shape[0], cartan.p_basis.shape[0]) == CARTAN_DIMENSIONS[algebra_id]
    assert max(cartan.residuals.values()) < 1e-10
    assert max(adjointness_residuals(ctx.g, cartan).values()) < 1e-10
    signs = form_definiteness(ctx.g, cartan)
    assert signs["k_max"] < 0 < signs["p_min"]
    assert signs["gram_min"] > 0


def test_inner_product_and_bracket_on_sl2(sl2):
    g = sl2.g
    onb = sl2.cartan.onb
    assert np.allclose(onb @ g.gram @ onb.T, np.eye(3))
    X, Y = g.basis[0], g.basis[1]
    x, _ = g.coords(X)
    y, _ = g.coords(Y)
    assert np.allclose(g.matrix(g.bracket(x, y)), X @ Y - Y @ X)
    assert g.apply_theta(g.apply_theta(x)) == pytest.approx(x)


def test_orthonormalize_drops_dependent_rows():
    gram = np.diag([1.0, 2.0, 3.0])
    vectors = np.array([[1.0, 0, 0], [2.0, 0, 0], [1.0, 1.0, 0]])
    basis = orthonormalize(vectors, gram)
    assert basis.shape == (2, 3)
    assert np.allclose(basis @ gram @ basis.T, np.eye(2))
    assert span_residual(vectors, basis, gram) < 1e-12


def test_orthonormalize_extends_a_start_block():
    gram = np.eye(3)
    start = np.array([[1.0, 0, 0]])
    extra = orthonormalize(np.eye(3), gram, start=start)
    assert extra.shape == (2, 3)
    assert np.allclose(extra @ start.T, 0)


def test_orthonormalize_rejects_wrong_length():
    with pytest.raises(DimensionMismatch):
        orthonormalize(np.ones((1, 2)), np.eye(3))


def test_snap_value():
    assert snap_value(1 / 3) == Fraction(1, 3)
    assert snap_value(-0.125) == Fraction(-1, 8)
    assert snap_value(np.pi) is None


def test_sl2_killing_values(sl2):
    g = sl2.g
    h, residual = g.coords(np.diag([0.5, -0.5]))
    assert residual < 1e-12
    assert g.inner(h, h) == pytest.approx(2.0)
    H, _ = g.coords(np.diag([1.0, -1.0]))
    E, _ = g.coords(np.array([[0.0, 1.0], [0.0, 0.0]]))
    assert np.allclose(g.bracket(H, E), 2 * E)
