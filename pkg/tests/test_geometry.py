import numpy as np
import pytest
import sympy

from lieharm.errors import DegeneratePlane, OrderOutOfRange, StepTooSmall
from lieharm.geometry import (T, RadialOperator, curvature_symmetries, exact_number,
                              fiber_second_fundamental, iterated_laplacian, laplacian,
                              radial_function, radial_laplacian, radial_operator,
                              sample_curvatures, sectional_curvature, tension_field)
from lieharm.solvable import sample_points
from .conftest import ALGEBRA_IDS


@pytest.mark.parametrize("algebra_id", ALGEBRA_IDS)
def test_levi_civita_and_curvature_identities(context_for, algebra_id):
    geometry = context_for(algebra_id).geometry()
    assert max(geometry.residuals().values()) < 1e-10
    assert max(curvature_symmetries(geometry).values()) < 1e-10


@pytest.mark.parametrize("algebra_id", ALGEBRA_IDS)
def test_projection_is_harmonic(context_for, algebra_id):
    ctx = context_for(algebra_id)
    for position in range(ctx.system.rank):
        report = tension_field(ctx.projection(position), ctx.geometry(), ctx.geometry(position),
                               ctx.system, ctx.rankone(position))
        assert report.passed(), report.per_direction_traces
        assert max(report.residuals.values()) < 1e-10


def test_sl2_has_constant_curvature(sl2):
    geometry = sl2.geometry(0)
    values = sample_curvatures(geometry, count=50)
    assert np.allclose(values, -0.5, atol=1e-10)


@pytest.mark.parametrize("algebra_id", ["sl3", "so13", "g2split"])
def test_real_hyperbolic_targets(context_for, algebra_id):
    ctx = context_for(algebra_id)
    for position in range(ctx.system.rank):
        norm2 = ctx.rankone(position).norm2
        for n_scale in (1.0, 0.5):
            values = sample_curvatures(ctx.geometry(position, n_scale=n_scale), count=50)
            assert np.abs(values + norm2).max() < 1e-8


def test_complex_hyperbolic_band(su12):
    norm2 = su12.rankone(0).norm2
    values = sample_curvatures(su12.geometry(0, n_scale=0.5), count=200)
    assert values.min() >= -4 * norm2 - 1e-8
    assert values.max() <= -norm2 + 1e-8
    assert values.min() == pytest.approx(-4 * norm2, rel=0.02)


def test_degenerate_plane(sl3):
    geometry = sl3.geometry()
    X = np.eye(geometry.dim)[0]
    with pytest.raises(DegeneratePlane):
        sectional_curvature(geometry, X, 2 * X)


def test_fibres_of_sl3_are_not_totally_geodesic(sl3):
    system, rankone, geometry = sl3.system, sl3.rankone(0), sl3.geometry()
    values = []
    for root in system.sigma_beta(rankone.beta):
        X = system.root_spaces[root.index][0]
        value = fiber_second_fundamental(geometry, X, rankone)
        assert value == pytest.approx(system.inner(root, rankone.beta) * sl3.g.inner(X, X), abs=1e-10)
        values.append(value)
    assert max(abs(v) for v in values) > 1e-3


def test_laplacian_of_constant_vanishes(sl3):
    p = sample_points(sl3.source, 1, seed=3)[0]
    assert laplacian(sl3.geometry(), lambda q: 2.5, p) == pytest.approx(0.0, abs=1e-9)


@pytest.mark.parametrize("algebra_id", ["sl2", "sl3", "su12"])
def test_laplacian_of_radial_functions(context_for, algebra_id):
    ctx = context_for(algebra_id)
    rankone, geometry = ctx.rankone(0), ctx.geometry()
    for u in (T, T ** 2, sympy.exp(T / 2)):
        f = radial_function(rankone, u)
        for p in sample_points(ctx.source, 3, seed=5):
            t = rankone.beta.coords @ p.H
            expected = radial_laplacian(ctx.system, rankone, u, t)
            assert laplacian(geometry, f, p) == pytest.approx(expected.real, abs=1e-7)


def test_iterated_laplacian_of_square(sl2):
    rankone, geometry = sl2.rankone(0), sl2.geometry()
    op = radial_operator(sl2.system, rankone)
    f = radial_function(rankone, T ** 2)
    p = sample_points(sl2.source, 1, seed=9)[0]
    expected = op.value(T ** 2, 0.0, 2)
    assert iterated_laplacian(geometry, f, p, 2) == pytest.approx(expected.real, rel=1e-4)


def test_laplacian_argument_checks(sl2):
    p = sl2.source.identity()
    with pytest.raises(StepTooSmall):
        laplacian(sl2.geometry(), lambda q: 1.0, p, h=1e-8)
    with pytest.raises(OrderOutOfRange):
        iterated_laplacian(sl2.geometry(), lambda q: 1.0, p, 3)


def test_radial_operator_is_exact(su12):
    rankone = su12.rankone(0)
    op = radial_operator(su12.system, rankone, target=True)
    assert op.norm2 == exact_number(rankone.norm2)
    assert op.drift == 4 * op.norm2
    assert op.apply(T) == -op.drift
    assert op.power(T ** 2, 2) == 2 * op.drift ** 2


def test_source_and_target_radial_operators_agree(g2split):
    for position in range(2):
        rankone = g2split.rankone(position)
        src = radial_operator(g2split.system, rankone)
        tgt = radial_operator(g2split.system, rankone, target=True)
        assert src == tgt


def test_exact_number():
    assert exact_number(1 / 3) == sympy.Rational(1, 3)
    assert exact_number(-0.1) == sympy.Rational(-1, 10)


def test_radial_operator_dataclass():
    op = RadialOperator(norm2=sympy.Rational(1, 2), drift=sympy.Rational(1, 2))
    assert op.apply(sympy.exp(T)) == 0


def test_sl2_connection(sl2):
    geometry = sl2.geometry()
    size = np.sqrt(sl2.rankone(0).norm2)
    e1, e2 = np.eye(2)
    # the sign of the a basis vector is not fixed
    sign = np.sign(geometry.bracket(e2, e1)[0])
    assert np.allclose(geometry.bracket(e2, e1), size * sign * e1)
    assert np.allclose(geometry.covariant(e1, e1), size * sign * e2)
    assert np.allclose(geometry.covariant(e1, e2), -size * sign * e1)
    assert np.allclose(geometry.covariant(e2, e1), 0)
    assert np.allclose(geometry.covariant(e2, e2), 0)
