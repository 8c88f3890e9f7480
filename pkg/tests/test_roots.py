import numpy as np
import pytest

from lieharm.errors import RootNotFound
from lieharm.roots import (check_lemma1, decompose, decomposition_residuals, reflect,
                           root_reflection, simple_roots)
from .conftest import ALGEBRA_IDS

ROOT_DATA = {
    # rank, positive roots, multiplicities of the positive roots, split
    "sl2": (1, 1, [1], True),
    "sl3": (2, 3, [1, 1, 1], True),
    "sl4": (3, 6, [1] * 6, True),
    "su12": (1, 2, [2, 1], False),
    "so13": (1, 1, [2], False),
    "so23": (2, 4, [1] * 4, True),
    "sp4": (2, 4, [1] * 4, True),
    "g2split": (2, 6, [1] * 6, True),
}


@pytest.mark.parametrize("algebra_id", ALGEBRA_IDS)
def test_root_data(context_for, algebra_id):
    system = context_for(algebra_id).system
    rank, count, multiplicities, split = ROOT_DATA[algebra_id]
    assert system.rank == rank
    assert len(system.positive_roots()) == count
    assert [system.multiplicities[r.index] for r in system.positive_roots()] == multiplicities
    assert system.is_split() is split
    assert len(simple_roots(system)) == rank


@pytest.mark.parametrize("algebra_id", ALGEBRA_IDS)
def test_decomposition_residuals(context_for, algebra_id):
    residuals = decomposition_residuals(context_for(algebra_id).system)
    assert max(residuals.values()) < 1e-10


@pytest.mark.parametrize("algebra_id", ALGEBRA_IDS)
def test_lemma1_for_every_simple_root(context_for, algebra_id):
    system = context_for(algebra_id).system
    for position in range(system.rank):
        report = check_lemma1(system, system.simple(position))
        assert report.passed(), report
        assert abs(report.weighted_sum) < 1e-10


@pytest.mark.parametrize("algebra_id", ALGEBRA_IDS)
def test_dimension_count(context_for, algebra_id):
    ctx = context_for(algebra_id)
    system = ctx.system
    root_total = sum(system.multiplicities)
    assert root_total + system.g0.shape[0] == ctx.g.dim


def test_positive_roots_sorted_by_height(g2split):
    heights = [r.height for r in g2split.system.positive_roots()]
    assert heights == sorted(heights)
    assert heights[-1] == 5


def test_sl3_inner_products(sl3):
    system = sl3.system
    a1, a2 = system.simple(0), system.simple(1)
    assert system.inner(a1, a1) == pytest.approx(1 / 3)
    assert system.inner(a2, a2) == pytest.approx(1 / 3)
    assert system.inner(a1, a2) == pytest.approx(-1 / 6)
    assert system.inner_via_duals(a1, a2) == pytest.approx(-1 / 6)


def test_g2_root_lengths(g2split):
    system = g2split.system
    norms = sorted(system.inner(system.simple(i), system.simple(i)) for i in range(2))
    assert norms[1] / norms[0] == pytest.approx(3.0)


def test_sl3_sigma_beta_and_reflection(sl3):
    system = sl3.system
    a1, a2 = system.simple(0), system.simple(1)
    sigma = system.sigma_beta(a1)
    assert sorted(r.coefficients for r in sigma) == [(0, 1), (1, 1)]
    assert root_reflection(system, a2, a1).coefficients == (1, 1)
    assert np.allclose(reflect(system, a1, a1.coords), -a1.coords)
    assert decompose(system, a1.coords + a2.coords) == (1, 1)


def test_reflection_of_non_root_fails(su12):
    system = su12.system
    beta = system.simple(0)
    # 2β reflects to -2β, which is a root; a fake root at 3β is not
    fake = type(beta)(index=-1, coords=3 * beta.coords, H_alpha=3 * beta.H_alpha)
    with pytest.raises(RootNotFound):
        root_reflection(system, beta, fake)


def test_su12_double_root(su12):
    system = su12.system
    beta = system.simple(0)
    double = system.find_root(2 * beta.coords)
    assert double is not None
    assert system.multiplicity(double) == 1
    assert system.sigma_beta(beta) == []
