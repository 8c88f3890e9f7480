import json
from fractions import Fraction

import numpy as np
import pytest

from lieharm import octonions
from lieharm.catalog import (BUILTIN_CATALOG, AlgebraSpec, build_catalog, expected_dimension,
                             load_catalog, parse_form_scale, realize, reduced_row_echelon, resolve,
                             validate)
from lieharm.errors import (CatalogFormatError, InvalidParams, UnknownAlgebra,
                            UnsupportedFamily)

DIMENSIONS = {"sl2": 3, "sl3": 8, "sl4": 15, "su12": 8, "so13": 6, "so23": 10, "sp4": 10, "g2split": 14}


def test_builtin_catalog_ids():
    assert set(BUILTIN_CATALOG) == set(DIMENSIONS)


@pytest.mark.parametrize("algebra_id", sorted(DIMENSIONS))
def test_realized_dimension(algebra_id):
    spec = BUILTIN_CATALOG[algebra_id]
    g = realize(spec)
    assert g.dim == DIMENSIONS[algebra_id] == expected_dimension(spec)
    assert g.closure_residual < 1e-12


def test_sl_basis_is_traceless_and_rational():
    g = realize(BUILTIN_CATALOG["sl3"])
    assert np.abs(np.trace(g.basis, axis1=1, axis2=2)).max() == 0
    scaled = g.basis * 48
    assert np.abs(scaled - np.round(scaled)).max() < 1e-9


def test_sp_basis_preserves_the_symplectic_form():
    g = realize(BUILTIN_CATALOG["sp4"])
    J = np.block([[np.zeros((2, 2)), np.eye(2)], [-np.eye(2), np.zeros((2, 2))]])
    for X in g.basis:
        assert np.abs(X.T @ J + J @ X).max() < 1e-12


def test_g2_basis_consists_of_derivations(rng):
    g = realize(BUILTIN_CATALOG["g2split"])
    x, y = np.zeros(8), np.zeros(8)
    x[1:], y[1:] = rng.standard_normal(7), rng.standard_normal(7)
    for D7 in g.basis:
        D = np.zeros((8, 8))
        D[1:, 1:] = D7
        lhs = D @ octonions.product(x, y)
        rhs = octonions.product(D @ x, y) + octonions.product(x, D @ y)
        assert np.abs(lhs - rhs).max() < 1e-10


def test_split_octonion_norm_is_multiplicative(rng):
    x, y = rng.standard_normal(8), rng.standard_normal(8)
    assert octonions.norm(octonions.product(x, y)) == pytest.approx(
        octonions.norm(x) * octonions.norm(y), rel=1e-10)


def test_split_octonions_are_alternative(rng):
    x, y = rng.standard_normal(8), rng.standard_normal(8)
    left = octonions.product(x, octonions.product(x, y))
    right = octonions.product(octonions.product(x, x), y)
    assert np.abs(left - right).max() < 1e-10


@pytest.mark.parametrize("spec, error", [
    (AlgebraSpec("bad", "e8_split", ()), UnsupportedFamily),
    (AlgebraSpec("bad", "sl_real", (1,)), InvalidParams),
    (AlgebraSpec("bad", "so_pq", (2, 1)), InvalidParams),
    (AlgebraSpec("bad", "so_pq", (1, 1)), InvalidParams),
    (AlgebraSpec("bad", "su_pq", (1,)), InvalidParams),
])
def test_validate_rejects(spec, error):
    with pytest.raises(error):
        validate(spec)


def test_parse_form_scale():
    assert parse_form_scale("1/2") == Fraction(1, 2)
    assert parse_form_scale(3) == Fraction(3)
    with pytest.raises(CatalogFormatError):
        parse_form_scale("half")
    with pytest.raises(InvalidParams):
        parse_form_scale("0")


def test_form_scale_scales_inner_product():
    base = realize(BUILTIN_CATALOG["sl2"])
    scaled = realize(AlgebraSpec("sl2h", "sl_real", (2,), Fraction(1, 2)))
    assert np.allclose(scaled.gram, 0.5 * base.gram)


def test_load_catalog(tmp_path):
    path = tmp_path / "catalog.json"
    path.write_text(json.dumps([{"id": "sl5", "family": "sl_real", "params": [5], "form_scale": "1/1"}]))
    specs = load_catalog(str(path))
    assert specs["sl5"] == AlgebraSpec("sl5", "sl_real", (5,))
    assert resolve("sl5", str(path)).params == (5,)
    assert "sl3" in build_catalog(str(path))


@pytest.mark.parametrize("content", ['{"id": "x"}', "not json", '[{"id": "x", "family": "sl_real"}]',
                                     '[{"id": "x", "family": "sl_real", "params": ["2"]}]'])
def test_load_catalog_rejects_malformed_files(tmp_path, content):
    path = tmp_path / "catalog.json"
    path.write_text(content)
    with pytest.raises(CatalogFormatError):
        load_catalog(str(path))


def test_catalog_environment_fallback(tmp_path, monkeypatch):
    path = tmp_path / "catalog.json"
    path.write_text(json.dumps([{"id": "so14", "family": "so_pq", "params": [1, 4]}]))
    monkeypatch.setenv("LIEHARM_CATALOG", str(path))
    assert resolve("so14").family == "so_pq"


def test_unknown_algebra():
    with pytest.raises(UnknownAlgebra):
        resolve("e6")


def test_reduced_row_echelon():
    M = np.array([[2.0, 4.0, 0.0], [1.0, 2.0, 1.0], [3.0, 6.0, 1.0]])
    R = reduced_row_echelon(M)
    assert np.allclose(R, [[1, 2, 0], [0, 0, 1]])
