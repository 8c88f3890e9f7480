"""Algebra specifications, the catalog file format and the matrix models.

Every family is realized by solving its defining linear constraints: the
null space of the constraint matrix is brought to reduced row echelon form
and its entries are snapped to small rationals, which gives a reproducible
basis of real matrices.
"""
from __future__ import annotations

import json
import logging
import os
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Optional, Tuple

import numpy as np
from scipy.linalg import null_space

from . import config, octonions
from .algebra_core import LieAlgebraRealization, snap_value
from .errors import (CatalogFormatError, InvalidParams, RealizationError,
                     UnknownAlgebra, UnsupportedFamily)

logger = logging.getLogger(__name__)

FAMILIES = ("sl_real", "su_pq", "so_pq", "sp_real", "g2_split")


@dataclass(frozen=True)
class AlgebraSpec:
    id: str
    family: str
    params: Tuple[int, ...] = ()
    form_scale: Fraction = field(default=Fraction(1))

    def to_json(self) -> dict:
        return {
            "id": self.id,
            "family": self.family,
            "params": list(self.params),
            "form_scale": f"{self.form_scale.numerator}/{self.form_scale.denominator}",
        }


BUILTIN_CATALOG: Dict[str, AlgebraSpec] = {
    spec.id: spec for spec in (
        AlgebraSpec("sl2", "sl_real", (2,)),
        AlgebraSpec("sl3", "sl_real", (3,)),
        AlgebraSpec("sl4", "sl_real", (4,)),
        AlgebraSpec("su12", "su_pq", (1, 2)),
        AlgebraSpec("so13", "so_pq", (1, 3)),
        AlgebraSpec("so23", "so_pq", (2, 3)),
        AlgebraSpec("sp4", "sp_real", (2,)),
        AlgebraSpec("g2split", "g2_split", ()),
    )
}


# -- Catalog files -----------------------------------------------------------

def parse_form_scale(value) -> Fraction:
    if isinstance(value, bool):
        raise CatalogFormatError(f"form_scale must be a rational string, got {value!r}")
    try:
        scale = Fraction(str(value).strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise CatalogFormatError(f"form_scale {value!r} is not a rational 'p/q'") from exc
    if scale <= 0:
        raise InvalidParams(f"form_scale must be positive, got {scale}")
    return scale


def spec_from_json(entry) -> AlgebraSpec:
    if not isinstance(entry, dict):
        raise CatalogFormatError(f"catalog entries must be objects, got {type(entry).__name__}")
    missing = {"id", "family", "params"} - set(entry)
    if missing:
        raise CatalogFormatError(f"catalog entry lacks {sorted(missing)}")
    params = entry["params"]
    if not isinstance(params, list) or not all(isinstance(p, int) and not isinstance(p, bool) for p in params):
        raise CatalogFormatError(f"{entry['id']}: params must be a list of integers")
    return AlgebraSpec(
        id=str(entry["id"]),
        family=str(entry["family"]),
        params=tuple(params),
        form_scale=parse_form_scale(entry.get("form_scale", "1/1")),
    )


def load_catalog(path: str) -> Dict[str, AlgebraSpec]:
    """Read a JSON array of algebra specifications."""
    try:
        with open(path, "r", encoding="utf-8") as handle:
            data = json.load(handle)
    except OSError as exc:
        raise CatalogFormatError(f"cannot read catalog {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise CatalogFormatError(f"{path} is not valid JSON: {exc}") from exc
    if not isinstance(data, list):
        raise CatalogFormatError(f"{path}: catalog must be a JSON array")
    specs = {}
    for entry in data:
        spec = spec_from_json(entry)
        specs[spec.id] = spec
    logger.info("Loaded %d catalog entries from %s", len(specs), path)
    return specs


def build_catalog(path: Optional[str] = None) -> Dict[str, AlgebraSpec]:
    """Built-in entries, extended or overridden by a user catalog file.

    Without an explicit path the LIEHARM_CATALOG environment variable is used.
    """
    catalog = dict(BUILTIN_CATALOG)
    path = path or os.environ.get(config.CATALOG_ENV_VAR)
    if path:
        catalog.update(load_catalog(path))
    return catalog


def resolve(algebra_id: str, catalog_path: Optional[str] = None) -> AlgebraSpec:
    catalog = build_catalog(catalog_path)
    if algebra_id not in catalog:
        raise UnknownAlgebra(f"unknown algebra {algebra_id!r}; known: {', '.join(sorted(catalog))}")
    return catalog[algebra_id]


# -- Validation --------------------------------------------------------------

def expected_dimension(spec: AlgebraSpec) -> int:
    p = spec.params
    if spec.family == "sl_real":
        return p[0] ** 2 - 1
    if spec.family == "su_pq":
        return (p[0] + p[1]) ** 2 - 1
    if spec.family == "so_pq":
        n = p[0] + p[1]
        return n * (n - 1) // 2
    if spec.family == "sp_real":
        return p[0] * (2 * p[0] + 1)
    return 14


def validate(spec: AlgebraSpec) -> None:
    if spec.family not in FAMILIES:
        raise UnsupportedFamily(f"{spec.id}: family {spec.family!r} is not one of {', '.join(FAMILIES)}")
    if spec.form_scale <= 0:
        raise InvalidParams(f"{spec.id}: form_scale must be positive")
    p = spec.params
    arity = {"sl_real": 1, "su_pq": 2, "so_pq": 2, "sp_real": 1, "g2_split": 0}[spec.family]
    if len(p) != arity:
        raise InvalidParams(f"{spec.id}: {spec.family} takes {arity} parameter(s), got {list(p)}")
    if spec.family == "sl_real" and p[0] < 2:
        raise InvalidParams(f"{spec.id}: sl_real needs n >= 2")
    if spec.family == "sp_real" and p[0] < 1:
        raise InvalidParams(f"{spec.id}: sp_real needs n >= 1")
    if spec.family in ("su_pq", "so_pq"):
        if p[0] < 1 or p[1] < 1 or p[0] > p[1]:
            raise InvalidParams(f"{spec.id}: {spec.family} needs 1 <= p <= q, got {list(p)}")
        if spec.family == "so_pq" and p[0] + p[1] < 3:
            raise InvalidParams(f"{spec.id}: so_pq needs p + q >= 3")


# -- Constraint systems ------------------------------------------------------

def _constraint_matrix(size: int, defect) -> np.ndarray:
    """Columns are the flattened defects of the size×size unit matrices."""
    columns = []
    for m in range(size * size):
        unit = np.zeros(size * size)
        unit[m] = 1.0
        columns.append(np.ravel(defect(unit.reshape(size, size))))
    return np.array(columns).T


def _signature(p: int, q: int) -> np.ndarray:
    return np.diag([1.0] * p + [-1.0] * q)


def _sl_defect(X):
    return [np.trace(X)]


def _metric_defect(S):
    def defect(X):
        return X.T @ S + S @ X
    return defect


def _su_defect(p: int, q: int):
    n = p + q
    S = _signature(p, q)

    def defect(X):
        # X = [[A, -B], [B, A]] doubles A + iB
        A, minus_B = X[:n, :n], X[:n, n:]
        B, D = X[n:, :n], X[n:, n:]
        return np.concatenate([
            np.ravel(A - D), np.ravel(minus_B + B),
            np.ravel(A.T @ S + S @ A), np.ravel(S @ B - B.T @ S),
            [np.trace(A), np.trace(B)],
        ])
    return defect


def _sp_form(n: int) -> np.ndarray:
    J = np.zeros((2 * n, 2 * n))
    J[:n, n:] = np.eye(n)
    J[n:, :n] = -np.eye(n)
    return J


def constraint_system(spec: AlgebraSpec) -> Tuple[int, np.ndarray]:
    """Matrix size and the linear constraints cutting the algebra out of gl."""
    p = spec.params
    if spec.family == "sl_real":
        return p[0], _constraint_matrix(p[0], _sl_defect)
    if spec.family == "su_pq":
        size = 2 * (p[0] + p[1])
        return size, _constraint_matrix(size, _su_defect(p[0], p[1]))
    if spec.family == "so_pq":
        size = p[0] + p[1]
        return size, _constraint_matrix(size, _metric_defect(_signature(p[0], p[1])))
    if spec.family == "sp_real":
        size = 2 * p[0]
        return size, _constraint_matrix(size, _metric_defect(_sp_form(p[0])))
    return len(octonions.IMAGINARY), octonions.derivation_constraints()


def reduced_row_echelon(M: np.ndarray, tol: float = config.SPAN_TOL) -> np.ndarray:
    """Gauss-Jordan elimination with partial pivoting; zero rows are dropped."""
    R = np.array(M, dtype=float)
    rows, cols = R.shape
    pivot_row = 0
    for col in range(cols):
        if pivot_row == rows:
            break
        best = pivot_row + int(np.argmax(np.abs(R[pivot_row:, col])))
        if abs(R[best, col]) <= tol:
            continue
        R[[pivot_row, best]] = R[[best, pivot_row]]
        R[pivot_row] /= R[pivot_row, col]
        others = np.arange(rows) != pivot_row
        R[others] -= np.outer(R[others, col], R[pivot_row])
        pivot_row += 1
    return R[:pivot_row]


def snap_array(M: np.ndarray) -> np.ndarray:
    out = np.array(M, dtype=float)
    for idx, value in np.ndenumerate(out):
        snapped = snap_value(value)
        if snapped is not None:
            out[idx] = float(snapped)
    return out


def realize(spec: AlgebraSpec) -> LieAlgebraRealization:
    """Matrix realization of the algebra named by ``spec``."""
    validate(spec)
    logger.info("Realizing algebra %s (%s %s)", spec.id, spec.family, list(spec.params))
    size, constraints = constraint_system(spec)
    kernel = null_space(constraints)
    dim = expected_dimension(spec)
    if kernel.shape[1] != dim:
        raise RealizationError(f"{spec.id}: constraint solution space has dimension "
                               f"{kernel.shape[1]}, expected {dim}")
    rows = snap_array(reduced_row_echelon(kernel.T))
    defect = float(np.abs(constraints @ rows.T).max()) if rows.size else 0.0
    if rows.shape[0] != dim or defect > config.CLOSURE_TOL:
        raise RealizationError(f"{spec.id}: echelon basis has {rows.shape[0]} rows, "
                               f"constraint defect {defect:.3e}")
    g = LieAlgebraRealization(spec.id, rows.reshape(dim, size, size), form_scale=spec.form_scale)
    if g.closure_residual > config.CLOSURE_TOL:
        raise RealizationError(f"{spec.id}: bracket closure residual {g.closure_residual:.3e}")
    return g
