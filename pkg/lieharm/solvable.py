"""The solvable group NA in exponential coordinates.

A point is the pair (X, H) standing for exp(X)·exp(H) with X in n and H in a,
both given in orthonormal bases. Matrices are formed only while multiplying.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import List, Optional

import numpy as np

from . import config
from .algebra_core import LieAlgebraRealization
from .errors import DimensionMismatch, MalformedPoint, NonUnipotentProduct

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class GroupPoint:
    X: np.ndarray
    H: np.ndarray

    def to_json(self) -> dict:
        return {"X": [float(x) for x in self.X], "H": [float(h) for h in self.H]}

    def __repr__(self):
        return f"GroupPoint(X={np.round(self.X, 6).tolist()}, H={np.round(self.H, 6).tolist()})"


def nilpotent_exp(N: np.ndarray) -> np.ndarray:
    """exp(N) for nilpotent N; the series stops once the power vanishes."""
    size = N.shape[0]
    result = np.eye(size)
    term = np.eye(size)
    for k in range(1, size + 1):
        term = term @ N / k
        if not term.any():
            break
        result = result + term
    return result


def nilpotent_log(U: np.ndarray) -> np.ndarray:
    """log(U) for unipotent U via log(I+Z) = Σ (-1)^{k+1} Z^k / k."""
    size = U.shape[0]
    Z = U - np.eye(size)
    result = np.zeros_like(Z)
    power = np.eye(size)
    for k in range(1, size + 1):
        power = power @ Z
        if not power.any():
            break
        result = result + ((-1) ** (k + 1)) * power / k
    return result


def is_nilpotent(N: np.ndarray, tol: float = config.IDENTITY_TOL) -> bool:
    scale = 1.0 + np.abs(N).max()
    top = np.linalg.matrix_power(N, N.shape[0])
    return bool(np.abs(top).max() <= tol * scale ** N.shape[0])


class SolvableGroup(object):
    """Simply connected solvable group with Lie algebra n ⊕ a.

    Arguments:
        g (LieAlgebraRealization): ambient algebra
        n_basis (numpy.ndarray): orthonormal rows spanning n (root vectors)
        a_basis (numpy.ndarray): orthonormal rows spanning a
        weights (numpy.ndarray): weights[j, i] is the root value of n-row j on a-row i
        name (str): label used in logs and reports
    """

    def __init__(self, g: LieAlgebraRealization, n_basis, a_basis, weights, name: str = ""):
        self.g = g
        self.n_basis = np.asarray(n_basis, dtype=float).reshape(-1, g.dim)
        self.a_basis = np.asarray(a_basis, dtype=float).reshape(-1, g.dim)
        self.weights = np.asarray(weights, dtype=float).reshape(self.n_dim, self.rank)
        self.name = name or g.name
        self._n_mats = np.tensordot(self.n_basis, g.basis, axes=1)
        self._a_mats = np.tensordot(self.a_basis, g.basis, axes=1)
        logger.debug("Solvable group %s: dim n = %d, dim a = %d", self.name, self.n_dim, self.rank)

    @property
    def n_dim(self) -> int:
        return self.n_basis.shape[0]

    @property
    def rank(self) -> int:
        return self.a_basis.shape[0]

    @property
    def dim(self) -> int:
        return self.n_dim + self.rank

    @property
    def basis(self) -> np.ndarray:
        return np.vstack([self.n_basis, self.a_basis])

    def identity(self) -> GroupPoint:
        return GroupPoint(np.zeros(self.n_dim), np.zeros(self.rank))

    def point(self, X, H) -> GroupPoint:
        X = np.asarray(X, dtype=float).reshape(-1)
        H = np.asarray(H, dtype=float).reshape(-1)
        if X.shape[0] != self.n_dim or H.shape[0] != self.rank:
            raise DimensionMismatch(f"{self.name}: point needs {self.n_dim} X and {self.rank} H "
                                    f"coordinates, got {X.shape[0]} and {H.shape[0]}")
        if not is_nilpotent(self.n_matrix(X)):
            raise NonUnipotentProduct(f"{self.name}: X does not give a nilpotent matrix")
        return GroupPoint(X, H)

    def point_from_json(self, data) -> GroupPoint:
        if not isinstance(data, dict) or set(data) != {"X", "H"}:
            raise MalformedPoint('point must be an object {"X": [...], "H": [...]}')
        try:
            X = np.array(data["X"], dtype=float)
            H = np.array(data["H"], dtype=float)
        except (TypeError, ValueError) as exc:
            raise MalformedPoint(f"point coordinates must be numbers: {exc}") from exc
        if X.ndim != 1 or H.ndim != 1 or X.shape[0] != self.n_dim or H.shape[0] != self.rank:
            raise MalformedPoint(f"{self.name}: expected {self.n_dim} X and {self.rank} H coordinates")
        if not (np.all(np.isfinite(X)) and np.all(np.isfinite(H))):
            raise MalformedPoint("point coordinates must be finite")
        return GroupPoint(X, H)

    # -- matrices ----------------------------------------------------------
    def n_matrix(self, X) -> np.ndarray:
        return np.tensordot(X, self._n_mats, axes=1)

    def a_matrix(self, H) -> np.ndarray:
        return np.tensordot(H, self._a_mats, axes=1)

    def to_matrix(self, p: GroupPoint) -> np.ndarray:
        """exp(X)·exp(H) in the realization; exp(H) by spectral decomposition."""
        values, vectors = np.linalg.eigh(self.a_matrix(p.H))
        exp_h = (vectors * np.exp(values)) @ vectors.T
        return nilpotent_exp(self.n_matrix(p.X)) @ exp_h

    def conjugate_by_a(self, H, X) -> np.ndarray:
        """Coordinates of Ad(exp H) X for X in n."""
        return np.exp(self.weights @ H) * X

    # -- group law ---------------------------------------------------------
    def multiply(self, p1: GroupPoint, p2: GroupPoint) -> GroupPoint:
        if not self.n_dim:
            return GroupPoint(p1.X, p1.H + p2.H)
        shifted = self.conjugate_by_a(p1.H, p2.X)
        if not p1.X.any():
            return GroupPoint(shifted, p1.H + p2.H)
        product = nilpotent_exp(self.n_matrix(p1.X)) @ nilpotent_exp(self.n_matrix(shifted))
        Z = product - np.eye(product.shape[0])
        if not is_nilpotent(Z):
            raise NonUnipotentProduct(f"{self.name}: product of unipotent factors is not unipotent")
        coords, residual = self.g.coords(nilpotent_log(product))
        X = self.n_basis @ self.g.gram @ coords
        outside = np.abs(coords - X @ self.n_basis).max()
        scale = 1.0 + np.abs(coords).max()
        if residual > config.IDENTITY_TOL * scale or outside > config.IDENTITY_TOL * scale:
            raise NonUnipotentProduct(f"{self.name}: logarithm of the product leaves n "
                                      f"({max(residual, outside):.3e})")
        return GroupPoint(X, p1.H + p2.H)

    def inverse(self, p: GroupPoint) -> GroupPoint:
        # (exp X exp H)^-1 = exp(-H) exp(-X) = exp(-Ad(exp -H) X) exp(-H)
        return GroupPoint(-self.conjugate_by_a(-p.H, p.X), -p.H)

    def __repr__(self):
        return f"SolvableGroup({self.name!r}, n={self.n_dim}, a={self.rank})"


def group_multiply(group: SolvableGroup, p1: GroupPoint, p2: GroupPoint) -> GroupPoint:
    return group.multiply(p1, p2)


def sample_points(group: SolvableGroup, count: int, seed: int = config.DEFAULT_SEED,
                  box: float = config.SAMPLE_BOX, rng: Optional[np.random.Generator] = None
                  ) -> List[GroupPoint]:
    """Points with every coordinate uniform in [-box, box]."""
    rng = rng if rng is not None else np.random.default_rng(seed)
    points = []
    for _ in range(count):
        X = rng.uniform(-box, box, size=group.n_dim)
        H = rng.uniform(-box, box, size=group.rank)
        points.append(GroupPoint(X, H))
    return points
