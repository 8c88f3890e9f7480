"""Rank-one data of a simple root and the projection NA -> N^βA^β."""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Dict, Tuple

import numpy as np
from scipy.linalg import null_space

from . import config
from .algebra_core import orthonormalize, span_residual
from .errors import IdealCheckFailure
from .roots import RestrictedRoot, RestrictedRootSystem, bracket_rows
from .solvable import GroupPoint, SolvableGroup

logger = logging.getLogger(__name__)

HYPERBOLIC_TYPES = {0: "real", 1: "complex", 3: "quaternionic"}


@dataclass(frozen=True, eq=False)
class RankOneData:
    """Everything attached to a simple root β.

    ``n_beta_basis`` spans g_β ⊕ g_2β, ``a_beta_basis`` is H_β/|H_β| and
    ``g_beta_full`` spans the subalgebra generated by g_β and g_-β.
    """
    beta: RestrictedRoot
    position: int
    H_beta: np.ndarray
    n_beta_basis: np.ndarray
    n_beta_labels: Tuple[int, ...]
    a_beta_basis: np.ndarray
    k_beta_basis: np.ndarray
    g_beta_full: np.ndarray
    dims: Tuple[int, int, int]
    residuals: Dict[str, float] = field(default_factory=dict)

    @property
    def m_beta(self) -> int:
        return self.dims[0]

    @property
    def m_2beta(self) -> int:
        return self.dims[1]

    @property
    def norm2(self) -> float:
        """⟨β,β⟩."""
        return float(self.beta.coords @ self.beta.coords)

    @property
    def target_drift(self) -> float:
        return (self.m_beta + 2 * self.m_2beta) * self.norm2

    @property
    def hyperbolic_type(self) -> str:
        return HYPERBOLIC_TYPES.get(self.m_2beta, "exceptional")

    def describe(self) -> str:
        dim = self.dims[2]
        if self.m_2beta == 0:
            return f"real hyperbolic space of dimension {dim}"
        return f"{self.hyperbolic_type} hyperbolic space of real dimension {dim}"


def _generated_subalgebra(system: RestrictedRootSystem, generators: np.ndarray) -> np.ndarray:
    g = system.g
    span = orthonormalize(generators, g.gram)
    for _ in range(g.dim):
        extra = orthonormalize(bracket_rows(g, span, span), g.gram, start=span)
        if extra.shape[0] == 0:
            break
        span = np.vstack([span, extra])
    return span


def _intersection_dimension(A: np.ndarray, C: np.ndarray) -> int:
    if A.shape[0] == 0 or C.shape[0] == 0:
        return 0
    return null_space(np.vstack([A, -C]).T, rcond=config.SPAN_TOL).shape[1]


def build_rank_one(system: RestrictedRootSystem, beta: RestrictedRoot) -> RankOneData:
    """g^β, n^β, a^β and k^β for the simple root β."""
    g = system.g
    position = system.simple_position(beta)
    double = system.find_root(2 * beta.coords)
    negative = system.find_root(-beta.coords)

    n_roots = [beta] + ([double] if double is not None else [])
    n_beta = system.span(n_roots)
    labels = tuple(r.index for r in n_roots for _ in range(system.multiplicities[r.index]))
    H_beta = beta.H_alpha
    a_beta = (H_beta / g.norm(H_beta)).reshape(1, -1)

    g_beta = _generated_subalgebra(system, np.vstack([system.root_spaces[beta.index],
                                                      system.root_spaces[negative.index]]))
    fixed = (g_beta + (g.theta @ g_beta.T).T) / 2
    k_beta = orthonormalize(fixed, g.gram)
    k_check = _intersection_dimension(g_beta, system.cartan.k_basis)

    theta_image = (g.theta @ g_beta.T).T
    closure = bracket_rows(g, g_beta, g_beta)
    m_beta = system.multiplicities[beta.index]
    m_2beta = system.multiplicity(double)
    residuals = {
        "dual_vector": float(np.abs(np.array([g.inner(H_beta, H) for H in system.a.a_basis])
                                    - beta.coords).max()),
        "theta_stable": span_residual(theta_image, g_beta, g.gram),
        "closed": span_residual(closure, g_beta, g.gram),
        "k_beta_dimension": float(abs(k_beta.shape[0] - k_check)),
        "contains_n_beta": span_residual(n_beta, g_beta, g.gram),
        "contains_a_beta": span_residual(a_beta, g_beta, g.gram),
    }
    data = RankOneData(
        beta=beta, position=position, H_beta=H_beta,
        n_beta_basis=n_beta, n_beta_labels=labels, a_beta_basis=a_beta,
        k_beta_basis=k_beta, g_beta_full=g_beta,
        dims=(m_beta, m_2beta, 1 + m_beta + m_2beta), residuals=residuals,
    )
    logger.info("Rank-one data for simple root %d of %s: m_beta=%d, m_2beta=%d, dim g^beta=%d",
                position, g.name, m_beta, m_2beta, g_beta.shape[0])
    return data


def source_group(system: RestrictedRootSystem) -> SolvableGroup:
    """NA with n the sum of the positive root spaces."""
    labels = system.n_labels()
    weights = np.array([system.roots[i].coords for i in labels]).reshape(len(labels), system.rank)
    return SolvableGroup(system.g, system.n_basis(), system.a.a_basis, weights, name=f"{system.g.name}:NA")


def target_group(system: RestrictedRootSystem, rankone: RankOneData) -> SolvableGroup:
    """N^βA^β with a^β spanned by H_β/|H_β|."""
    unit = rankone.a_beta_basis[0]
    weights = np.array([[system.g.inner(system.roots[i].H_alpha, unit)] for i in rankone.n_beta_labels])
    return SolvableGroup(system.g, rankone.n_beta_basis, rankone.a_beta_basis, weights,
                         name=f"{system.g.name}:NA[beta={rankone.position}]")


@dataclass(frozen=True, eq=False)
class SubmersionProjection:
    """Orthogonal projection n⊕a -> n^β⊕a^β, in coordinates of the source frame.

    ``n_block`` and ``a_block`` map source X and H coordinates to target
    coordinates; ``kernel_basis`` is n(β)⊕ker β in algebra coordinates.
    """
    source: SolvableGroup
    target: SolvableGroup
    pi_matrix: np.ndarray
    n_block: np.ndarray
    a_block: np.ndarray
    kernel_basis: np.ndarray
    residuals: Dict[str, float] = field(default_factory=dict)

    def apply(self, vectors) -> np.ndarray:
        """Projection of algebra-coordinate vectors lying in n⊕a."""
        T = self.target.basis
        return np.asarray(vectors) @ self.source.g.gram @ T.T @ T


def build_projection(system: RestrictedRootSystem, rankone: RankOneData) -> SubmersionProjection:
    g = system.g
    source = source_group(system)
    target = target_group(system, rankone)
    E, T, G = source.basis, target.basis, g.gram

    pi_matrix = E @ G @ T.T @ T @ G @ E.T
    n_block = target.n_basis @ G @ source.n_basis.T
    a_block = target.a_basis @ G @ source.a_basis.T

    ker_beta = orthonormalize(system.a.a_basis, G, start=rankone.a_beta_basis)
    kernel = np.vstack([system.span(system.sigma_beta(rankone.beta)), ker_beta])

    ideal = span_residual(bracket_rows(g, kernel, E), kernel, G) if kernel.shape[0] else 0.0
    if ideal > config.IDENTITY_TOL:
        raise IdealCheckFailure(f"{g.name}: ker pi is not an ideal of n+a ({ideal:.3e})")

    projected = (T.T @ T @ G @ E.T).T
    lhs = bracket_rows(g, E, E) @ G @ T.T @ T
    rhs = bracket_rows(g, projected, projected)
    residuals = {
        "idempotent": float(np.abs(pi_matrix @ pi_matrix - pi_matrix).max()),
        "self_adjoint": float(np.abs(pi_matrix - pi_matrix.T).max()),
        "kernel_ideal": float(ideal),
        "homomorphism": float(np.abs(lhs - rhs).max()) if lhs.size else 0.0,
        "kernel_dimension": float(abs(kernel.shape[0] + T.shape[0] - E.shape[0])),
        "isometry": float(np.abs(T @ G @ T.T - np.eye(T.shape[0])).max()),
        "retraction": float(np.abs(T @ G @ T.T @ T - T).max()),
    }
    logger.info("Projection for simple root %d of %s: dim ker = %d, dim image = %d",
                rankone.position, g.name, kernel.shape[0], T.shape[0])
    return SubmersionProjection(source, target, pi_matrix, n_block, a_block, kernel, residuals)


def project_point(pi: SubmersionProjection, p: GroupPoint) -> GroupPoint:
    """The group homomorphism NA -> N^βA^β integrating π."""
    return GroupPoint(pi.n_block @ p.X, pi.a_block @ p.H)


def embed(pi: SubmersionProjection, q: GroupPoint) -> GroupPoint:
    """Inclusion N^βA^β -> NA."""
    return GroupPoint(pi.n_block.T @ q.X, pi.a_block.T @ q.H)


def beta_coordinate(rankone: RankOneData, p: GroupPoint, target: bool = False) -> float:
    """t = β(log_A a) for a point of NA, or of N^βA^β when ``target`` is set."""
    if target:
        return float(np.sqrt(rankone.norm2) * p.H[0])
    return float(rankone.beta.coords @ p.H)
