"""Maximal abelian subspaces, restricted roots, simple roots and root reflections."""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
from scipy.linalg import null_space

from . import config
from .algebra_core import (CartanDecomposition, LieAlgebraRealization,
                           orthonormalize, snap_value, span_residual)
from .errors import (ClusteringAmbiguity, DecompositionFailure, NonMaximalA,
                     RootNotFound)

logger = logging.getLogger(__name__)

# bases tried, in order, for the weights of the regular element
REGULAR_BASES = (10.0, 7.0, 13.0, 3.0)


@dataclass(frozen=True, eq=False)
class MaximalAbelian:
    a_basis: np.ndarray
    residuals: Dict[str, float] = field(default_factory=dict)

    @property
    def rank(self) -> int:
        return self.a_basis.shape[0]


@dataclass(frozen=True, eq=False)
class RestrictedRoot:
    """A restricted root, given by its values on the orthonormal a-basis.

    ``H_alpha`` is the dual vector in algebra coordinates, α(H) = ⟨H_α, H⟩.
    ``coefficients`` are the integer coordinates in the simple-root basis.
    """
    index: int
    coords: np.ndarray
    H_alpha: np.ndarray
    snapped: Tuple[Optional[object], ...] = ()
    coefficients: Tuple[int, ...] = ()

    @property
    def height(self) -> int:
        return sum(self.coefficients)

    @property
    def is_positive(self) -> bool:
        return self.height > 0

    def label(self) -> str:
        return "(" + ",".join(str(c) for c in self.coefficients) + ")"


def bracket_rows(g: LieAlgebraRealization, A: np.ndarray, C: np.ndarray) -> np.ndarray:
    if A.shape[0] == 0 or C.shape[0] == 0:
        return np.zeros((0, g.dim))
    return np.einsum("ai,bj,ijk->abk", A, C, g.bracket_table).reshape(-1, g.dim)


# -- Maximal abelian subspace ------------------------------------------------

def centralizer_in_p(g: LieAlgebraRealization, cartan: CartanDecomposition, vectors) -> np.ndarray:
    """Orthonormal basis of the elements of p commuting with every row of ``vectors``."""
    P = cartan.p_basis
    vectors = np.atleast_2d(vectors)
    if vectors.size == 0:
        return P
    M = np.vstack([g.ad(H) @ P.T for H in vectors])
    kernel = null_space(M, rcond=config.SPAN_TOL)
    return orthonormalize(kernel.T @ P, g.gram)


def find_maximal_abelian(g: LieAlgebraRealization, cartan: CartanDecomposition) -> MaximalAbelian:
    """Greedy maximal abelian subspace of p, grown from the first p-basis vector."""
    a_basis = orthonormalize(cartan.p_basis[:1], g.gram)
    while True:
        centralizer = centralizer_in_p(g, cartan, a_basis)
        extra = orthonormalize(centralizer, g.gram, start=a_basis)
        if extra.shape[0] == 0:
            break
        a_basis = np.vstack([a_basis, extra[:1]])
    a = MaximalAbelian(a_basis, residuals=abelian_residuals(g, cartan, a_basis))
    logger.info("Maximal abelian subspace of %s has rank %d", g.name, a.rank)
    return a


def abelian_residuals(g, cartan, a_basis) -> Dict[str, float]:
    commutators = bracket_rows(g, a_basis, a_basis)
    abelian = float(np.abs(commutators).max()) if commutators.size else 0.0
    centralizer = centralizer_in_p(g, cartan, a_basis)
    return {
        "abelian": abelian,
        "centralizer_excess": float(centralizer.shape[0] - a_basis.shape[0]),
        "centralizer_in_a": span_residual(centralizer, a_basis, g.gram),
    }


# -- Root system -------------------------------------------------------------

class RestrictedRootSystem(object):
    """Restricted roots of g with respect to a, with root spaces and positivity.

    Roots are ordered positives first, by height, then the negatives in the
    same order. Root spaces are orthonormal rows in algebra coordinates.
    """

    def __init__(self, g, cartan, a, roots, root_spaces, g0, regular_element, simples):
        self.g = g
        self.cartan = cartan
        self.a = a
        self.roots: List[RestrictedRoot] = roots
        self.root_spaces: List[np.ndarray] = root_spaces
        self.multiplicities: List[int] = [space.shape[0] for space in root_spaces]
        self.g0 = g0
        self.regular_element = regular_element
        self.positives = [r.index for r in roots if r.is_positive]
        self.simples = list(simples)

    @property
    def rank(self) -> int:
        return self.a.rank

    def positive_roots(self) -> List[RestrictedRoot]:
        return [self.roots[i] for i in self.positives]

    def simple(self, position: int) -> RestrictedRoot:
        return self.roots[self.simples[position]]

    def simple_position(self, root: RestrictedRoot) -> int:
        return self.simples.index(root.index)

    def find_root(self, coords, tol: float = config.ROOT_MATCH_TOL) -> Optional[RestrictedRoot]:
        coords = np.asarray(coords, dtype=float)
        for root in self.roots:
            if np.abs(root.coords - coords).max() <= tol:
                return root
        return None

    def multiplicity(self, root: Optional[RestrictedRoot]) -> int:
        return 0 if root is None else self.multiplicities[root.index]

    def inner(self, alpha: RestrictedRoot, beta: RestrictedRoot) -> float:
        return float(alpha.coords @ beta.coords)

    def inner_via_duals(self, alpha: RestrictedRoot, beta: RestrictedRoot) -> float:
        return self.g.inner(alpha.H_alpha, beta.H_alpha)

    def sigma_beta(self, beta: RestrictedRoot) -> List[RestrictedRoot]:
        """Positive roots other than β and 2β."""
        excluded = {beta.index}
        double = self.find_root(2 * beta.coords)
        if double is not None:
            excluded.add(double.index)
        return [r for r in self.positive_roots() if r.index not in excluded]

    def span(self, roots: Sequence[RestrictedRoot]) -> np.ndarray:
        blocks = [self.root_spaces[r.index] for r in roots]
        if not blocks:
            return np.zeros((0, self.g.dim))
        return np.vstack(blocks)

    def n_basis(self) -> np.ndarray:
        return self.span(self.positive_roots())

    def n_labels(self) -> List[int]:
        """Root index of every row of ``n_basis``."""
        return [r.index for r in self.positive_roots() for _ in range(self.multiplicities[r.index])]

    def is_split(self) -> bool:
        return all(self.multiplicities[i] == 1 for i in self.simples)

    def __repr__(self):
        return (f"RestrictedRootSystem({self.g.name!r}, rank={self.rank}, "
                f"positives={len(self.positives)})")


def _cluster(values: np.ndarray, tol: float) -> List[np.ndarray]:
    order = np.argsort(values)
    clusters = [[order[0]]]
    for prev, cur in zip(order[:-1], order[1:]):
        if values[cur] - values[prev] > tol:
            clusters.append([])
        clusters[-1].append(cur)
    return [np.array(c) for c in clusters]


def _joint_eigenspaces(ops, weights, tol):
    """Clusters of the weighted operator, or None if they are not joint eigenspaces."""
    reg = np.tensordot(weights, ops, axes=1)
    values, vectors = np.linalg.eigh(reg)
    found = []
    for idx in _cluster(values, tol):
        V = vectors[:, idx]
        coords = np.array([np.trace(V.T @ M @ V) / len(idx) for M in ops])
        residual = max(np.abs(M @ V - c * V).max() for M, c in zip(ops, coords))
        if residual > tol:
            logger.debug("cluster of size %d is not a joint eigenspace (%.3e)", len(idx), residual)
            return None
        value = float(values[idx].mean())
        is_zero = np.abs(coords).max() <= tol
        if not is_zero and abs(value) <= config.POSITIVITY_TOL:
            logger.debug("a root vanishes on the regular element")
            return None
        found.append((coords, V, value, is_zero))
    return found


def extract_roots(g: LieAlgebraRealization, cartan: CartanDecomposition, a: MaximalAbelian,
                  tol: float = config.CLUSTER_TOL) -> RestrictedRootSystem:
    """Joint eigendecomposition of ad(a) and the positive system of a regular element."""
    centralizer = centralizer_in_p(g, cartan, a.a_basis)
    if centralizer.shape[0] > a.rank:
        raise NonMaximalA(f"{g.name}: centralizer of a in p has dimension "
                          f"{centralizer.shape[0]} > rank {a.rank}")

    onb = cartan.onb
    ops = []
    for H in a.a_basis:
        M = onb @ g.gram @ g.ad(H) @ onb.T
        ops.append(0.5 * (M + M.T))
    ops = np.array(ops)

    for base in REGULAR_BASES:
        weights = base ** np.arange(a.rank - 1, -1, -1, dtype=float)
        found = _joint_eigenspaces(ops, weights, tol)
        if found is not None:
            break
    else:
        raise ClusteringAmbiguity(f"{g.name}: no regular element separates the restricted roots")
    regular = weights @ a.a_basis

    g0 = np.zeros((0, g.dim))
    raw = []
    for coords, V, value, is_zero in found:
        space = V.T @ onb
        if is_zero:
            g0 = np.vstack([g0, space])
        else:
            raw.append((coords, space, value))

    positive = [item for item in raw if item[2] > config.POSITIVITY_TOL]
    simple = []
    for coords, _, _ in positive:
        is_sum = any(
            np.abs(c1 + c2 - coords).max() <= config.ROOT_MATCH_TOL
            for c1, _, _ in positive for c2, _, _ in positive
        )
        if not is_sum:
            simple.append(coords)
    simple.sort(key=lambda c: -float(c @ weights))
    if len(simple) != a.rank:
        raise DecompositionFailure(f"{g.name}: found {len(simple)} simple roots for rank {a.rank}")
    simple_matrix = np.array(simple)

    entries = []
    for coords, space, value in raw:
        coefficients = decompose_coords(simple_matrix, coords)
        sign_ok = all(c >= 0 for c in coefficients) if value > 0 else all(c <= 0 for c in coefficients)
        if not sign_ok:
            raise DecompositionFailure(f"{g.name}: root {coords} has mixed-sign coefficients {coefficients}")
        entries.append((coefficients, coords, space))
    entries.sort(key=lambda e: (sum(e[0]) < 0, abs(sum(e[0])), tuple(-abs(c) for c in e[0])))

    roots, spaces = [], []
    for index, (coefficients, coords, space) in enumerate(entries):
        roots.append(RestrictedRoot(
            index=index,
            coords=coords,
            H_alpha=coords @ a.a_basis,
            snapped=tuple(snap_value(x) for x in coords),
            coefficients=coefficients,
        ))
        spaces.append(space)
    simples = [r.index for r in roots if sorted(r.coefficients) == [0] * (a.rank - 1) + [1]]
    simples.sort(key=lambda i: roots[i].coefficients.index(1))

    system = RestrictedRootSystem(g, cartan, a, roots, spaces, g0, regular, simples)
    logger.info("Extracted %d positive roots of %s, multiplicities %s", len(system.positives),
                g.name, [system.multiplicities[i] for i in system.positives])
    return system


def decompose_coords(simple_matrix: np.ndarray, coords) -> Tuple[int, ...]:
    solution, *_ = np.linalg.lstsq(simple_matrix.T, np.asarray(coords, dtype=float), rcond=None)
    rounded = np.rint(solution)
    defect = max(np.abs(solution - rounded).max(),
                 np.abs(rounded @ simple_matrix - coords).max())
    if defect > config.SNAP_TOL:
        raise DecompositionFailure(f"root {coords} is not an integral combination of simple roots")
    return tuple(int(c) for c in rounded)


def decompose(system: RestrictedRootSystem, coords) -> Tuple[int, ...]:
    """Integer coefficients of ``coords`` in the simple-root basis."""
    simple_matrix = np.array([system.roots[i].coords for i in system.simples])
    return decompose_coords(simple_matrix, coords)


def simple_roots(system: RestrictedRootSystem) -> List[RestrictedRoot]:
    """The indecomposable positive roots, checked to decompose every positive root."""
    simples = [system.roots[i] for i in system.simples]
    if len(simples) != system.rank:
        raise DecompositionFailure(f"{system.g.name}: {len(simples)} simple roots for rank {system.rank}")
    for root in system.positive_roots():
        if any(c < 0 for c in decompose(system, root.coords)):
            raise DecompositionFailure(f"{system.g.name}: positive root {root.label()} "
                                       f"has a negative coefficient")
    return simples


def build_root_system(g: LieAlgebraRealization, cartan: CartanDecomposition) -> RestrictedRootSystem:
    return extract_roots(g, cartan, find_maximal_abelian(g, cartan))


# -- Reflections and Lemma 1 -------------------------------------------------

def reflect(system: RestrictedRootSystem, beta: RestrictedRoot, vector) -> np.ndarray:
    vector = np.asarray(vector, dtype=float)
    return vector - 2 * (vector @ beta.coords) / (beta.coords @ beta.coords) * beta.coords


def root_reflection(system: RestrictedRootSystem, beta: RestrictedRoot,
                    alpha: RestrictedRoot) -> RestrictedRoot:
    """σ_β(α) as a root of the system."""
    image = system.find_root(reflect(system, beta, alpha.coords))
    if image is None:
        raise RootNotFound(f"reflection of {alpha.label()} in {beta.label()} is not a root")
    return image


@dataclass
class Lemma1Report:
    beta: int
    m_beta: int
    m_2beta: int
    sigma_beta: Tuple[int, ...]
    ideal_residual: float
    weighted_sum: float
    sum_vector_residual: float
    permutation_ok: bool
    araki_ok: bool
    key_observation_ok: bool

    def passed(self, tol: float = config.IDENTITY_TOL) -> bool:
        return (self.ideal_residual < tol and abs(self.weighted_sum) < tol
                and self.sum_vector_residual < tol and self.permutation_ok
                and self.araki_ok and self.key_observation_ok)


def check_lemma1(system: RestrictedRootSystem, beta: RestrictedRoot) -> Lemma1Report:
    """Ideal property of n(β), the weighted root sum and the multiplicity parity."""
    g = system.g
    sigma = system.sigma_beta(beta)
    n_beta_part = system.span(sigma)
    brackets = bracket_rows(g, n_beta_part, system.n_basis())
    ideal = span_residual(brackets, n_beta_part, g.gram) if brackets.size else 0.0

    weighted = sum(system.multiplicities[r.index] * system.inner(r, beta) for r in sigma)
    total = sum((system.multiplicities[r.index] * r.coords for r in sigma), np.zeros(system.rank))
    sum_residual = float(np.abs(reflect(system, beta, total) - total).max())

    sigma_ids = {r.index for r in sigma}
    permutation_ok = True
    for root in sigma:
        image = system.find_root(reflect(system, beta, root.coords))
        if (image is None or image.index not in sigma_ids
                or system.multiplicities[image.index] != system.multiplicities[root.index]):
            permutation_ok = False

    m_beta = system.multiplicities[beta.index]
    m_2beta = system.multiplicity(system.find_root(2 * beta.coords))
    araki_ok = m_beta % 2 == 0 or m_2beta == 0

    position = system.simple_position(beta)
    key_ok = all(
        (root.index in sigma_ids)
        == any(c > 0 for j, c in enumerate(root.coefficients) if j != position)
        for root in system.positive_roots()
    )
    return Lemma1Report(
        beta=beta.index, m_beta=m_beta, m_2beta=m_2beta,
        sigma_beta=tuple(sorted(sigma_ids)),
        ideal_residual=float(ideal), weighted_sum=float(weighted),
        sum_vector_residual=sum_residual, permutation_ok=permutation_ok,
        araki_ok=araki_ok, key_observation_ok=key_ok,
    )


# -- Structure residuals -----------------------------------------------------

def decomposition_residuals(system: RestrictedRootSystem) -> Dict[str, float]:
    """Orthogonality, spanning and bracket compatibility of the root space decomposition."""
    g = system.g
    blocks = [system.g0] + system.root_spaces
    everything = np.vstack(blocks)
    overlap = everything @ g.gram @ everything.T
    orthogonality = float(np.abs(overlap - np.eye(everything.shape[0])).max())

    zero = np.zeros(system.rank)
    labelled = [(zero, system.g0)] + [(r.coords, system.root_spaces[r.index]) for r in system.roots]
    inclusion = 0.0
    for c1, s1 in labelled:
        for c2, s2 in labelled:
            target_coords = c1 + c2
            if np.abs(target_coords).max() <= config.ROOT_MATCH_TOL:
                target = system.g0
            else:
                root = system.find_root(target_coords)
                target = np.zeros((0, g.dim)) if root is None else system.root_spaces[root.index]
            brackets = bracket_rows(g, s1, s2)
            if brackets.size:
                inclusion = max(inclusion, span_residual(brackets, target, g.gram))

    symmetry = 0.0
    for root in system.roots:
        negative = system.find_root(-root.coords)
        if negative is None or system.multiplicities[negative.index] != system.multiplicities[root.index]:
            symmetry = np.inf
    inner_two_ways = max(
        (abs(system.inner(r1, r2) - system.inner_via_duals(r1, r2))
         for r1 in system.roots for r2 in system.roots), default=0.0)
    h_alpha = max(
        (float(np.abs(np.array([g.inner(r.H_alpha, H) for H in system.a.a_basis]) - r.coords).max())
         for r in system.roots), default=0.0)
    return {
        "orthogonality": orthogonality,
        "spanning": float(abs(everything.shape[0] - g.dim)),
        "bracket_inclusion": float(inclusion),
        "root_symmetry": float(symmetry),
        "inner_two_ways": float(inner_two_ways),
        "dual_vector": h_alpha,
    }
