"""Bracket, invariant form, inner product and Cartan decomposition.

Algebra elements are coordinate vectors with respect to the realization's
matrix basis. Subspaces are stored as 2-d arrays whose rows are coordinate
vectors, orthonormal for the inner product ⟨X,Y⟩ = -B(X, θY).
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Optional

import numpy as np

from . import config
from .errors import DimensionMismatch, RealizationError, ThetaNotInvolutive

logger = logging.getLogger(__name__)


# -- Linear algebra helpers --------------------------------------------------

def orthonormalize(vectors, gram: np.ndarray, tol: float = config.SPAN_TOL,
                   start: Optional[np.ndarray] = None) -> np.ndarray:
    """Gram-Schmidt with a fixed pivoting order.

    Vectors are visited in the order given; a vector whose residual norm
    falls below ``tol`` is dropped. If ``start`` is given (an orthonormal
    block) the result extends it and only the new rows are returned.

    Arguments:
        vectors: rows to orthonormalize
        gram (numpy.ndarray): symmetric positive-definite Gram matrix
        tol: drop threshold on the residual norm
        start: optional orthonormal rows that the result must be orthogonal to
    """
    n = gram.shape[0]
    basis = [] if start is None else [np.asarray(v, dtype=float) for v in start]
    first_new = len(basis)
    for v in np.atleast_2d(np.asarray(vectors, dtype=float)):
        if v.size == 0:
            continue
        if v.shape[0] != n:
            raise DimensionMismatch(f"vector of length {v.shape[0]} in a space of dimension {n}")
        w = v.copy()
        # two passes keep the residual orthogonal to working precision
        for _ in range(2):
            for b in basis:
                w = w - (b @ gram @ w) * b
        norm = np.sqrt(max(w @ gram @ w, 0.0))
        if norm > tol:
            basis.append(w / norm)
    new = basis[first_new:]
    if not new:
        return np.zeros((0, n))
    return np.array(new)


def span_residual(vectors, basis: np.ndarray, gram: np.ndarray) -> float:
    """Largest norm of the part of ``vectors`` orthogonal to span(basis).

    ``basis`` must be orthonormal for ``gram``.
    """
    vectors = np.atleast_2d(np.asarray(vectors, dtype=float))
    if vectors.size == 0:
        return 0.0
    if basis.shape[0] == 0:
        rest = vectors
    else:
        coeffs = vectors @ gram @ basis.T
        rest = vectors - coeffs @ basis
    norms = np.einsum("ij,jk,ik->i", rest, gram, rest)
    return float(np.sqrt(max(norms.max(), 0.0)))


def snap_value(x: float, max_denominator: int = config.SNAP_MAX_DENOMINATOR,
               tol: float = config.SNAP_TOL):
    """Nearest rational with a small denominator, or None if none is close."""
    trials = {}
    for q in range(1, max_denominator + 1):
        p = round(x * q)
        trials[Fraction(p, q)] = abs(x - p / q)
    best, err = min(trials.items(), key=lambda item: (item[1], item[0].denominator))
    if err <= tol:
        return best
    return None


# -- Realization -------------------------------------------------------------

class LieAlgebraRealization(object):
    """A real matrix Lie algebra with its Killing-type form and Cartan involution.

    Arguments:
        name (str): catalog id of the algebra
        matrices: sequence of d×d real matrices spanning the algebra
        form_scale: positive factor applied to the Killing form

    The Cartan involution is θ(X) = -Xᵀ; every matrix model used here is
    closed under transposition.
    """

    def __init__(self, name: str, matrices, form_scale=1):
        self.name = name
        self.basis = np.array(matrices, dtype=float)
        if self.basis.ndim != 3 or self.basis.shape[1] != self.basis.shape[2]:
            raise RealizationError(f"{name}: basis must be a stack of square matrices")
        self.dim = self.basis.shape[0]
        self.size = self.basis.shape[1]
        self.form_scale = form_scale

        self._flat = self.basis.reshape(self.dim, -1).T
        self._pinv = np.linalg.pinv(self._flat)
        if np.linalg.matrix_rank(self._flat) != self.dim:
            raise RealizationError(f"{name}: basis matrices are linearly dependent")

        self.bracket_table, self.closure_residual = self._structure_constants()
        self.theta = self._theta_matrix()
        self.killing = np.einsum("ilk,jkl->ij", self.bracket_table, self.bracket_table)
        self.B = float(form_scale) * self.killing
        gram = -self.B @ self.theta
        self.gram = 0.5 * (gram + gram.T)
        self.basis.setflags(write=False)
        logger.debug("Realized %s: dim %d in %dx%d matrices", name, self.dim, self.size, self.size)

    # -- construction ------------------------------------------------------
    def _structure_constants(self):
        left = np.einsum("iab,jbc->ijac", self.basis, self.basis)
        comm = (left - left.transpose(1, 0, 2, 3)).reshape(self.dim * self.dim, -1)
        table = comm @ self._pinv.T
        residual = np.abs(table @ self._flat.T - comm).max()
        return table.reshape(self.dim, self.dim, self.dim), float(residual)

    def _theta_matrix(self):
        images = -np.transpose(self.basis, (0, 2, 1))
        coords, residual = self.coords_many(images)
        if residual > config.IDENTITY_TOL:
            raise RealizationError(f"{self.name}: the span is not closed under X -> -Xᵀ ({residual:.3e})")
        return coords.T

    # -- coordinates -------------------------------------------------------
    def coords(self, matrix):
        """Coordinates of a d×d matrix; returns (coords, residual outside the span)."""
        m = np.asarray(matrix, dtype=float).reshape(-1)
        c = self._pinv @ m
        return c, float(np.abs(self._flat @ c - m).max())

    def coords_many(self, matrices):
        m = np.asarray(matrices, dtype=float).reshape(len(matrices), -1)
        c = m @ self._pinv.T
        return c, float(np.abs(c @ self._flat.T - m).max()) if len(m) else 0.0

    def matrix(self, X) -> np.ndarray:
        X = self._check(X)
        return np.tensordot(X, self.basis, axes=1)

    def _check(self, X) -> np.ndarray:
        X = np.asarray(X, dtype=float)
        if X.shape[-1] != self.dim:
            raise DimensionMismatch(f"{self.name}: expected {self.dim} coordinates, got {X.shape[-1]}")
        return X

    # -- algebra operations ----------------------------------------------
    def ad(self, X) -> np.ndarray:
        """Matrix of ad X acting on coordinate column vectors."""
        X = self._check(X)
        return np.einsum("i,ijk->kj", X, self.bracket_table)

    def bracket(self, X, Y) -> np.ndarray:
        X = self._check(X)
        Y = self._check(Y)
        return np.einsum("i,j,ijk->k", X, Y, self.bracket_table)

    def form(self, X, Y) -> float:
        return float(self._check(X) @ self.B @ self._check(Y))

    def inner(self, X, Y) -> float:
        return float(self._check(X) @ self.gram @ self._check(Y))

    def norm(self, X) -> float:
        return float(np.sqrt(max(self.inner(X, X), 0.0)))

    def apply_theta(self, X) -> np.ndarray:
        return self.theta @ self._check(X)

    # -- invariants --------------------------------------------------------
    def jacobi_residual(self) -> float:
        c = self.bracket_table
        # [[e_i,e_j],e_l] summed cyclically over (i,j,l)
        term = np.einsum("ijm,mln->ijln", c, c)
        cyclic = term + term.transpose(1, 2, 0, 3) + term.transpose(2, 0, 1, 3)
        return float(np.abs(cyclic).max())

    def theta_residuals(self) -> Dict[str, float]:
        T = self.theta
        involution = np.abs(T @ T - np.eye(self.dim)).max()
        lhs = np.einsum("ijk,lk->ijl", self.bracket_table, T)
        rhs = np.einsum("ai,bj,abk->ijk", T, T, self.bracket_table)
        return {"involution": float(involution), "automorphism": float(np.abs(lhs - rhs).max())}

    def form_residuals(self) -> Dict[str, float]:
        B = self.B
        symmetry = np.abs(B - B.T).max()
        # B([Z,X],Y) + B(X,[Z,Y]) for every basis triple
        adz = np.einsum("zxk->zkx", self.bracket_table)
        invariance = np.einsum("zkx,ky->zxy", adz, B) + np.einsum("xk,zky->zxy", B, adz)
        return {"symmetry": float(symmetry), "ad_invariance": float(np.abs(invariance).max())}

    def __repr__(self):
        return f"LieAlgebraRealization({self.name!r}, dim={self.dim}, size={self.size})"


def bracket(g: LieAlgebraRealization, X, Y) -> np.ndarray:
    return g.bracket(X, Y)


def inner_product(g: LieAlgebraRealization, X, Y) -> float:
    return g.inner(X, Y)


# -- Cartan decomposition ----------------------------------------------------

@dataclass(frozen=True)
class InnerProduct:
    gram: np.ndarray

    def __call__(self, X, Y) -> float:
        return float(np.asarray(X) @ self.gram @ np.asarray(Y))

    def min_eigenvalue(self) -> float:
        return float(np.linalg.eigvalsh(self.gram).min())


@dataclass(frozen=True)
class CartanDecomposition:
    k_basis: np.ndarray
    p_basis: np.ndarray
    residuals: Dict[str, float] = field(default_factory=dict)

    @property
    def onb(self) -> np.ndarray:
        """Orthonormal basis of g: k first, then p."""
        return np.vstack([self.k_basis, self.p_basis])


def cartan_decompose(g: LieAlgebraRealization, tol: float = config.IDENTITY_TOL) -> CartanDecomposition:
    """Split g into the ±1-eigenspaces of θ and measure the bracket inclusions."""
    theta_res = g.theta_residuals()
    if theta_res["involution"] > tol:
        raise ThetaNotInvolutive(f"{g.name}: |θ²-1| = {theta_res['involution']:.3e}")

    eye = np.eye(g.dim)
    k_basis = orthonormalize(((eye + g.theta) / 2).T, g.gram)
    p_basis = orthonormalize(((eye - g.theta) / 2).T, g.gram)
    if k_basis.shape[0] + p_basis.shape[0] != g.dim:
        raise ThetaNotInvolutive(f"{g.name}: eigenspaces of θ do not span g")

    def inclusion(A, C, target):
        brackets = np.einsum("ai,bj,ijk->abk", A, C, g.bracket_table).reshape(-1, g.dim)
        return span_residual(brackets, target, g.gram)

    residuals = {
        "kk_in_k": inclusion(k_basis, k_basis, k_basis),
        "kp_in_p": inclusion(k_basis, p_basis, p_basis),
        "pp_in_k": inclusion(p_basis, p_basis, k_basis),
        "theta_automorphism": theta_res["automorphism"],
    }
    logger.info("Cartan decomposition of %s: dim k = %d, dim p = %d",
                g.name, k_basis.shape[0], p_basis.shape[0])
    return CartanDecomposition(k_basis=k_basis, p_basis=p_basis, residuals=residuals)


def adjointness_residuals(g: LieAlgebraRealization, cartan: CartanDecomposition) -> Dict[str, float]:
    """ad X is self-adjoint for X in p and skew-adjoint for X in k."""
    G = g.gram
    p_res = max((np.abs(G @ g.ad(X) - (G @ g.ad(X)).T).max() for X in cartan.p_basis), default=0.0)
    k_res = max((np.abs(G @ g.ad(X) + (G @ g.ad(X)).T).max() for X in cartan.k_basis), default=0.0)
    return {"p_self_adjoint": float(p_res), "k_skew_adjoint": float(k_res)}


def form_definiteness(g: LieAlgebraRealization, cartan: CartanDecomposition) -> Dict[str, float]:
    """Extreme eigenvalues of B restricted to k and p."""
    Bk = cartan.k_basis @ g.B @ cartan.k_basis.T
    Bp = cartan.p_basis @ g.B @ cartan.p_basis.T
    return {
        "k_max": float(np.linalg.eigvalsh(Bk).max()) if len(Bk) else -np.inf,
        "p_min": float(np.linalg.eigvalsh(Bp).min()) if len(Bp) else np.inf,
        "gram_min": InnerProduct(g.gram).min_eigenvalue(),
    }
