"""Left-invariant Riemannian geometry of solvable groups.

The connection comes from the Koszul formula in an orthonormal frame,
curvature is algebraic in the frame, and the Laplace-Beltrami operator is
evaluated by finite differences along one-parameter subgroups.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Dict

import numpy as np
import sympy

from . import config
from .algebra_core import orthonormalize
from .errors import (DegeneratePlane, EvaluationFailure, NotClosedUnderBracket,
                     OrderOutOfRange, StepTooSmall)
from .rankone import RankOneData, SubmersionProjection, beta_coordinate
from .roots import RestrictedRootSystem, bracket_rows
from .solvable import GroupPoint, SolvableGroup

logger = logging.getLogger(__name__)

T = sympy.Symbol("t", real=True)


class LeftInvariantGeometry(object):
    """Levi-Civita data of the left-invariant metric on a solvable group.

    The metric is ⟨·,·⟩ on a and n_scale·⟨·,·⟩ on n, with n ⟂ a. Frame vectors
    are the group's n rows divided by sqrt(n_scale), then its a rows.

    Arguments:
        group (SolvableGroup): the group whose Lie algebra is n ⊕ a
        n_scale (float): factor applied to the metric on n
    """

    def __init__(self, group: SolvableGroup, n_scale: float = 1.0):
        if n_scale <= 0:
            raise ValueError("n_scale must be positive")
        self.group = group
        self.n_scale = float(n_scale)
        g = group.g
        lengths = np.concatenate([np.full(group.n_dim, np.sqrt(n_scale)), np.ones(group.rank)])
        self.frame = group.basis / lengths[:, None]
        self._lengths = lengths
        self.frame_X = np.vstack([np.diag(1 / lengths[:group.n_dim]),
                                  np.zeros((group.rank, group.n_dim))])
        self.frame_H = np.vstack([np.zeros((group.n_dim, group.rank)), np.eye(group.rank)])

        brackets = bracket_rows(g, self.frame, self.frame)
        coords = self.to_frame(brackets)
        residual = float(np.abs(coords @ self.frame - brackets).max()) if brackets.size else 0.0
        if residual > config.IDENTITY_TOL:
            raise NotClosedUnderBracket(f"{group.name}: frame brackets leave n+a ({residual:.3e})")
        k = self.dim
        self.structure_constants = coords.reshape(k, k, k)
        c = self.structure_constants
        # ⟨∇_{e_i} e_j, e_k⟩ = (c_ij^k - c_jk^i + c_ki^j) / 2
        self.connection = 0.5 * (c - np.einsum("jki->ijk", c) + np.einsum("kij->ijk", c))
        self.mean_curvature = np.einsum("kkj->j", self.connection)
        self._curvature = None
        logger.debug("Geometry of %s: frame dimension %d, n_scale %s", group.name, k, n_scale)

    @property
    def dim(self) -> int:
        return self.frame.shape[0]

    def to_frame(self, vectors) -> np.ndarray:
        """Frame coordinates of algebra-coordinate vectors lying in n ⊕ a."""
        G = self.group.g.gram
        return (np.asarray(vectors) @ G @ self.frame.T) * self._lengths ** 2

    def covariant(self, X, Y) -> np.ndarray:
        """∇_X Y for left-invariant X, Y given in frame coordinates."""
        return np.einsum("i,j,ijk->k", X, Y, self.connection)

    def bracket(self, X, Y) -> np.ndarray:
        return np.einsum("i,j,ijk->k", X, Y, self.structure_constants)

    def residuals(self) -> Dict[str, float]:
        G = self.connection
        c = self.structure_constants
        return {
            "metric_compatibility": float(np.abs(G + np.transpose(G, (0, 2, 1))).max()),
            "torsion": float(np.abs(G - np.transpose(G, (1, 0, 2)) - c).max()),
        }

    # -- curvature ---------------------------------------------------------
    @property
    def curvature(self) -> np.ndarray:
        """R[i, j, k, l] = ⟨R(e_i, e_j) e_k, e_l⟩."""
        if self._curvature is None:
            L = np.transpose(self.connection, (0, 2, 1))   # L[i][k, j] = Γ_ij^k
            c = self.structure_constants
            op = (np.einsum("ilm,jmk->ijlk", L, L) - np.einsum("jlm,imk->ijlk", L, L)
                  - np.einsum("ijm,mlk->ijlk", c, L))
            self._curvature = np.transpose(op, (0, 1, 3, 2))
        return self._curvature

    def __repr__(self):
        return f"LeftInvariantGeometry({self.group.name!r}, dim={self.dim}, n_scale={self.n_scale})"


def build_geometry(group: SolvableGroup, n_scale: float = 1.0) -> LeftInvariantGeometry:
    return LeftInvariantGeometry(group, n_scale=n_scale)


def sectional_curvature(geometry: LeftInvariantGeometry, X, Y) -> float:
    """K(X, Y) for frame-coordinate vectors spanning a plane."""
    X = np.asarray(X, dtype=float)
    Y = np.asarray(Y, dtype=float)
    area = (X @ X) * (Y @ Y) - (X @ Y) ** 2
    if area <= config.IDENTITY_TOL * (X @ X) * (Y @ Y):
        raise DegeneratePlane("X and Y do not span a plane")
    return float(np.einsum("ijkl,i,j,k,l->", geometry.curvature, X, Y, Y, X) / area)


def curvature_symmetries(geometry: LeftInvariantGeometry) -> Dict[str, float]:
    R = geometry.curvature
    return {
        "antisymmetry": float(np.abs(R + np.transpose(R, (1, 0, 2, 3))).max()),
        "metric": float(np.abs(R + np.transpose(R, (0, 1, 3, 2))).max()),
        "pair_symmetry": float(np.abs(R - np.transpose(R, (2, 3, 0, 1))).max()),
        "bianchi": float(np.abs(R + np.einsum("jkil->ijkl", R) + np.einsum("kijl->ijkl", R)).max()),
    }


def sample_curvatures(geometry: LeftInvariantGeometry, count: int = config.CURVATURE_SAMPLES,
                      seed: int = config.DEFAULT_SEED) -> np.ndarray:
    """Sectional curvatures of every frame plane and of ``count`` random planes."""
    k = geometry.dim
    eye = np.eye(k)
    values = [sectional_curvature(geometry, eye[i], eye[j]) for i in range(k) for j in range(i + 1, k)]
    rng = np.random.default_rng(seed)
    for _ in range(count):
        X, Y = rng.standard_normal(k), rng.standard_normal(k)
        try:
            values.append(sectional_curvature(geometry, X, Y))
        except DegeneratePlane:
            continue
    return np.array(values)


# -- Tension field of the projection -------------------------------------------

@dataclass
class TensionFieldReport:
    """Tension of π in the target frame together with the trace bookkeeping.

    ``per_direction_traces[k]`` is trace_{ker π}(ad X_k) for target frame
    vector X_k, ``minimality[k]`` the same trace computed as Σ⟨∇_v v, X_k⟩ over
    an orthonormal basis of ker π, and ``expected`` the value predicted by
    the root data.
    """
    tau: np.ndarray
    per_direction_traces: np.ndarray
    minimality: np.ndarray
    expected: np.ndarray
    nilpotent: np.ndarray
    kernel_dimension: int
    residuals: Dict[str, float] = field(default_factory=dict)

    @property
    def max_trace(self) -> float:
        return float(np.abs(self.per_direction_traces).max()) if self.per_direction_traces.size else 0.0

    def passed(self, tol: float = config.IDENTITY_TOL) -> bool:
        return self.max_trace < tol and float(np.abs(self.tau).max()) < tol


def tension_field(pi: SubmersionProjection, source: LeftInvariantGeometry,
                  target: LeftInvariantGeometry, system: RestrictedRootSystem,
                  rankone: RankOneData) -> TensionFieldReport:
    """τ_π from the connections of both groups, and trace_{ker π}(ad X) per target direction."""
    kernel = orthonormalize(source.to_frame(pi.kernel_basis), np.eye(source.dim))
    horizontal = source.to_frame(target.frame)

    ad = np.einsum("ti,ijk->tkj", horizontal, source.structure_constants)
    traces = np.einsum("vj,tkj,vk->t", kernel, ad, kernel) if kernel.shape[0] else np.zeros(target.dim)
    minimality = (np.einsum("vi,vj,ijk,tk->t", kernel, kernel, source.connection, horizontal)
                  if kernel.shape[0] else np.zeros(target.dim))

    images = target.to_frame(pi.apply(source.frame))
    along_target = np.einsum("si,sj,ijk->k", images, images, target.connection)
    mean = pi.apply(source.mean_curvature @ source.frame)
    tau = along_target - target.to_frame(mean)

    nilpotent = np.arange(target.dim) < target.group.n_dim
    drift = sum(system.multiplicities[r.index] * system.inner(r, rankone.beta)
                for r in system.sigma_beta(rankone.beta))
    expected = np.where(nilpotent, 0.0, drift / np.sqrt(rankone.norm2))
    residuals = {
        "tau_vs_traces": float(np.abs(tau + traces).max()),
        "minimality_vs_traces": float(np.abs(minimality - traces).max()),
        "expected_vs_traces": float(np.abs(expected - traces).max()),
    }
    return TensionFieldReport(tau=tau, per_direction_traces=traces, minimality=minimality,
                              expected=expected, nilpotent=nilpotent,
                              kernel_dimension=kernel.shape[0], residuals=residuals)


def fiber_second_fundamental(geometry: LeftInvariantGeometry, X, rankone: RankOneData) -> float:
    """⟨∇_X X, H_β⟩ for X given in algebra coordinates."""
    x = geometry.to_frame(X)
    h = geometry.to_frame(rankone.H_beta)
    return float(geometry.covariant(x, x) @ h)


# -- Laplace-Beltrami operator -------------------------------------------------

def _evaluate(f: Callable, p: GroupPoint):
    try:
        value = f(p)
    except (ArithmeticError, ValueError) as exc:
        raise EvaluationFailure(f"function failed at {p}: {exc}") from exc
    if not np.all(np.isfinite(value)):
        raise EvaluationFailure(f"function is not finite at {p}")
    return value


def _along(geometry: LeftInvariantGeometry, f: Callable, p: GroupPoint, k: int):
    group = geometry.group
    x, h = geometry.frame_X[k], geometry.frame_H[k]

    def curve(t):
        return _evaluate(f, group.multiply(p, GroupPoint(t * x, t * h)))
    return curve


def _check_step(h: float) -> None:
    if h < config.MIN_STEP:
        raise StepTooSmall(f"step {h:g} is below {config.MIN_STEP:g}")


def _first(curve, h):
    def central(s):
        return (curve(s) - curve(-s)) / (2 * s)
    return (4 * central(h / 2) - central(h)) / 3


def _second(curve, h, center):
    def central(s):
        return (curve(s) - 2 * center + curve(-s)) / (s * s)
    return (4 * central(h / 2) - central(h)) / 3


def frame_derivatives(geometry: LeftInvariantGeometry, f: Callable, p: GroupPoint,
                      h: float = config.DEFAULT_STEP) -> np.ndarray:
    """(e_k f)(p) for every frame vector."""
    _check_step(h)
    return np.array([_first(_along(geometry, f, p, k), h) for k in range(geometry.dim)])


def laplacian(geometry: LeftInvariantGeometry, f: Callable, p: GroupPoint,
              h: float = config.DEFAULT_STEP):
    """Δf(p) = Σ_k e_k(e_k f)(p) - ((∇_{e_k} e_k) f)(p), Richardson-extrapolated."""
    _check_step(h)
    center = _evaluate(f, p)
    total = 0.0
    for k in range(geometry.dim):
        total = total + _second(_along(geometry, f, p, k), h, center)
    for j, weight in enumerate(geometry.mean_curvature):
        if abs(weight) > config.CLOSURE_TOL:
            total = total - weight * _first(_along(geometry, f, p, j), h)
    return total


def iterated_laplacian(geometry: LeftInvariantGeometry, f: Callable, p: GroupPoint, power: int,
                       h: float = config.DEFAULT_STEP):
    """Δ^power f(p) for power ≤ 2; the nested case uses steps 10h (inner) and 50h (outer)."""
    if power == 0:
        return _evaluate(f, p)
    if power == 1:
        return laplacian(geometry, f, p, h)
    if power == 2:
        inner_step = h * config.NESTED_INNER_FACTOR

        def inner(q):
            return laplacian(geometry, f, q, inner_step)
        return laplacian(geometry, inner, p, h * config.NESTED_OUTER_FACTOR)
    raise OrderOutOfRange(f"numerical Laplacian powers stop at 2, got {power}")


# -- A-radial functions ----------------------------------------------------------

def exact_number(x: float, max_denominator: int = 10 ** 6):
    """sympy Rational close to ``x`` when one exists, else a Float."""
    fraction = Fraction(x).limit_denominator(max_denominator)
    if abs(float(fraction) - x) <= config.IDENTITY_TOL * max(1.0, abs(x)):
        return sympy.Rational(fraction.numerator, fraction.denominator)
    return sympy.Float(x)


@dataclass(frozen=True)
class RadialOperator:
    """Δ on A-radial functions F = u(t), t = β(log_A a): u ↦ norm2·u'' - drift·u'."""
    norm2: sympy.Expr
    drift: sympy.Expr

    def apply(self, u: sympy.Expr) -> sympy.Expr:
        return sympy.expand(self.norm2 * sympy.diff(u, T, 2) - self.drift * sympy.diff(u, T))

    def power(self, u: sympy.Expr, k: int) -> sympy.Expr:
        for _ in range(k):
            u = self.apply(u)
        return u

    def value(self, u: sympy.Expr, t: float, k: int = 1) -> complex:
        return complex(self.power(u, k).subs(T, t).evalf())


def radial_operator(system: RestrictedRootSystem, rankone: RankOneData,
                    target: bool = False) -> RadialOperator:
    """Radial part of Δ on NA, or on N^βA^β when ``target`` is set."""
    norm2 = exact_number(rankone.norm2)
    if target:
        drift = (rankone.m_beta + 2 * rankone.m_2beta) * norm2
    else:
        drift = exact_number(sum(system.multiplicities[r.index] * system.inner(r, rankone.beta)
                                 for r in system.positive_roots()))
    return RadialOperator(norm2=norm2, drift=drift)


def radial_laplacian(system: RestrictedRootSystem, rankone: RankOneData, u: sympy.Expr, t: float,
                     target: bool = False) -> complex:
    return radial_operator(system, rankone, target).value(u, t)


def radial_function(rankone: RankOneData, u: sympy.Expr, target: bool = False) -> Callable:
    """The function p ↦ u(β(log_A p)) on NA (or on N^βA^β)."""
    numeric = sympy.lambdify(T, u, "numpy")
    as_complex = u.has(sympy.I)

    def F(p: GroupPoint):
        value = numeric(beta_coordinate(rankone, p, target))
        return complex(value) if as_complex else float(value)
    return F
