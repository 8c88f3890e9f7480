"""Complex harmonic morphisms on NA and the pullback checks built on them."""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional, Sequence

import numpy as np
import sympy

from . import config
from .errors import (DegenerateS, InvalidParams, MultiplicityMismatch, NoIsotropicVector,
                     OrderOutOfRange)
from .geometry import (T, LeftInvariantGeometry, frame_derivatives,
                       iterated_laplacian, laplacian, radial_function,
                       radial_operator)
from .rankone import (RankOneData, SubmersionProjection, beta_coordinate,
                      project_point)
from .roots import RestrictedRootSystem
from .solvable import GroupPoint

logger = logging.getLogger(__name__)

VARIANTS = ("mult_one", "isotropic")


@dataclass(frozen=True, eq=False)
class HarmonicMorphismPhi:
    """φ(na) = ⟨X, log_N n⟩ + i e^{β(log_A a)} (mult_one) or ⟨X, log_N n⟩ (isotropic).

    ``x_target`` holds the complex coordinates of X in the target n-basis;
    the pairing is complex-bilinear.
    """
    variant: str
    x_target: np.ndarray
    rankone: RankOneData
    projection: SubmersionProjection
    normalization_residual: float

    @property
    def X_vec(self) -> np.ndarray:
        """X in algebra coordinates (complex)."""
        return self.x_target @ self.projection.target.n_basis

    def on_target(self, q: GroupPoint) -> complex:
        value = complex(self.x_target @ q.X)
        if self.variant == "mult_one":
            value += 1j * np.exp(beta_coordinate(self.rankone, q, target=True))
        return value

    def __call__(self, p: GroupPoint) -> complex:
        return self.on_target(project_point(self.projection, p))


def build_phi(system: RestrictedRootSystem, rankone: RankOneData, projection: SubmersionProjection,
              variant: Optional[str] = None) -> HarmonicMorphismPhi:
    m_beta = rankone.m_beta
    if variant is None:
        variant = "mult_one" if m_beta == 1 else "isotropic"
    if variant not in VARIANTS:
        raise MultiplicityMismatch(f"unknown variant {variant!r}")
    if variant == "mult_one" and m_beta != 1:
        raise MultiplicityMismatch(f"mult_one needs m_beta = 1, got {m_beta}")
    if variant == "isotropic" and m_beta < 2:
        raise NoIsotropicVector(f"isotropic vectors in g_beta need m_beta >= 2, got {m_beta}")

    x = np.zeros(projection.target.n_dim, dtype=complex)
    if variant == "mult_one":
        x[0] = np.sqrt(rankone.norm2)
        residual = abs(float(np.real(x @ x)) - rankone.norm2)
    else:
        # rows 0 and 1 of the target n-basis are orthonormal vectors of g_β
        x[0], x[1] = 1 / np.sqrt(2), 1j / np.sqrt(2)
        residual = abs(complex(x @ x))
    phi = HarmonicMorphismPhi(variant, x, rankone, projection, float(residual))
    logger.info("Built %s harmonic morphism for simple root %d of %s", variant,
                rankone.position, system.g.name)
    return phi


@dataclass(frozen=True, eq=False)
class PullbackFunction:
    """base ∘ π, with the eigenvalue of the base when known."""
    base: Callable
    projection: SubmersionProjection
    name: str = ""
    eigenvalue: Optional[complex] = None

    def __call__(self, p: GroupPoint):
        return self.base(project_point(self.projection, p))


# -- Harmonic morphism checks ----------------------------------------------------

@dataclass
class MorphismReport:
    laplacian_residual: float
    conformality_residual: float
    points: int
    tol: float

    @property
    def passed(self) -> bool:
        return self.laplacian_residual < self.tol and self.conformality_residual < self.tol


def check_harmonic_morphism(phi: Callable, geometry: LeftInvariantGeometry, points: Sequence[GroupPoint],
                            h: float = config.DEFAULT_STEP, tol: float = config.MORPHISM_TOL) -> MorphismReport:
    """max |Δφ| and max |Σ_k (e_k φ)²| over the sample points."""
    lap, conf = 0.0, 0.0
    for p in points:
        lap = max(lap, abs(laplacian(geometry, phi, p, h)))
        grad = frame_derivatives(geometry, phi, p, h)
        conf = max(conf, abs(np.sum(grad * grad)))
    return MorphismReport(float(lap), float(conf), len(points), tol)


def check_compositions(phi: HarmonicMorphismPhi, geometry: LeftInvariantGeometry,
                       points: Sequence[GroupPoint], h: float = config.DEFAULT_STEP,
                       tol: float = config.POWER_TOL) -> Dict[str, MorphismReport]:
    """φ composed with the holomorphic maps z² and e^{iz}."""
    compositions = {
        "square": lambda p: phi(p) ** 2,
        "exp_i": lambda p: np.exp(1j * phi(p)),
    }
    return {name: check_harmonic_morphism(f, geometry, points, h, tol) for name, f in compositions.items()}


def separation(phi: Callable, points: Sequence[GroupPoint]) -> float:
    """Largest |φ(p) - φ(p_0)| over the sample."""
    if not points:
        return 0.0
    first = phi(points[0])
    return float(max(abs(phi(p) - first) for p in points))


# -- Intertwining ----------------------------------------------------------------

def check_intertwining(pi: SubmersionProjection, source: LeftInvariantGeometry,
                       target: LeftInvariantGeometry, f: Callable, points: Sequence[GroupPoint],
                       h: float = config.DEFAULT_STEP) -> float:
    """max |Δ^M(f∘π)(p) - (Δ^B f)(π(p))|."""
    pulled = PullbackFunction(f, pi)
    worst = 0.0
    for p in points:
        lhs = laplacian(source, pulled, p, h)
        rhs = laplacian(target, f, project_point(pi, p), h)
        worst = max(worst, abs(lhs - rhs))
    return float(worst)


def check_power_commutation(pi: SubmersionProjection, source: LeftInvariantGeometry,
                            target: LeftInvariantGeometry, f: Callable, points: Sequence[GroupPoint],
                            powers: Sequence[int] = (1, 2), h: float = config.DEFAULT_STEP) -> Dict[int, float]:
    """max |Δ^k(f∘π) - (Δ^k f)∘π| per power k, relative to max(1, |(Δ^k f)∘π|)."""
    pulled = PullbackFunction(f, pi)
    out = {}
    for k in powers:
        worst = 0.0
        for p in points:
            lhs = iterated_laplacian(source, pulled, p, k, h)
            rhs = iterated_laplacian(target, f, project_point(pi, p), k, h)
            worst = max(worst, abs(lhs - rhs) / max(1.0, abs(rhs)))
        out[k] = float(worst)
    return out


def exact_power_commutation(system: RestrictedRootSystem, rankone: RankOneData,
                            witnesses: Sequence[sympy.Expr], max_power: int = 6) -> bool:
    """The radial operators of NA and N^βA^β agree on every witness and power."""
    src = radial_operator(system, rankone)
    tgt = radial_operator(system, rankone, target=True)
    return all(sympy.simplify(src.power(u, k) - tgt.power(u, k)) == 0
               for u in witnesses for k in range(1, max_power + 1))


# -- Eigenfunctions ----------------------------------------------------------------

@dataclass
class EigenReport:
    s: float
    eigenvalue: float
    square_eigenvalue: float
    eigen_residual: float
    square_residual: float
    source_eigenvalue: float
    points: int
    tol: float

    @property
    def passed(self) -> bool:
        return self.eigen_residual < self.tol and self.square_residual < self.tol


def eigenvalues(rankone: RankOneData, s: float):
    """λ and μ for f_s = e^{s t} and f_s² on N^βA^β."""
    c = rankone.m_beta + 2 * rankone.m_2beta
    lam = rankone.norm2 * (s * s - c * s)
    mu = rankone.norm2 * (4 * s * s - 2 * c * s)
    return lam, mu


def check_eigenfunction_pullback(system: RestrictedRootSystem, rankone: RankOneData,
                                 pi: SubmersionProjection, geometry: LeftInvariantGeometry, s: float,
                                 points: Sequence[GroupPoint], h: float = config.DEFAULT_STEP,
                                 tol: float = config.MORPHISM_TOL) -> EigenReport:
    """Δ(f_s∘π) = λ f_s∘π and Δ((f_s∘π)²) = μ (f_s∘π)² at the sample points."""
    if s == 0:
        raise DegenerateS("s = 0 gives a constant function")
    lam, mu = eigenvalues(rankone, s)
    base = radial_function(rankone, sympy.exp(sympy.nsimplify(s) * T), target=True)
    F = PullbackFunction(base, pi, name=f"exp({s:g} t)", eigenvalue=lam)

    def F2(p):
        return F(p) ** 2

    eig, sq, ratios = 0.0, 0.0, []
    for p in points:
        value = F(p)
        lap = laplacian(geometry, F, p, h)
        lap2 = laplacian(geometry, F2, p, h)
        eig = max(eig, abs(lap - lam * value) / max(1.0, abs(value), abs(lam * value)))
        sq = max(sq, abs(lap2 - mu * value ** 2) / max(1.0, value ** 2, abs(mu) * value ** 2))
        ratios.append(lap / value)
    logger.debug("eigen check s=%g: lambda=%g, mu=%g", s, lam, mu)
    return EigenReport(s=float(s), eigenvalue=lam, square_eigenvalue=mu,
                       eigen_residual=float(eig), square_residual=float(sq),
                       source_eigenvalue=float(np.mean(ratios)) if ratios else float("nan"),
                       points=len(points), tol=tol)


# -- r-harmonic functions -------------------------------------------------------------

@dataclass
class RHarmonicReport:
    r: int
    witness: str
    substituted: bool
    powers: List[str]
    exact_zero: bool
    exact_nonzero: bool
    numeric_residuals: Dict[int, float] = field(default_factory=dict)
    tol: float = config.POWER_TOL

    @property
    def passed(self) -> bool:
        return (self.exact_zero and self.exact_nonzero
                and all(v < self.tol for v in self.numeric_residuals.values()))


def r_harmonic_witness(rankone: RankOneData, r: int) -> sympy.Expr:
    """t^{r-1}, or the harmonic e^{(m_β+2m_2β) t} when r = 1."""
    if r < 1:
        raise OrderOutOfRange(f"r must be at least 1, got {r}")
    if r == 1:
        return sympy.exp((rankone.m_beta + 2 * rankone.m_2beta) * T)
    return T ** (r - 1)


def check_r_harmonic_pullback(system: RestrictedRootSystem, rankone: RankOneData, r: int,
                              pi: Optional[SubmersionProjection] = None,
                              geometry: Optional[LeftInvariantGeometry] = None,
                              points: Optional[Sequence[GroupPoint]] = None,
                              h: float = config.DEFAULT_STEP,
                              tol: float = config.POWER_TOL) -> RHarmonicReport:
    """Exact radial certificate of Δ^r u = 0 ≠ Δ^{r-1} u, plus a numerical cross-check."""
    numeric = points is not None
    if numeric and r > 4:
        raise OrderOutOfRange(f"numerical mode supports r <= 4, got {r}")
    u = r_harmonic_witness(rankone, r)
    op = radial_operator(system, rankone, target=True)
    powers = [u]
    for _ in range(r):
        powers.append(op.apply(powers[-1]))
    exact_zero = sympy.simplify(powers[r]) == 0
    exact_nonzero = sympy.simplify(powers[r - 1]) != 0 and (r > 1 or u.has(T))

    residuals = {}
    if numeric:
        base = radial_function(rankone, u, target=True)
        pulled = PullbackFunction(base, pi, name=str(u))
        for k in range(1, min(r, 2) + 1):
            worst = 0.0
            for p in points:
                t = beta_coordinate(rankone, project_point(pi, p), target=True)
                expected = op.value(u, t, k)
                got = iterated_laplacian(geometry, pulled, p, k, h)
                worst = max(worst, abs(got - expected) / max(1.0, abs(expected)))
            residuals[k] = float(worst)
    return RHarmonicReport(r=r, witness=str(u), substituted=(r == 1),
                           powers=[str(p) for p in powers], exact_zero=bool(exact_zero),
                           exact_nonzero=bool(exact_nonzero), numeric_residuals=residuals, tol=tol)


# -- Named pullbacks -------------------------------------------------------------------

PULLBACKS = ("linear", "t", "t2", "exp_half", "eigen")


def target_function(system: RestrictedRootSystem, rankone: RankOneData, name: str) -> Callable:
    """Test functions on N^βA^β by name; all but ``linear`` are A-radial."""
    if name == "linear":
        return lambda q: float(q.X[0]) if q.X.size else float(q.H[0])
    witnesses = {
        "t": T,
        "t2": T ** 2,
        "exp_half": sympy.exp(T / 2),
        "eigen": sympy.exp((rankone.m_beta + 2 * rankone.m_2beta) * T),
    }
    if name not in witnesses:
        raise InvalidParams(f"unknown pullback {name!r}; choose from {', '.join(PULLBACKS)}")
    return radial_function(rankone, witnesses[name], target=True)


def named_pullback(system: RestrictedRootSystem, rankone: RankOneData, pi: SubmersionProjection,
                   name: str) -> PullbackFunction:
    base = target_function(system, rankone, name)
    eigenvalue = eigenvalues(rankone, rankone.m_beta + 2 * rankone.m_2beta)[0] if name == "eigen" else None
    return PullbackFunction(base, pi, name=name, eigenvalue=eigenvalue)
