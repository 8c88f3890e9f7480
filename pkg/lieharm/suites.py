"""Verification suites and the runner that strings them together.

A suite is driven like a scene: the runner calls ``on_enter``, collects the
checks from ``run`` and calls ``on_exit``. Expensive objects (realization,
root system, projections, geometries, sample points) live on the shared
VerificationContext and are built once per algebra.
"""
from __future__ import annotations

import logging
from functools import cached_property
from typing import Dict, List, Optional, Tuple

import numpy as np
import sympy

from . import config
from .algebra_core import adjointness_residuals, cartan_decompose, form_definiteness
from .catalog import AlgebraSpec, realize
from .errors import InvalidParams
from .geometry import (T, build_geometry, curvature_symmetries, fiber_second_fundamental,
                       laplacian, radial_function, radial_laplacian, sample_curvatures,
                       tension_field)
from .morphisms import (build_phi, check_compositions, check_eigenfunction_pullback,
                        check_harmonic_morphism, check_intertwining, check_power_commutation,
                        check_r_harmonic_pullback, exact_power_commutation, separation,
                        target_function)
from .rankone import (beta_coordinate, build_projection, build_rank_one, project_point,
                      source_group)
from .reports import Check, VerificationReport, flag_check, residual_check
from .roots import build_root_system, check_lemma1, decomposition_residuals
from .solvable import sample_points

logger = logging.getLogger(__name__)

EXACT_TOL = 1e-12
R_HARMONIC_ORDERS = range(1, 7)


class VerificationContext(object):
    """Lazily built objects shared by every suite run on one algebra."""

    def __init__(self, spec: AlgebraSpec, settings: Optional[config.VerifyConfig] = None):
        self.spec = spec
        self.settings = settings or config.VerifyConfig()
        self._rankone: Dict[int, object] = {}
        self._projection: Dict[int, object] = {}
        self._geometry: Dict[Tuple[str, float], object] = {}

    @cached_property
    def g(self):
        return realize(self.spec)

    @cached_property
    def cartan(self):
        return cartan_decompose(self.g, tol=self.settings.identity_tol)

    @cached_property
    def system(self):
        return build_root_system(self.g, self.cartan)

    @cached_property
    def source(self):
        return source_group(self.system)

    def rankone(self, position: int):
        if position not in self._rankone:
            self._rankone[position] = build_rank_one(self.system, self.system.simple(position))
        return self._rankone[position]

    def projection(self, position: int):
        if position not in self._projection:
            self._projection[position] = build_projection(self.system, self.rankone(position))
        return self._projection[position]

    def geometry(self, position: Optional[int] = None, n_scale: float = 1.0):
        """Source geometry when ``position`` is None, else the target of that simple root."""
        key = ("source" if position is None else f"target{position}", n_scale)
        if key not in self._geometry:
            group = self.source if position is None else self.projection(position).target
            self._geometry[key] = build_geometry(group, n_scale=n_scale)
        return self._geometry[key]

    def points(self, count: Optional[int] = None):
        count = self.settings.samples if count is None else count
        return sample_points(self.source, count, seed=self.settings.seed)

    def positions(self) -> List[int]:
        rank = self.system.rank
        if self.settings.betas is None:
            return list(range(rank))
        for position in self.settings.betas:
            if not 0 <= position < rank:
                raise InvalidParams(f"{self.spec.id} has simple roots 0..{rank - 1}, got {position}")
        return list(self.settings.betas)


class Suite(object):
    name = ""

    def __init__(self, context: VerificationContext, position: int):
        self.context = context
        self.position = position
        self.settings = context.settings

    def on_enter(self):
        logger.info("Running %s checks on %s, simple root %d", self.name, self.context.spec.id,
                    self.position)

    def run(self) -> List[Check]:
        return []

    def on_exit(self):
        pass


def _residual_checks(prefix: str, residuals: Dict[str, float], tol: float) -> List[Check]:
    return [residual_check(f"{prefix}_{key}", value, tol) for key, value in residuals.items()]


class StructureSuite(Suite):
    name = "structure"

    def run(self):
        ctx, tol = self.context, self.settings.identity_tol
        g, cartan, system = ctx.g, ctx.cartan, ctx.system
        checks = [residual_check("jacobi", g.jacobi_residual(), tol)]
        checks += _residual_checks("theta", g.theta_residuals(), tol)
        checks += _residual_checks("form", g.form_residuals(), tol)
        checks += _residual_checks("cartan", cartan.residuals, tol)
        checks += _residual_checks("adjoint", adjointness_residuals(g, cartan), tol)
        signs = form_definiteness(g, cartan)
        checks.append(flag_check("form_signs", signs["k_max"] < 0 < signs["p_min"] and signs["gram_min"] > 0,
                                 **signs))
        a = system.a
        checks.append(residual_check("a_abelian", a.residuals["abelian"], tol))
        checks.append(residual_check("a_maximal", a.residuals["centralizer_excess"], 0.5))
        checks += _residual_checks("roots", decomposition_residuals(system), tol)
        checks.append(flag_check(
            "root_summary", True, rank=system.rank, dimension=g.dim,
            positive_roots=[r.label() for r in system.positive_roots()],
            multiplicities=[system.multiplicities[r.index] for r in system.positive_roots()],
            split=system.is_split(),
        ))
        return checks


class Lemma1Suite(Suite):
    name = "lemma1"

    def run(self):
        system = self.context.system
        beta = system.simple(self.position)
        report = check_lemma1(system, beta)
        tol = self.settings.identity_tol
        details = {"m_beta": report.m_beta, "m_2beta": report.m_2beta,
                   "sigma_beta": list(report.sigma_beta)}
        return [
            residual_check("lemma1_ideal", report.ideal_residual, tol),
            residual_check("lemma1_weighted_sum", abs(report.weighted_sum), tol, **details),
            residual_check("lemma1_reflection_fixed_sum", report.sum_vector_residual, tol),
            flag_check("lemma1_reflection_permutes", report.permutation_ok),
            flag_check("lemma1_multiplicity_parity", report.araki_ok, **details),
            flag_check("lemma1_positive_off_beta", report.key_observation_ok),
        ]


class SubmersionSuite(Suite):
    name = "submersion"

    def run(self):
        ctx, tol, pos = self.context, self.settings.identity_tol, self.position
        system, rankone, pi = ctx.system, ctx.rankone(pos), ctx.projection(pos)
        source, target = ctx.geometry(), ctx.geometry(pos)

        checks = _residual_checks("rankone", rankone.residuals, tol)
        checks.append(flag_check("rankone_dimension", rankone.dims[2] == 1 + rankone.m_beta + rankone.m_2beta,
                                 dims=list(rankone.dims), type=rankone.describe()))
        gram = {k: v for k, v in pi.residuals.items() if k in ("isometry", "retraction", "self_adjoint")}
        checks += _residual_checks("projection", {k: v for k, v in pi.residuals.items() if k not in gram}, tol)
        checks += _residual_checks("submersion_gram", gram, EXACT_TOL)
        checks += _residual_checks("geometry_source", source.residuals(), tol)
        checks += _residual_checks("geometry_target", target.residuals(), tol)

        tension = tension_field(pi, source, target, system, rankone)
        checks.append(residual_check("tension_per_direction_traces", tension.max_trace, tol,
                                     traces=tension.per_direction_traces,
                                     kernel_dimension=tension.kernel_dimension))
        checks.append(residual_check("tension_field", float(np.abs(tension.tau).max()), tol, tau=tension.tau))
        checks.append(residual_check("tension_minimality", float(np.abs(tension.minimality).max()), tol))
        checks += _residual_checks("tension", tension.residuals, tol)
        checks += self._fibres(source, system, rankone, tol)
        checks += self._curvature(source, pos, rankone)
        return checks

    def _fibres(self, source, system, rankone, tol):
        worst, values = 0.0, {}
        for root in system.sigma_beta(rankone.beta):
            X = system.root_spaces[root.index][0]
            value = fiber_second_fundamental(source, X, rankone)
            expected = system.inner(root, rankone.beta) * system.g.inner(X, X)
            worst = max(worst, abs(value - expected))
            values[root.label()] = value
        checks = [residual_check("fiber_second_fundamental", worst, tol, values=values)]
        if system.rank >= 2:
            largest = max((abs(v) for v in values.values()), default=0.0)
            checks.append(flag_check("fibres_not_totally_geodesic", largest > tol, largest=largest))
        return checks

    def _curvature(self, source, pos, rankone):
        ctx = self.context
        checks = []
        for label, geometry in (("source", source), ("target", ctx.geometry(pos))):
            checks += _residual_checks(f"curvature_{label}", curvature_symmetries(geometry),
                                       self.settings.identity_tol)
        values = sample_curvatures(ctx.geometry(pos, n_scale=0.5), seed=self.settings.seed)
        norm2 = rankone.norm2
        if rankone.m_2beta == 0:
            residual = float(np.abs(values + norm2).max())
            checks.append(residual_check("curvature_constant", residual, config.CURVATURE_TOL,
                                         expected=-norm2, samples=len(values)))
        else:
            low, high = -4 * norm2, -norm2
            outside = float(max(low - values.min(), values.max() - high, 0.0))
            checks.append(residual_check("curvature_band", outside, config.CURVATURE_TOL,
                                         band=[low, high], observed=[values.min(), values.max()]))
            slack = abs(values.min() - low) / abs(low)
            checks.append(residual_check("curvature_minimum_attained", slack, config.CURVATURE_MIN_SLACK))
        return checks


class MorphismSuite(Suite):
    name = "morphism"

    def run(self):
        ctx, pos, h, tol = self.context, self.position, self.settings.step, self.settings.tol
        system, rankone, pi = ctx.system, ctx.rankone(pos), ctx.projection(pos)
        source, target = ctx.geometry(), ctx.geometry(pos)
        points = ctx.points()

        phi = build_phi(system, rankone, pi)
        report = check_harmonic_morphism(phi, source, points, h, tol)
        details = {"variant": phi.variant, "points": report.points}
        checks = [
            residual_check("phi_normalization", phi.normalization_residual, EXACT_TOL, variant=phi.variant),
            residual_check("phi_laplacian", report.laplacian_residual, tol, **details),
            residual_check("phi_conformality", report.conformality_residual, tol, **details),
        ]
        expected = 1j if phi.variant == "mult_one" else 0j
        checks.append(residual_check("phi_identity", abs(phi(ctx.source.identity()) - expected), EXACT_TOL))
        for name, composed in check_compositions(phi, source, points, h).items():
            checks.append(residual_check(f"compose_{name}", max(composed.laplacian_residual,
                                                              composed.conformality_residual),
                                         composed.tol))
        spread = separation(phi, points)
        checks.append(flag_check("phi_nonconstant", spread > 0.1, separation=spread))

        few = ctx.points(self.settings.intertwining_samples)
        for name in ("linear", "t2", "exp_half"):
            f = target_function(system, rankone, name)
            residual = check_intertwining(pi, source, target, f, few, h)
            checks.append(residual_check(f"intertwining_{name}", residual, tol, points=len(few)))
        checks.append(self._radial_oracle(system, rankone, pi, target, few, h, tol))
        return checks

    @staticmethod
    def _radial_oracle(system, rankone, pi, target, points, h, tol):
        u = sympy.exp(T / 2)
        f = radial_function(rankone, u, target=True)
        worst = 0.0
        for p in points:
            q = project_point(pi, p)
            t = beta_coordinate(rankone, q, target=True)
            worst = max(worst, abs(laplacian(target, f, q, h) - radial_laplacian(system, rankone, u, t, True)))
        return residual_check("radial_oracle_exp_half", worst, tol)


class FunctionsSuite(Suite):
    name = "functions"

    def run(self):
        ctx, pos, h, tol = self.context, self.position, self.settings.step, self.settings.tol
        system, rankone, pi = ctx.system, ctx.rankone(pos), ctx.projection(pos)
        source, target = ctx.geometry(), ctx.geometry(pos)
        points = ctx.points()
        few = ctx.points(self.settings.nested_samples)
        checks = []

        harmonic_s = rankone.m_beta + 2 * rankone.m_2beta
        if rankone.m_2beta in (0, 1, 3):
            for s in (harmonic_s, 0.5):
                eigen = check_eigenfunction_pullback(system, rankone, pi, source, s, points, h, tol)
                label = f"s={s:g}"
                details = {"eigenvalue": eigen.eigenvalue, "square_eigenvalue": eigen.square_eigenvalue}
                checks.append(residual_check(f"eigen_{label}", eigen.eigen_residual, tol, **details))
                checks.append(residual_check(f"eigen_square_{label}", eigen.square_residual, tol, **details))
                drift = abs(eigen.source_eigenvalue - eigen.eigenvalue) / max(1.0, abs(eigen.eigenvalue))
                checks.append(residual_check(f"eigenvalue_preserved_{label}", drift, tol,
                                             source_eigenvalue=eigen.source_eigenvalue))
        else:
            checks.append(flag_check("eigen_skipped", True, m_2beta=rankone.m_2beta))

        for r in R_HARMONIC_ORDERS:
            numeric = r <= 2
            report = check_r_harmonic_pullback(system, rankone, r, pi, source, few if numeric else None, h)
            checks.append(flag_check(f"r_harmonic_exact_r={r}", report.exact_zero and report.exact_nonzero,
                                     witness=report.witness, substituted=report.substituted,
                                     powers=report.powers))
            if numeric:
                worst = max(report.numeric_residuals.values(), default=0.0)
                checks.append(residual_check(f"r_harmonic_numeric_r={r}", worst, config.POWER_TOL,
                                             powers=report.numeric_residuals))

        witnesses = [T, T ** 2, T ** 3, sympy.exp(harmonic_s * T)]
        checks.append(flag_check("power_commutation_exact",
                                 exact_power_commutation(system, rankone, witnesses)))
        numeric = check_power_commutation(pi, source, target, target_function(system, rankone, "t2"), few, (1, 2), h)
        for k, residual in numeric.items():
            checks.append(residual_check(f"power_commutation_k={k}", residual, config.POWER_TOL))
        return checks


SUITE_CLASSES = {cls.name: cls for cls in (StructureSuite, Lemma1Suite, SubmersionSuite,
                                           MorphismSuite, FunctionsSuite)}


def run_verification(spec: AlgebraSpec, settings: Optional[config.VerifyConfig] = None,
                     context: Optional[VerificationContext] = None) -> List[VerificationReport]:
    """One report per requested simple root, each holding the selected suites in order."""
    context = context or VerificationContext(spec, settings)
    settings = context.settings
    unknown = [name for name in settings.checks if name not in SUITE_CLASSES]
    if unknown:
        raise InvalidParams(f"unknown check suite(s): {', '.join(unknown)}")

    reports = []
    for position in context.positions():
        report = VerificationReport(spec.id, position, settings.seed)
        for name in config.SUITES:
            if name not in settings.checks:
                continue
            suite = SUITE_CLASSES[name](context, position)
            suite.on_enter()
            report.extend(suite.run())
            suite.on_exit()
        report.finish()
        logger.info("%s simple root %d: %d checks, %d failed", spec.id, position,
                    len(report.sections), len(report.failures))
        reports.append(report)
    return reports
