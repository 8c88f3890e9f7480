"""Command line entry point: ``python -m lieharm {analyze,verify,eval}``."""
from __future__ import annotations

import argparse
import cmath
import json
import logging
import sys
from typing import List, Optional

from . import config
from .catalog import resolve
from .errors import (EvaluationFailure, InputError, InvalidParams, LieHarmError, MalformedPoint,
                     NumericalFailure, StepTooSmall)
from .morphisms import PULLBACKS, build_phi, named_pullback
from .reports import dumps
from .suites import VerificationContext, run_verification

logger = logging.getLogger(__name__)

# --- Exit codes ---
EXIT_OK = 0
EXIT_FAILED_CHECK = 1
EXIT_INPUT = 2
EXIT_NUMERICAL = 3


def _configure_logging(verbosity: int) -> None:
    level = {0: logging.WARNING, 1: logging.INFO}.get(verbosity, logging.DEBUG)
    logging.basicConfig(stream=sys.stderr, level=level,
                        format="%(asctime)s %(levelname)s %(name)s: %(message)s")


def _parse_checks(values: Optional[List[str]]) -> List[str]:
    if not values:
        return list(config.SUITES)
    names = []
    for value in values:
        names += [part.strip() for part in value.split(",") if part.strip()]
    if "all" in names:
        return list(config.SUITES)
    unknown = [n for n in names if n not in config.SUITES]
    if unknown:
        raise InvalidParams(f"unknown check suite(s): {', '.join(unknown)}")
    return names


def format_complex(value: complex) -> str:
    value = complex(value)
    return f"{value.real:.15g}{value.imag:+.15g}i"


# -- analyze ---------------------------------------------------------------------

def analyze(algebra_id: str, catalog_path: Optional[str] = None) -> dict:
    spec = resolve(algebra_id, catalog_path)
    context = VerificationContext(spec)
    g, system = context.g, context.system
    summary = {
        "algebra_id": spec.id,
        "family": spec.family,
        "params": list(spec.params),
        "dimension": g.dim,
        "rank": system.rank,
        "split": system.is_split(),
        "positive_roots": [
            {"coefficients": list(r.coefficients), "multiplicity": system.multiplicities[r.index],
             "norm2": system.inner(r, r)}
            for r in system.positive_roots()
        ],
        "simple_roots": [],
    }
    for position in range(system.rank):
        rankone = context.rankone(position)
        summary["simple_roots"].append({
            "index": position,
            "coefficients": list(rankone.beta.coefficients),
            "norm2": rankone.norm2,
            "H_beta": [float(x) for x in rankone.H_beta],
            "m_beta": rankone.m_beta,
            "m_2beta": rankone.m_2beta,
            "dim_M_beta": rankone.dims[2],
            "hyperbolic_type": rankone.hyperbolic_type,
            "description": rankone.describe(),
            "harmonic_morphism": "mult_one" if rankone.m_beta == 1 else "isotropic",
        })
    return summary


def _render_analysis(summary: dict) -> str:
    lines = [
        f"{summary['algebra_id']} ({summary['family']} {summary['params']}): "
        f"dim {summary['dimension']}, rank {summary['rank']}, "
        f"{'split' if summary['split'] else 'non-split'}",
        f"positive roots ({len(summary['positive_roots'])}):",
    ]
    for root in summary["positive_roots"]:
        lines.append(f"  {tuple(root['coefficients'])}  m={root['multiplicity']}  |a|^2={root['norm2']:.6g}")
    lines.append("simple roots:")
    for beta in summary["simple_roots"]:
        lines.append(f"  [{beta['index']}] m_beta={beta['m_beta']} m_2beta={beta['m_2beta']} "
                     f"dim M_beta={beta['dim_M_beta']}: {beta['description']}; "
                     f"harmonic morphism: {beta['harmonic_morphism']}")
    return "\n".join(lines)


def cmd_analyze(args) -> int:
    summary = analyze(args.algebra, args.catalog)
    if args.json:
        print(json.dumps(summary, sort_keys=True, indent=2))
    else:
        print(_render_analysis(summary))
    return EXIT_OK


# -- verify ------------------------------------------------------------------------

def cmd_verify(args) -> int:
    spec = resolve(args.algebra, args.catalog)
    if args.all_betas:
        betas = None
    elif args.beta is not None:
        betas = [args.beta]
    else:
        betas = [0]
    settings = config.VerifyConfig(
        checks=_parse_checks(args.checks), betas=betas, samples=args.samples,
        step=args.step, tol=args.tol, seed=args.seed,
    )
    if settings.samples < 1:
        raise InvalidParams("--samples must be positive")
    if settings.step < config.MIN_STEP:
        raise StepTooSmall(f"--step {settings.step:g} is below {config.MIN_STEP:g}")
    reports = run_verification(spec, settings)
    text = dumps(reports)
    if args.out:
        try:
            with open(args.out, "w", encoding="utf-8") as handle:
                handle.write(text + "\n")
        except OSError as exc:
            raise InputError(f"cannot write report {args.out}: {exc}") from exc
    if args.json:
        print(text)
    else:
        print("\n\n".join(r.render() for r in reports))
    return EXIT_OK if all(r.passed for r in reports) else EXIT_FAILED_CHECK


# -- eval ----------------------------------------------------------------------------

def cmd_eval(args) -> int:
    spec = resolve(args.algebra, args.catalog)
    context = VerificationContext(spec)
    rank = context.system.rank
    if not 0 <= args.beta < rank:
        raise InvalidParams(f"{spec.id} has simple roots 0..{rank - 1}, got {args.beta}")
    try:
        data = json.loads(args.point)
    except json.JSONDecodeError as exc:
        raise MalformedPoint(f"point is not valid JSON: {exc}") from exc
    point = context.source.point_from_json(data)

    rankone, pi = context.rankone(args.beta), context.projection(args.beta)
    if args.map == "phi":
        f = build_phi(context.system, rankone, pi)
    elif args.map.startswith("pullback:"):
        f = named_pullback(context.system, rankone, pi, args.map.split(":", 1)[1])
    else:
        raise InvalidParams(f"unknown map {args.map!r}; use phi or pullback:<{'|'.join(PULLBACKS)}>")
    try:
        value = complex(f(point))
    except OverflowError as exc:
        raise EvaluationFailure(f"{args.map} overflows at this point") from exc
    if not cmath.isfinite(value):
        raise EvaluationFailure(f"{args.map} is not finite at this point")
    print(format_complex(value))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="lieharm",
                                     description="Harmonic submersions and harmonic morphisms on "
                                                 "Riemannian symmetric spaces of noncompact type.")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("algebra", help="catalog id, e.g. sl3 or g2split")
    common.add_argument("--catalog", default=None, help=f"catalog JSON file (default ${config.CATALOG_ENV_VAR})")
    common.add_argument("-v", "--verbose", action="count", default=0, help="-v for info, -vv for debug")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", parents=[common], help="roots, multiplicities and rank-one data")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("verify", parents=[common], help="run verification suites")
    group = p.add_mutually_exclusive_group()
    group.add_argument("--beta", type=int, default=None, help="simple root index (default 0)")
    group.add_argument("--all-betas", action="store_true")
    p.add_argument("--checks", action="append", default=None,
                   help=f"all or a comma list of {', '.join(config.SUITES)}")
    p.add_argument("--samples", type=int, default=config.DEFAULT_SAMPLES)
    p.add_argument("--step", type=float, default=config.DEFAULT_STEP)
    p.add_argument("--tol", type=float, default=config.MORPHISM_TOL)
    p.add_argument("--seed", type=int, default=config.DEFAULT_SEED)
    p.add_argument("--json", action="store_true")
    p.add_argument("--out", default=None, help="also write the JSON report here")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("eval", parents=[common], help="evaluate phi or a pullback at a point of NA")
    p.add_argument("point", help='JSON object {"X": [...], "H": [...]}')
    p.add_argument("--beta", type=int, default=0)
    p.add_argument("--map", default="phi", help="phi or pullback:<name>")
    p.set_defaults(func=cmd_eval)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    _configure_logging(args.verbose)
    try:
        return args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except NumericalFailure as exc:
        logger.debug("numerical failure", exc_info=True)
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except LieHarmError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
