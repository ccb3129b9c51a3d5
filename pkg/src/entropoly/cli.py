"""Command-line front end.

Subcommands: ``solve``, ``estimate``, ``exact``, ``mc``, ``fourier`` and
``gen``.  Problem files follow the JSON schema of :mod:`entropoly.model`;
``-`` reads standard input so ``gen ... | entropoly estimate -`` works.
Reports go to standard output (a single JSON object with ``--json``),
diagnostics to standard error.  Exit codes: 1 for validation errors, 2
for solver failures, 3 for oracle guards.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from typing import Optional

from .errors import (
    DimensionMismatch,
    DimensionTooLarge,
    DomainViolation,
    DualDomainViolation,
    DualUnbounded,
    InvalidProblemFile,
    MarginMismatch,
    NotConverged,
    NotInInterior,
    NotPositiveDefinite,
    NotSymmetric,
    QuasiPolynomial,
    RankDeficient,
    StateSpaceTooLarge,
    UnsupportedMatrix,
)
from .estimators import condition_report, gaussian_count, gaussian_volume, monte_carlo_count
from .generators import builtin_yfamily, gen_multiway, gen_transport
from .model import DomainKind, PolytopeSpec, load_problem, problem_to_dict
from .oracles import char_integral_count, exact_count, exact_volume_ehrhart
from .solver import EntropyModel, model_for_domain, solve_max_entropy

_VALIDATION_ERRORS = (InvalidProblemFile, DimensionMismatch, MarginMismatch,
                      DomainViolation, DualDomainViolation, RankDeficient,
                      NotSymmetric, NotPositiveDefinite)
_SOLVER_ERRORS = (NotConverged, DualUnbounded)
_GUARD_ERRORS = (StateSpaceTooLarge, UnsupportedMatrix, QuasiPolynomial,
                 NotInInterior, DimensionTooLarge)

_LN10 = math.log(10.0)


def sci_string(log_value: float, digits: int = 6) -> str:
    """Render exp(log_value) as mantissa/exponent without exponentiating."""
    log10 = log_value / _LN10
    exponent = math.floor(log10)
    mantissa = 10.0 ** (log10 - exponent)
    if round(mantissa, digits - 1) >= 10.0:
        mantissa /= 10.0
        exponent += 1
    return "%.*fe%d" % (digits - 1, mantissa, exponent)


def _log_fields(log_value: float) -> dict:
    return {
        "log_value": log_value,
        "log10": log_value / _LN10,
        "scientific": sci_string(log_value),
    }


def _read_spec(path: str) -> PolytopeSpec:
    if path == "-":
        text = sys.stdin.read()
    else:
        with open(path, "r", encoding="utf-8") as handle:
            text = handle.read()
    return load_problem(text)


def _emit(report: dict, as_json: bool) -> None:
    if as_json:
        print(json.dumps(report))
        return

    def walk(prefix: str, obj) -> None:
        if isinstance(obj, dict):
            for key, value in obj.items():
                walk(prefix + key + "." if isinstance(value, dict) else prefix + key, value)
        else:
            print("%s: %s" % (prefix.rstrip("."), obj))

    walk("", report)


def _pick_model(spec: PolytopeSpec, name: str) -> EntropyModel:
    if name == "auto":
        return model_for_domain(spec.domain)
    return EntropyModel(name)


def cmd_solve(args) -> int:
    spec = _read_spec(args.file)
    sol = solve_max_entropy(spec, _pick_model(spec, args.model))
    report = {
        "entropy": sol.entropy,
        "model": sol.model.value,
        "z": [float(v) for v in sol.z],
        "dual": [float(v) for v in sol.dual],
        "solver": {"iterations": sol.iterations, "residual": sol.residual},
    }
    _emit(report, args.json)
    return 0


def cmd_estimate(args) -> int:
    spec = _read_spec(args.file)
    sol = solve_max_entropy(spec)
    if spec.domain is DomainKind.VOLUME:
        est = gaussian_volume(spec, sol)
    else:
        est = gaussian_count(spec, sol)
    yfam = None
    if args.yfamily == "builtin":
        yfam = builtin_yfamily(spec)
        if yfam is None:
            print("note: no builtin solution family recognized for this system",
                  file=sys.stderr)
    cond = condition_report(spec, sol, yfam=yfam, epsilon=args.epsilon,
                            gamma_constant=args.gamma)
    report = _log_fields(est.log_value)
    report.update({
        "kappa_epsilon": cond.epsilon,
        "delta_bound": cond.delta_bound,
        "hypotheses_met": cond.hypotheses_met,
        "condition": {
            "lambda_q": cond.lambda_q,
            "theta": cond.theta,
            "alpha": cond.alpha,
            "rho": cond.rho,
            "lambda_required": cond.lambda_required,
        },
        "solver": {"iterations": sol.iterations, "residual": sol.residual},
    })
    if est.lattice_warning:
        print("warning: image lattice has index > 1; estimate scaled accordingly",
              file=sys.stderr)
    _emit(report, args.json)
    return 0


def cmd_exact(args) -> int:
    spec = _read_spec(args.file)
    if spec.domain is DomainKind.VOLUME:
        report = {"exact": exact_volume_ehrhart(spec)}
    else:
        report = {"exact": exact_count(spec)}
    _emit(report, args.json)
    return 0


def cmd_mc(args) -> int:
    spec = _read_spec(args.file)
    sol = solve_max_entropy(spec)
    est = monte_carlo_count(spec, sol, args.samples, args.seed, args.shards)
    report: dict = {}
    if est.log_value is not None:
        report.update(_log_fields(est.log_value))
    else:
        report.update({"log_value": None, "log10": None, "scientific": None})
        print("warning: zero hits; no estimate available", file=sys.stderr)
    report["mc"] = {
        "hits": est.hits,
        "samples": est.samples,
        "std_err_log": est.std_err_log,
    }
    report["solver"] = {"iterations": sol.iterations, "residual": sol.residual}
    _emit(report, args.json)
    return 0


def cmd_fourier(args) -> int:
    spec = _read_spec(args.file)
    sol = solve_max_entropy(spec)
    value = char_integral_count(spec, sol)
    report: dict = {"value": value}
    if value > 0.0:
        report.update(_log_fields(math.log(value)))
    report["solver"] = {"iterations": sol.iterations, "residual": sol.residual}
    _emit(report, args.json)
    return 0


def _parse_int_list(text: str) -> list:
    try:
        return [int(part) for part in text.split(",") if part != ""]
    except ValueError:
        raise InvalidProblemFile("expected a comma-separated integer list, got %r" % text)


def cmd_gen(args) -> int:
    domain = DomainKind(args.domain)
    if args.family == "transport":
        spec = gen_transport(_parse_int_list(args.rows), _parse_int_list(args.cols),
                             domain, name=args.name)
    else:
        dims = _parse_int_list(args.dims)
        if args.margins.startswith("uniform:"):
            value = int(args.margins.split(":", 1)[1])
            margins = [[value] * k for k in dims]
        else:
            margins = [_parse_int_list(axis) for axis in args.margins.split(";")]
        spec = gen_multiway(dims, margins, domain, name=args.name)
    print(json.dumps(problem_to_dict(spec)))
    return 0


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="entropoly",
        description="Gaussian estimates for volumes and lattice-point counts "
                    "of margin-constrained polytopes.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p):
        p.add_argument("file", help="problem file, or '-' for standard input")
        p.add_argument("--json", action="store_true", help="emit one JSON object")

    p = sub.add_parser("solve", help="maximum-entropy solve only")
    add_common(p)
    p.add_argument("--model", default="auto",
                   choices=["auto", "exponential", "geometric", "bernoulli"])
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("estimate", help="solve + Gaussian estimate + condition report")
    add_common(p)
    p.add_argument("--epsilon", type=float, default=0.25)
    p.add_argument("--gamma", type=float, default=1.0)
    p.add_argument("--yfamily", default="builtin", choices=["builtin", "none"])
    p.set_defaults(func=cmd_estimate)

    p = sub.add_parser("exact", help="exact count / exact dilation volume")
    add_common(p)
    p.set_defaults(func=cmd_exact)

    p = sub.add_parser("mc", help="seeded Monte Carlo counting estimate")
    add_common(p)
    p.add_argument("--samples", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--shards", type=int, default=1)
    p.set_defaults(func=cmd_mc)

    p = sub.add_parser("fourier", help="quadrature counting oracle (d <= 2)")
    add_common(p)
    p.set_defaults(func=cmd_fourier)

    p = sub.add_parser("gen", help="emit a benchmark problem file")
    gen_sub = p.add_subparsers(dest="family", required=True)
    pt = gen_sub.add_parser("transport", help="row/column margin system")
    pt.add_argument("--rows", required=True)
    pt.add_argument("--cols", required=True)
    pt.add_argument("--domain", default="integer", choices=["volume", "integer", "binary"])
    pt.add_argument("--name", default=None)
    pt.set_defaults(func=cmd_gen)
    pm = gen_sub.add_parser("multiway", help="sectional-sum system")
    pm.add_argument("--dims", required=True)
    pm.add_argument("--margins", required=True,
                    help="semicolon-separated per-axis lists, or uniform:N")
    pm.add_argument("--domain", default="integer", choices=["volume", "integer", "binary"])
    pm.add_argument("--name", default=None)
    pm.set_defaults(func=cmd_gen)

    return parser


def main(argv: Optional[list] = None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return args.func(args)
    except _VALIDATION_ERRORS as exc:
        print("error: %s" % exc, file=sys.stderr)
        return 1
    except _SOLVER_ERRORS as exc:
        print("solver error: %s" % exc, file=sys.stderr)
        return 2
    except _GUARD_ERRORS as exc:
        print("oracle guard: %s" % exc, file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
