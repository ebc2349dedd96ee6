"""Command-line interface.

Subcommands: bound (compute and certify bounds for one problem), sweep
(tabulate the scalar-weight bound over a gamma grid), generate (write a
seeded family instance to Matrix Market files), verify (run the invariant
suite and fail on any violation).

Exit codes: 0 success, 1 invariant violation, 2 input error, 3 size cap.
"""

import argparse
import json
import os
import sys

from . import __version__
from .bounds import (
    ScalarWeight,
    agamma_bound,
    applicable_bounds,
    general_rank_optimal_gamma,
    optimal_gamma,
    rusten_winther,
    wbound,
)
from .errors import (
    ParameterOutOfRangeError,
    ParseError,
    SaddleBoundsError,
    SizeCapError,
    StructureError,
    ZeroAngleError,
)
from .harness import (
    DEFAULT_COND_CAP,
    augmented_condition,
    certify,
    containment_violations,
    gamma_sweep,
    inverse_identity_residual,
    log_gamma_grid,
    oracle,
    ptp_spectrum_deviation,
)
from .mmio import write_matrix_market
from .problems import FAMILIES, GeneratorSpec, generate_problem
from .reporting import (
    ProblemFileSet,
    RunConfig,
    bounds_to_csv,
    envelope_to_json,
    read_problem,
    report_envelope,
    write_report,
)

EXIT_OK = 0
EXIT_VIOLATION = 1
EXIT_INPUT = 2
EXIT_SIZE_CAP = 3

_FAMILY_ALIASES = {
    "toy": "toy-2x2",
    "remark": "remark-3x3",
    "angles": "prescribed-angles",
    "ipm": "ipm-like",
    "random": "random-lowest-rank",
}

_VERIFY_GAMMAS = (0.1, 1.0, 10.0)
_INVERSE_IDENTITY_TOL = 1e-8
_CONTAINMENT_SLACK = 1e-8
_PTP_TOL = 1e-8


def _add_problem_args(parser, allow_k=True):
    parser.add_argument("--A", metavar="FILE", help="Matrix Market file for the leading block")
    parser.add_argument("--B", metavar="FILE", help="Matrix Market file for the constraint block")
    if allow_k:
        parser.add_argument("--K", metavar="FILE", help="Matrix Market file for the whole matrix")
        parser.add_argument("--n", type=int, help="leading block order when reading --K")
    parser.add_argument("--relTol", type=float, default=None,
                        help="relative rank tolerance (default: n * machine epsilon)")


def _fileset(args, allow_k=True):
    has_ab = args.A is not None and args.B is not None
    has_k = allow_k and getattr(args, "K", None) is not None
    if has_k:
        if args.n is None:
            raise ParameterOutOfRangeError("--K needs --n for the leading block order")
        return ProblemFileSet(path_k=args.K, split_n=args.n)
    if not has_ab:
        raise ParameterOutOfRangeError("need --A and --B, or --K with --n")
    return ProblemFileSet(path_a=args.A, path_b=args.B)


def _source_meta(args, allow_k=True):
    if allow_k and getattr(args, "K", None) is not None:
        return {"K": args.K, "n": args.n}
    return {"A": args.A, "B": args.B}


def build_parser():
    parser = argparse.ArgumentParser(
        prog="saddlebounds",
        description="Guaranteed eigenvalue bounds for saddle-point matrices "
        "with singular leading blocks.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p_bound = sub.add_parser("bound", help="compute and certify bounds for one problem")
    _add_problem_args(p_bound)
    group = p_bound.add_mutually_exclusive_group()
    group.add_argument("--gamma", type=float, help="scalar weight for the augmented bound")
    group.add_argument("--auto-gamma", action="store_true",
                       help="use the gamma that equalizes the angle bound")
    fmt = p_bound.add_mutually_exclusive_group()
    fmt.add_argument("--json", action="store_true", help="JSON output (default)")
    fmt.add_argument("--csv", action="store_true", help="CSV output")
    p_bound.add_argument("--out", metavar="DIR", help="directory for report files")
    p_bound.set_defaults(func=cmd_bound)

    p_sweep = sub.add_parser("sweep", help="tabulate the scalar-weight bound over a gamma grid")
    _add_problem_args(p_sweep)
    p_sweep.add_argument("--gamma-min", type=float, default=1e-4)
    p_sweep.add_argument("--gamma-max", type=float, default=1e4)
    p_sweep.add_argument("--points", type=int, default=25)
    p_sweep.add_argument("--out", metavar="DIR", required=True,
                         help="directory for report files")
    p_sweep.set_defaults(func=cmd_sweep)

    p_gen = sub.add_parser("generate", help="write a seeded family instance to files")
    p_gen.add_argument("--family", required=True,
                       choices=sorted(set(_FAMILY_ALIASES) | set(FAMILIES)))
    p_gen.add_argument("--params", default="{}",
                       help="family parameters as a JSON object")
    p_gen.add_argument("--seed", type=int, default=0)
    p_gen.add_argument("--out", metavar="DIR", required=True)
    p_gen.set_defaults(func=cmd_generate)

    p_verify = sub.add_parser("verify", help="run the invariant suite on one problem")
    _add_problem_args(p_verify)
    p_verify.add_argument("--gamma", type=float, default=None,
                          help="check this gamma instead of the default set")
    p_verify.set_defaults(func=cmd_verify)
    return parser


def _config(args):
    return RunConfig(rel_tol=getattr(args, "relTol", None))


def cmd_bound(args):
    cfg = _config(args)
    fmt = "csv" if args.csv else "json"
    problem = read_problem(_fileset(args), cfg)
    notes = []
    gamma = args.gamma
    if args.auto_gamma:
        if problem.is_lowest_rank:
            gamma = optimal_gamma(problem, cfg.angle_tol)
        else:
            gamma = general_rank_optimal_gamma(problem, cfg.angle_tol)
            notes.append(
                "auto-gamma fell back to the split-based formula because "
                f"rank(A) = {problem.summary.rank_a} exceeds n - m = {problem.n - problem.m}"
            )
            print(f"warning: {notes[-1]}", file=sys.stderr)
    reports = applicable_bounds(problem, gamma=gamma, angle_tol=cfg.angle_tol)
    certifications = None
    oracle_result = None
    if problem.n + problem.m <= cfg.size_cap:
        oracle_result = oracle(problem, cfg.size_cap)
        certifications = [certify(r, oracle_result, cfg.cert_slack) for r in reports]
    else:
        notes.append("certification skipped: problem exceeds the oracle size cap")
    envelope = report_envelope(
        problem, cfg, reports, certifications,
        oracle_result=oracle_result, source=_source_meta(args), notes=notes,
    )
    if args.out:
        written = write_report(args.out, envelope, reports, certifications,
                               output_format=fmt)
        for path in written:
            print(path)
    elif fmt == "csv":
        sys.stdout.write(bounds_to_csv(reports, certifications))
    else:
        sys.stdout.write(envelope_to_json(envelope))
    return EXIT_OK


def cmd_sweep(args):
    cfg = RunConfig(rel_tol=getattr(args, "relTol", None),
                    gamma_min=args.gamma_min, gamma_max=args.gamma_max,
                    gamma_points=args.points)
    problem = read_problem(_fileset(args), cfg)
    grid = log_gamma_grid(cfg.gamma_min, cfg.gamma_max, cfg.gamma_points)
    sweep = gamma_sweep(problem, grid, size_cap=cfg.size_cap)
    reports = applicable_bounds(problem, angle_tol=cfg.angle_tol)
    oracle_result = oracle(problem, cfg.size_cap)
    certifications = [certify(r, oracle_result, cfg.cert_slack) for r in reports]
    envelope = report_envelope(
        problem, cfg, reports, certifications, sweep=sweep,
        oracle_result=oracle_result, source=_source_meta(args),
    )
    written = write_report(args.out, envelope, reports, certifications, sweep=sweep)
    for path in written:
        print(path)
    return EXIT_OK


def cmd_generate(args):
    family = _FAMILY_ALIASES.get(args.family, args.family)
    try:
        params = json.loads(args.params)
    except json.JSONDecodeError as exc:
        raise ParameterOutOfRangeError(f"--params is not valid JSON: {exc}") from exc
    if not isinstance(params, dict):
        raise ParameterOutOfRangeError("--params must be a JSON object")
    spec = GeneratorSpec(family, params, args.seed)
    problem = generate_problem(spec)
    os.makedirs(args.out, exist_ok=True)
    path_a = os.path.join(args.out, "A.mtx")
    path_b = os.path.join(args.out, "B.mtx")
    path_spec = os.path.join(args.out, "spec.json")
    write_matrix_market(path_a, problem.A.array, symmetric=True)
    write_matrix_market(path_b, problem.B.array)
    with open(path_spec, "w", encoding="ascii") as fh:
        fh.write(spec.to_json_str())
    for path in (path_a, path_b, path_spec):
        print(path)
    return EXIT_OK


def run_verification(problem, gammas, cert_slack=1e-8, angle_tol=1e-10,
                     size_cap=2000, emit=print):
    """Invariant suite shared by the verify subcommand and tests.

    Returns a list of failure descriptions; empty means everything held.
    """
    failures = []
    oracle_result = oracle(problem, size_cap)

    if not oracle_result.inertia_ok:
        failures.append(
            f"inertia: expected {problem.n} positive / {problem.m} negative, got "
            f"{oracle_result.pos_count} / {oracle_result.neg_count}"
        )
    emit(f"inertia counts: {'ok' if oracle_result.inertia_ok else 'FAIL'}")

    rw = rusten_winther(problem.summary)
    outside = containment_violations(rw, oracle_result, _CONTAINMENT_SLACK)
    if outside.size:
        failures.append(f"containment: {outside.size} eigenvalues outside the intervals")
    emit(f"interval containment: {'ok' if not outside.size else 'FAIL'}")

    reports = applicable_bounds(problem, angle_tol=angle_tol)
    for gamma in gammas:
        reports.append(wbound(problem, ScalarWeight(gamma)))
        if problem.is_lowest_rank:
            reports.append(agamma_bound(problem, gamma))
    for report in reports:
        outcome = certify(report, oracle_result, cert_slack)
        if outcome.status == "violated":
            failures.append(
                f"soundness: {report.name} = {report.value:.6e} exceeds "
                f"mu_min_plus(K) = {oracle_result.mu_min_plus:.6e}"
            )
        tag = report.name
        if "gamma" in report.details:
            tag = f"{report.name} (gamma={report.details['gamma']:g})"
        emit(f"soundness {tag}: {outcome.status} (slack {outcome.slack:.3e})")

    for gamma in gammas:
        weight = ScalarWeight(gamma)
        cond = augmented_condition(problem, weight)
        if cond > DEFAULT_COND_CAP:
            emit(f"inverse identity gamma={gamma:g}: skipped (condition {cond:.3e})")
            continue
        residual = inverse_identity_residual(problem, weight)
        ok = residual <= _INVERSE_IDENTITY_TOL
        if not ok:
            failures.append(
                f"inverse identity at gamma={gamma:g}: residual {residual:.3e}"
            )
        emit(f"inverse identity gamma={gamma:g}: {'ok' if ok else 'FAIL'} "
             f"(residual {residual:.3e})")

    if problem.is_lowest_rank:
        dev_spec, dev_inv = ptp_spectrum_deviation(problem)
        ok = dev_spec <= _PTP_TOL and dev_inv <= _PTP_TOL
        if not ok:
            failures.append(
                f"stacked-basis spectrum: deviations {dev_spec:.3e}, {dev_inv:.3e}"
            )
        emit(f"stacked-basis spectrum: {'ok' if ok else 'FAIL'}")
    return failures


def cmd_verify(args):
    cfg = _config(args)
    problem = read_problem(_fileset(args), cfg)
    gammas = (args.gamma,) if args.gamma is not None else _VERIFY_GAMMAS
    failures = run_verification(
        problem, gammas, cfg.cert_slack, cfg.angle_tol, cfg.size_cap
    )
    if failures:
        for failure in failures:
            print(f"violation: {failure}", file=sys.stderr)
        return EXIT_VIOLATION
    print("all invariants hold")
    return EXIT_OK


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except SizeCapError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SIZE_CAP
    except (ParseError, StructureError, ParameterOutOfRangeError, ZeroAngleError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except SaddleBoundsError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
