"""Command-line entry point.

Exit codes: 0 when every check passes, 1 when a check fails (the report
is still written), 2 on usage or input errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .axioms import check_axioms, check_derived_lemma, check_symmetrization_invariants, classify_structure
from .completeness import (
    SequenceSpec,
    audit_counterexample,
    build_counterexample_map,
    classify_sequence,
    default_candidates,
    default_family,
    probe_completeness,
)
from .errors import NonConvergenceError, PQKError, PreconditionError
from .kannan import MAP_REGISTRY, check_kannan, estimate_lambda, named_map, read_mapping
from .oracle import exhaustive_kannan_audit, random_valid_finite_space
from .sampling import CheckStrategy, module_seed
from .solver import iterate
from .spaces import BUILTIN_SPACES, FiniteSpace, builtin_space, finite_space_document, read_finite_space

OK, FAILED, USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _positive_float(s):
    v = float(s)
    if not v > 0:
        raise argparse.ArgumentTypeError(f"must be positive, got {s}")
    return v


def _nonneg_float(s):
    v = float(s)
    if not v >= 0:
        raise argparse.ArgumentTypeError(f"must be non-negative, got {s}")
    return v


def _positive_int(s):
    v = int(s)
    if v < 1:
        raise argparse.ArgumentTypeError(f"must be a positive integer, got {s}")
    return v


def _seed(s):
    v = int(s)
    if not 0 <= v < 2**64:
        raise argparse.ArgumentTypeError("seed must fit in an unsigned 64-bit integer")
    return v


def resolve_space(arg):
    if arg in BUILTIN_SPACES:
        return builtin_space(arg)
    path = Path(arg)
    if path.is_file():
        return read_finite_space(path)
    raise UsageError(
        f"unknown space {arg!r}: not a built-in ({', '.join(BUILTIN_SPACES)}) or a file"
    )


def resolve_map(arg):
    if arg in MAP_REGISTRY:
        return named_map(arg)
    path = Path(arg)
    if path.is_file():
        return read_mapping(path)
    raise UsageError(f"unknown map {arg!r}: not a built-in ({', '.join(MAP_REGISTRY)}) or a file")


def _strategy(space, args, module):
    return CheckStrategy.default_for(
        space,
        sample_count=args.samples,
        seed=module_seed(args.seed, module),
        slack=args.slack,
    )


def _parse_point(space, text):
    try:
        return int(text) if isinstance(space, FiniteSpace) else float(text)
    except ValueError:
        raise UsageError(f"bad point {text!r} for {space.label!r}") from None


def parse_sequence(text, horizon):
    """``geometric[:ratio]``, ``harmonic``, ``n/(n+1)`` or ``values:v1,v2,...``."""
    name, _, arg = text.partition(":")
    if name == "geometric":
        return SequenceSpec.geometric(float(arg) if arg else 0.5, horizon)
    if name == "harmonic":
        return SequenceSpec.harmonic(horizon)
    if name in ("n/(n+1)", "approach_one"):
        return SequenceSpec.approach_one(horizon)
    if name == "values":
        vals = [float(v) for v in arg.split(",") if v.strip()]
        return SequenceSpec.from_values(vals, name=text)
    raise UsageError(f"unknown sequence {text!r}; use geometric[:r], harmonic, n/(n+1), values:...")


def _candidates(space, text):
    if text is None:
        return None
    return [_parse_point(space, t) for t in text.split(",") if t.strip()]


# each handler returns (exit code, structured payload, human-readable lines)


def cmd_axioms(args):
    space = resolve_space(args.space)
    cls = classify_structure(space, _strategy(space, args, "axioms"))
    payload = {"report": cls.report.to_dict(), "classification": cls.label,
               "symmetric": cls.symmetric, "zero_self_distances": cls.zero_self_distances}
    lines = cls.report.summary_lines() + [f"classification: {cls.label}"]
    return (OK if cls.report.passed else FAILED), payload, lines


def cmd_derived(args):
    space = resolve_space(args.space)
    strategy = _strategy(space, args, "axioms")
    inv = check_symmetrization_invariants(space, strategy)
    try:
        report = check_derived_lemma(space, strategy)
    except PreconditionError as exc:
        payload = {"error": str(exc), "report": exc.report.to_dict(), "invariants": inv.to_dict()}
        lines = [f"precondition failed: {exc}"] + exc.report.summary_lines() + inv.summary_lines()
        return FAILED, payload, lines
    payload = {"report": report.to_dict(), "invariants": inv.to_dict()}
    lines = report.summary_lines() + inv.summary_lines()
    return (OK if report.passed and inv.passed else FAILED), payload, lines


def cmd_kannan(args):
    space = resolve_space(args.space)
    mapping = resolve_map(args.map)
    strategy = _strategy(space, args, "kannan")
    if args.lam is not None:
        report = check_kannan(space, mapping, args.lam, strategy)
        return (OK if report.passed else FAILED), report.to_dict(), report.summary_lines()
    est = estimate_lambda(space, mapping, strategy)
    payload = est.to_dict()
    if est.feasible:
        line = f"lambda_hat = {float(est.lambda_hat):.12g} at {est.witness} ({est.checks} pairs)"
    else:
        line = f"infeasible: positive left side with zero right side at {est.witness}"
    verdict = "p-Kannan" if est.is_kannan else "not p-Kannan (lambda_hat >= 1/4 or infeasible)"
    return (OK if est.is_kannan else FAILED), payload, [line, verdict]


def cmd_solve(args):
    space = resolve_space(args.space)
    mapping = resolve_map(args.map)
    start = _parse_point(space, args.start)
    try:
        trace, result = iterate(space, mapping, start, args.tolerance, args.max_iter)
    except NonConvergenceError as exc:
        trace = exc.trace
        if args.trace and trace is not None:
            with open(args.trace, "w", newline="") as fh:
                trace.write_csv(fh)
        payload = {"error": str(exc), "iterations": 0 if trace is None else len(trace)}
        return FAILED, payload, [f"no fixed point: {exc}"], trace
    if args.trace:
        with open(args.trace, "w", newline="") as fh:
            trace.write_csv(fh)
    lines = [
        f"fixed point {result.point!r} after {result.iterations} iterations "
        f"({result.terminated_by})",
        f"residual p+(z, Tz) = {result.residual:.6g}, self-distance p(z, z) = {result.self_distance:.6g}",
    ]
    return OK, result.to_dict(), lines, trace


def cmd_classify_seq(args):
    space = resolve_space(args.space)
    seq = parse_sequence(args.seq, args.horizon)
    cands = _candidates(space, args.candidates) or []
    c = classify_sequence(space, seq, cands, args.tolerance)
    d = c.to_dict()
    lines = [
        f"sequence {c.sequence} (horizon {c.horizon}, tolerance {c.tolerance:g})",
        f"  left p-Cauchy:        {c.left_p_cauchy} (limit ~ {c.left_p_limit:.6g})",
        f"  tau(p+)-Cauchy:       {c.tau_p_plus_cauchy} (limit ~ {c.tau_p_plus_limit:.6g})",
        f"  tau(p)-convergent to: {c.tau_p_convergent_to}",
        f"  tau(p+)-convergent to: {c.tau_p_plus_convergent_to}",
        "  (limits are judged only against the listed candidates)",
    ]
    return (OK if c.coherent else FAILED), d, lines


def cmd_probe(args):
    space = resolve_space(args.space)
    cands = _candidates(space, args.candidates)
    probe = probe_completeness(space, default_family(args.horizon), cands, args.tolerance)
    lines = [f"completeness probe [{space.label}] candidates {probe.candidates}"]
    for k, v in probe.counterexamples.items():
        lines.append(f"  {k:<18} {'no counterexample found' if v is None else 'counterexample: ' + v}")
    if probe.candidates_insufficient:
        lines.append("  candidates insufficient: no limits were tested")
    lines.append(f"  note: {probe.note}")
    return (OK if probe.passed else FAILED), probe.to_dict(), lines


def cmd_converse_demo(args):
    space = builtin_space("paper_example_punctured")
    cmap = build_counterexample_map(space)
    strategy = CheckStrategy.sampled(
        args.samples, seed=module_seed(args.seed, "completeness"), slack=args.slack,
        upper_cap=args.upper_cap,
    )
    report = audit_counterexample(space, cmap, strategy)
    return (OK if report.passed else FAILED), report.to_dict(), report.summary_lines()


def cmd_oracle(args):
    if args.space is None and args.n is None:
        raise UsageError("oracle needs --n N and/or --space FILE")
    if args.space is not None:
        space = resolve_space(args.space)
        if not isinstance(space, FiniteSpace):
            raise UsageError("oracle needs a finite space")
        if args.n is not None and args.n != space.size:
            raise UsageError(f"--n {args.n} does not match the {space.size}-point space")
    else:
        rng = np.random.default_rng(module_seed(args.seed, "oracle"))
        space = random_valid_finite_space(args.n, rng, label=f"random-n{args.n}")
    audit = exhaustive_kannan_audit(space, cap=args.cap)
    payload = audit.to_dict()
    payload["space"] = finite_space_document(space)
    payload["kannan_maps"] = [
        {"table": list(t), "lambda_min": str(lam)} for t, lam in audit.kannan_maps
    ]
    lines = [
        f"oracle [{space.label}] n={audit.n} maps_total={audit.maps_total} "
        f"kannan_count={audit.kannan_count} violations={len(audit.violations)}"
    ] + [f"  {list(t)}  lambda_min={lam}" for t, lam in audit.kannan_maps]
    return (OK if audit.passed else FAILED), payload, lines


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=_seed, default=42, help="run seed (default 42)")
    common.add_argument("--tolerance", type=_positive_float, default=1e-12)
    common.add_argument("--slack", type=_nonneg_float, default=1e-9)
    common.add_argument("--samples", type=_positive_int, default=10_000)
    common.add_argument("--horizon", type=_positive_int, default=256)
    common.add_argument(
        "--format", choices=("human", "structured", "delimited"), default="human",
        help="delimited (CSV) is only available for iteration traces",
    )

    parser = argparse.ArgumentParser(
        prog="pqkannan",
        description="Partial quasi-metric spaces, p-Kannan maps and their fixed points.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("axioms", parents=[common], help="check axioms and classify a space")
    p.add_argument("space")
    p.set_defaults(func=cmd_axioms)

    p = sub.add_parser("derived", parents=[common], help="check the conjugate and p+ spaces")
    p.add_argument("space")
    p.set_defaults(func=cmd_derived)

    p = sub.add_parser("kannan", parents=[common], help="check or estimate a Kannan constant")
    p.add_argument("space")
    p.add_argument("map")
    g = p.add_mutually_exclusive_group()
    g.add_argument("--lambda", dest="lam", type=_nonneg_float, default=None)
    g.add_argument("--estimate", action="store_true")
    p.set_defaults(func=cmd_kannan)

    p = sub.add_parser("solve", parents=[common], help="Picard iteration to a fixed point")
    p.add_argument("space")
    p.add_argument("map")
    p.add_argument("--start", required=True)
    p.add_argument("--trace", metavar="FILE")
    p.add_argument("--max-iter", type=_positive_int, default=10**6)
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("classify-seq", parents=[common], help="classify a sequence")
    p.add_argument("space")
    p.add_argument("--seq", required=True)
    p.add_argument("--candidates", default=None, help="comma-separated candidate limits")
    p.set_defaults(func=cmd_classify_seq)

    p = sub.add_parser("probe", parents=[common], help="look for completeness counterexamples")
    p.add_argument("space")
    p.add_argument("--candidates", default=None)
    p.set_defaults(func=cmd_probe)

    p = sub.add_parser("converse-demo", parents=[common],
                       help="audit the fixed-point-free Kannan map on (0, inf)")
    p.add_argument("--upper-cap", type=_positive_float, default=1e3)
    p.set_defaults(func=cmd_converse_demo)

    p = sub.add_parser("oracle", parents=[common], help="exhaustive audit of a small finite space")
    p.add_argument("--n", type=_positive_int, default=None)
    p.add_argument("--space", default=None)
    p.add_argument("--cap", type=_positive_int, default=8)
    p.set_defaults(func=cmd_oracle)
    return parser


def _emit(fmt, payload, lines, trace, out):
    if fmt == "structured":
        out.write(json.dumps(payload, indent=2, default=_default) + "\n")
    elif fmt == "delimited":
        trace.write_csv(out)
    else:
        out.write("\n".join(lines) + "\n")


def _default(obj):
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.floating,)):
        return float(obj)
    if isinstance(obj, np.bool_):
        return bool(obj)
    return str(obj)


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return USAGE if exc.code not in (0, None) else OK
    if args.format == "delimited" and args.command != "solve":
        print("error: --format delimited is only available for 'solve'", file=sys.stderr)
        return USAGE
    try:
        out = args.func(args)
    except (UsageError, PQKError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE
    code, payload, lines, *rest = out
    trace = rest[0] if rest else None
    if args.format == "delimited" and trace is None:
        print("error: no trace to write", file=sys.stderr)
        return USAGE if code == OK else code
    _emit(args.format, payload, lines, trace, sys.stdout)
    if code != OK and args.format != "human":
        print("check failed", file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
