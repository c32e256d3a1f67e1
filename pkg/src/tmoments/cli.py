"""Command-line front end: ``tmoments <command> [--builtin NAME | --file PATH] ...``."""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from . import combinatorics as comb
from .builtins import BUILTINS, builtin_generators, parse_params
from .errors import BudgetExceeded, InternalMismatch, SpecParseError, TransducerError
from .model import (
    final_component,
    format_rational,
    load_transducer,
    period,
    require_aperiodic,
)
from .moments import characteristic_jet, asymptotic_moments, classify
from .oracle import slope_report

EXIT_OK = 0


def _q(x):
    if isinstance(x, Fraction):
        return format_rational(x)
    if isinstance(x, (list, tuple)):
        return [_q(v) for v in x]
    if isinstance(x, dict):
        return {k: _q(v) for k, v in x.items()}
    return x


def _certificate_dict(cert, witness_names):
    out = {"verdict": cert.verdict}
    if cert.witness is not None:
        out["witness"] = dict(zip(witness_names, _q(list(cert.witness))))
    if cert.counterexample is not None:
        out["counterexample"] = cert.counterexample.to_dict()
        if cert.reference is not None:
            out["reference_cycle"] = cert.reference.to_dict()
    return out


def _load(args):
    if args.file and args.builtin:
        raise SpecParseError("give either --builtin or --file, not both")
    if args.file:
        return load_transducer(args.file), args.file
    if not args.builtin:
        raise SpecParseError("one of --builtin or --file is required")
    params = parse_params(args.param)
    t = builtin_generators(args.builtin, params)
    label = "builtin:" + args.builtin
    if args.param:
        label += " " + " ".join(args.param)
    return t, label


def _validation_summary(t):
    return {
        "states": t.state_count,
        "transitions": len(t.transitions),
        "input_alphabet": _q(list(t.input_alphabet)),
        "K": t.K,
        "deterministic": True,
        "complete": True,
        "alphabet_too_small": t.alphabet_too_small,
    }


def _component_summary(fc, p):
    return {"states": list(fc.states), "N": fc.N, "K": fc.K, "period": p}


def _ready_component(t):
    t.require_moment_ready()
    fc = final_component(t)
    require_aperiodic(fc)
    return fc


def analyze(t, source, budget=comb.DEFAULT_DIGRAPH_BUDGET, check_all=False, n_max=None, threads=1):
    """Run the whole pipeline and return a JSON-ready report."""
    fc = _ready_component(t)
    report = {
        "source": source,
        "validation": _validation_summary(t),
        "final_component": _component_summary(fc, period(fc)),
    }
    m = asymptotic_moments(characteristic_jet(fc), fc.input_alphabet)
    cls = classify(m)

    moments = {"algebraic": m.as_strings(), "combinatorial": None, "agree": None}
    aggregates = None
    try:
        aggregates = comb.digraph_aggregates(fc, budget, threads)
    except BudgetExceeded as exc:
        if check_all:
            raise
        moments["combinatorial_skipped"] = str(exc)
    if aggregates is not None:
        mc = comb.moments_combinatorial(fc, aggregates=aggregates)
        moments["combinatorial"] = mc.as_strings()
        moments["agree"] = mc == m
        if check_all and mc != m:
            raise InternalMismatch("algebraic and combinatorial moments disagree")
    report["moments"] = moments

    report["classification"] = {
        "independent": cls.independent,
        "bounded_variance": cls.bounded_variance,
        "sigma_rank": cls.sigma_rank,
        "squared_correlation": _q(cls.squared_correlation),
        "correlation_sign": cls.correlation_sign,
        "perfectly_correlated": cls.perfectly_correlated,
        "limit_law": cls.limit_law,
    }

    bv = comb.bounded_variance_certificate(fc)
    r1 = comb.rank1_certificate(fc, m)
    if bv.verdict != (m.v2 == 0) or r1.verdict != (m.sigma_det == 0):
        raise InternalMismatch("cycle certificates disagree with the moment constants")
    certs = {
        "bounded_variance": _certificate_dict(bv, ("k",)),
        "rank1": _certificate_dict(r1, ("a", "b")),
    }
    try:
        certs["quasi_deterministic"] = _certificate_dict(
            comb.quasi_deterministic_certificate(t), ("k",)
        )
    except TransducerError as exc:
        certs["quasi_deterministic"] = {"error": str(exc)}
    report["certificates"] = certs

    if check_all:
        identities = comb.verify_derivative_identities(fc, aggregates=aggregates)
        report["derivative_identities"] = {
            name: {"jet": _q(a), "digraphs": _q(b), "holds": ok}
            for name, (a, b, ok) in identities.items()
        }
    if n_max is not None:
        report["oracle"] = _q(slope_report(t, range(1, n_max), m))
    return report


def cycles_report(t, source, budget=comb.DEFAULT_CYCLE_BUDGET):
    fc = final_component(t)
    final_states = set(fc.states)
    cycles = comb.simple_cycles(t, budget)
    rows = []
    for c in cycles:
        row = c.to_dict()
        row["in_final_component"] = set(c.states) <= final_states
        rows.append(row)
    return {"source": source, "final_component": list(fc.states), "count": len(rows), "cycles": rows}


def digraphs_report(t, source, budget=comb.DEFAULT_DIGRAPH_BUDGET, threads=1):
    fc = _ready_component(t)
    agg = comb.digraph_aggregates(fc, budget, threads)
    names = ("one", "eps", "delta")
    sums = {f"{names[a]}(D1)": agg["d1"][a] for a in range(3)}
    for a in range(3):
        for b in range(a, 3):
            sums[f"{names[a]}{names[b]}(D1)"] = agg["d1_pair"][a][b]
            sums[f"{names[a]}{names[b]}(D2)"] = agg["d2_pair"][a][b]
    return {
        "source": source,
        "final_component": list(fc.states),
        "D1": agg["count1"],
        "D2": agg["count2"],
        "choice_maps": fc.K**fc.N,
        "sums": _q(sums),
    }


def oracle_report(t, source, n_max):
    fc = _ready_component(t)
    m = asymptotic_moments(characteristic_jet(fc), fc.input_alphabet)
    return {
        "source": source,
        "constants": m.as_strings(),
        "slopes": _q(slope_report(t, range(1, n_max), m)),
    }


def validate_report(t, source):
    report = {"source": source, "validation": _validation_summary(t)}
    fc = final_component(t)
    report["final_component"] = _component_summary(fc, period(fc))
    t.require_moment_ready()
    require_aperiodic(fc)
    report["ready_for_analysis"] = True
    return report


# --- text rendering ----------------------------------------------------------


def _decimal(s):
    if isinstance(s, str) and "/" in s:
        try:
            return f"{s} (~{float(Fraction(s)):.6g})"
        except ValueError:
            return s
    return s


def render_text(obj, indent=0) -> str:
    pad = "  " * indent
    lines = []
    if isinstance(obj, dict):
        for key, value in obj.items():
            if isinstance(value, (dict, list)) and value:
                lines.append(f"{pad}{key}:")
                lines.append(render_text(value, indent + 1))
            else:
                lines.append(f"{pad}{key}: {_decimal(value) if value is not None else '-'}")
    elif isinstance(obj, list):
        if obj and all(isinstance(v, dict) for v in obj):
            for item in obj:
                cells = ", ".join(f"{k}={_decimal(v)}" for k, v in item.items())
                lines.append(f"{pad}- {cells}")
        else:
            lines.append(pad + ", ".join(str(v) for v in obj))
    else:
        lines.append(f"{pad}{obj}")
    return "\n".join(lines)


def _positive_int(text):
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return value


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    src = common.add_argument_group("source")
    src.add_argument("--builtin", metavar="NAME", help="one of: " + ", ".join(BUILTINS))
    src.add_argument("--file", metavar="PATH", help="JSON transducer description")
    common.add_argument("--param", action="append", default=[], metavar="K=V",
                        help="builtin parameter, e.g. w=4 or a=(1,0,0,0)")
    common.add_argument("--format", choices=("json", "text"), default="text")
    common.add_argument("--budget", type=_positive_int, default=None,
                        help="enumeration cap (choice maps or cycles)")
    common.add_argument("--n-max", type=_positive_int, default=None)
    common.add_argument("--check-all", action="store_true",
                        help="require combinatorial agreement and all derivative identities")
    common.add_argument("--threads", type=_positive_int, default=1,
                        help="processes for functional-digraph enumeration")

    parser = argparse.ArgumentParser(
        prog="tmoments",
        description="Asymptotic input/output sum moments of finite-state transducers.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("analyze", parents=[common], help="full analysis report")
    sub.add_parser("cycles", parents=[common], help="list simple cycles")
    sub.add_parser("digraphs", parents=[common], help="functional digraph counts and sums")
    sub.add_parser("oracle", parents=[common], help="exact finite-n slope table")
    sub.add_parser("validate", parents=[common], help="check structural preconditions")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        t, source = _load(args)
        if args.command == "analyze":
            kw = {"check_all": args.check_all, "n_max": args.n_max, "threads": args.threads}
            if args.budget:
                kw["budget"] = args.budget
            report = analyze(t, source, **kw)
        elif args.command == "cycles":
            report = cycles_report(t, source, args.budget or comb.DEFAULT_CYCLE_BUDGET)
        elif args.command == "digraphs":
            report = digraphs_report(
                t, source, args.budget or comb.DEFAULT_DIGRAPH_BUDGET, args.threads
            )
        elif args.command == "oracle":
            report = oracle_report(t, source, args.n_max or 20)
        else:
            report = validate_report(t, source)
    except TransducerError as exc:
        print(f"error: {exc}", file=sys.stderr)
        if isinstance(exc, BudgetExceeded):
            print("hint: raise --budget or analyze a smaller final component", file=sys.stderr)
        return exc.exit_code

    if args.format == "json":
        print(json.dumps(report, indent=2, ensure_ascii=False))
    else:
        print(render_text(report))
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
