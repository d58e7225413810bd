"""Command-line interface.

Exit codes: 0 on success, 1 on solver errors, 2 on usage errors.
"""

import argparse
import sys
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import harness
from .benchmarks import SUITE_NAMES
from .history import write_history_csv, write_history_jsonl
from .problem import subprocess_blackbox
from .solvers import (ALGORITHMS, SEARCHES, rational_tau, run,
                      run_equivalence_pair, equivalence_report)
from .testproblems import builtin_problem

EXIT_OK = 0
EXIT_SOLVER = 1
EXIT_USAGE = 2


class UsageError(Exception):
    pass


def _parse_bool(text):
    value = text.strip().lower()
    if value in ("true", "1", "yes"):
        return True
    if value in ("false", "0", "no"):
        return False
    raise argparse.ArgumentTypeError(f"expected true/false, got {text!r}")


def _parse_tau(text):
    text = text.strip()
    try:
        if "/" in text:
            frac = Fraction(text)
            return float(frac)
        return float(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"invalid tau {text!r}")


def _parse_vector(text):
    try:
        return np.array([float(v) for v in text.split(",")])
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid vector {text!r}")


def _build_parser():
    parser = argparse.ArgumentParser(
        prog="ddsopt",
        description="Derivative-free direct-search optimization toolkit.")
    sub = parser.add_subparsers(dest="command", required=True)

    run_p = sub.add_parser("run", help="run one algorithm on one problem")
    run_p.add_argument("--algo", required=True, choices=ALGORITHMS)
    target = run_p.add_mutually_exclusive_group(required=True)
    target.add_argument("--problem", help="registered problem name")
    target.add_argument("--blackbox", help="path to a blackbox executable")
    run_p.add_argument("--budget", required=True, type=int,
                       help="evaluation budget")
    run_p.add_argument("--seed", type=int, default=0)
    run_p.add_argument("--search", choices=SEARCHES, default="none")
    run_p.add_argument("--tau", type=_parse_tau, default=0.5,
                       help="step contraction ratio (float or p/q)")
    run_p.add_argument("--opportunistic", type=_parse_bool, default=True,
                       metavar="BOOL")
    run_p.add_argument("--frame0", type=float, default=1.0,
                       help="initial frame size")
    run_p.add_argument("--out", help="history file (.csv or .jsonl)")
    run_p.add_argument("--plot", help="optional convergence figure (.svg/.png)")
    run_p.add_argument("--x0", type=_parse_vector,
                       help="start point for --blackbox (comma separated)")
    run_p.add_argument("--m", type=int, default=0,
                       help="number of constraints reported by --blackbox")
    run_p.add_argument("--lb", type=_parse_vector, help="lower bounds")
    run_p.add_argument("--ub", type=_parse_vector, help="upper bounds")
    run_p.add_argument("--timeout", type=float, default=60.0,
                       help="per-evaluation timeout for --blackbox (seconds)")

    camp_p = sub.add_parser("campaign", help="run a suite of instances")
    camp_p.add_argument("--suite", required=True, choices=SUITE_NAMES)
    camp_p.add_argument("--algos", required=True,
                        help="comma-separated algorithm list")
    camp_p.add_argument("--seeds", required=True, type=int,
                        help="number of seeds (0..K-1)")
    camp_p.add_argument("--budget", required=True, type=int,
                        help="budget in groups of (n+1) evaluations")
    camp_p.add_argument("--out", required=True, help="output directory")
    camp_p.add_argument("--search", choices=SEARCHES, default=None,
                        help="override the suite's search step")
    camp_p.add_argument("--workers", type=int, default=1)

    prof_p = sub.add_parser("profile", help="data profiles from run histories")
    prof_p.add_argument("--in", dest="in_dir", required=True,
                        help="directory of run histories")
    prof_p.add_argument("--tau-acc", dest="tau_acc", required=True,
                        type=float, help="accuracy in (0, 1)")
    prof_p.add_argument("--out", required=True,
                        help="profile CSV path (figure lands beside it)")
    prof_p.add_argument("--no-figure", action="store_true")

    equiv_p = sub.add_parser(
        "equiv-check",
        help="verify the mesh driver equals its exclusion-region instance")
    equiv_p.add_argument("--problem", required=True)
    equiv_p.add_argument("--budget", required=True, type=int)
    equiv_p.add_argument("--seed", type=int, default=0)
    equiv_p.add_argument("--search", choices=SEARCHES, default="none")
    equiv_p.add_argument("--tau", type=_parse_tau, default=0.5)
    return parser


def _default_out(args):
    name = args.problem if args.problem else Path(args.blackbox).stem
    return harness.default_out_dir() / f"{name}__{args.algo}__s{args.seed}.csv"


def _make_problem(args):
    if args.problem:
        try:
            return builtin_problem(args.problem)
        except ValueError as exc:
            raise UsageError(str(exc)) from None
    if args.x0 is None:
        raise UsageError("--blackbox requires --x0")
    try:
        return subprocess_blackbox(args.blackbox, timeout=args.timeout,
                                   x0=args.x0, n_constraints=args.m,
                                   lower=args.lb, upper=args.ub)
    except (FileNotFoundError, ValueError) as exc:
        raise UsageError(str(exc)) from None


def _cmd_run(args):
    if args.algo == "mads":
        try:
            rational_tau(args.tau)
        except ValueError as exc:
            raise UsageError(str(exc)) from None
    problem = _make_problem(args)
    history = run(args.algo, problem, args.budget, args.seed,
                  search=args.search, tau=args.tau,
                  opportunistic=args.opportunistic, frame0=args.frame0)
    out = Path(args.out) if args.out else _default_out(args)
    out.parent.mkdir(parents=True, exist_ok=True)
    if out.suffix == ".jsonl":
        write_history_jsonl(history, out)
    else:
        write_history_csv(history, out)
    if args.plot:
        from .plots import render_history
        render_history(history, args.plot)
    best = history.best_value()
    print(f"{args.algo} on {problem.name}: best {best:.10g} "
          f"after {len(history.records)} evaluations -> {out}")
    return EXIT_OK


def _cmd_campaign(args):
    algorithms = [a.strip() for a in args.algos.split(",") if a.strip()]
    unknown = [a for a in algorithms if a not in ALGORITHMS]
    if not algorithms or unknown:
        raise UsageError(f"--algos must name algorithms from {ALGORITHMS}")
    if args.seeds < 1 or args.budget < 1 or args.workers < 1:
        raise UsageError("--seeds, --budget, and --workers must be positive")
    campaign = harness.run_campaign(args.suite, algorithms, args.seeds,
                                    args.budget, args.out,
                                    search=args.search, workers=args.workers)
    print(f"campaign {args.suite}: {len(campaign['runs'])} runs -> {args.out}")
    return EXIT_OK


def _cmd_profile(args):
    if not 0.0 < args.tau_acc < 1.0:
        raise UsageError("--tau-acc must lie strictly between 0 and 1")
    histories = harness.load_histories(args.in_dir)
    report = harness.profile_report(histories, args.tau_acc, args.out,
                                    render=not args.no_figure)
    for algorithm, path in report["files"].items():
        print(f"profile[{algorithm}] -> {path}")
    if report["figure"]:
        print(f"figure -> {report['figure']}")
    return EXIT_OK


def _cmd_equiv_check(args):
    try:
        p, q = rational_tau(args.tau)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    try:
        builtin_problem(args.problem)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    pair = run_equivalence_pair(lambda: builtin_problem(args.problem),
                                args.budget, args.seed, tau_num=p, tau_den=q,
                                search=args.search)
    report = equivalence_report(*pair)
    status = "identical" if report["sequences_match"] else "DIVERGED"
    print(f"trial sequences {status}: {report['n_evaluations']} evaluations, "
          f"{report['n_iterations']} iterations, "
          f"mesh rel err {report['max_mesh_rel_err']:.3g}, "
          f"frame rel err {report['max_frame_rel_err']:.3g}")
    ok = (report["sequences_match"] and report["max_mesh_rel_err"] <= 1e-12
          and report["max_frame_rel_err"] <= 1e-12)
    return EXIT_OK if ok else EXIT_SOLVER


def main(argv=None):
    parser = _build_parser()
    args = parser.parse_args(argv)
    commands = {
        "run": _cmd_run,
        "campaign": _cmd_campaign,
        "profile": _cmd_profile,
        "equiv-check": _cmd_equiv_check,
    }
    try:
        return commands[args.command](args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        parser.print_usage(sys.stderr)
        return EXIT_USAGE
    except Exception as exc:  # solver-level failure
        print(f"solver error: {exc}", file=sys.stderr)
        return EXIT_SOLVER


if __name__ == "__main__":
    sys.exit(main())
