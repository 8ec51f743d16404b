"""Command-line entry point: ``multimagic <subcommand> [options]``.

Every subcommand prints one JSON report (or writes it to ``--out``) that
embeds the resolved configuration.  Exit status: 0 success, 1 negative
mathematical verdict, 2 usage or input error, 3 budget exhausted.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import counting, domination, exactlinalg, magicsys, partition, solubility, squares
from .errors import BudgetExceeded, DomainError, FormatError, InvalidIndexError, RankDeficientError

EXIT_OK, EXIT_NEGATIVE, EXIT_USAGE, EXIT_BUDGET = 0, 1, 2, 3


def _load_matrix(path: str) -> exactlinalg.IntMatrix:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise FormatError("matrix", f"cannot read {path}: {exc.strerror}") from None
    return exactlinalg.IntMatrix.loads(text)


def _load_square(path: str) -> magicsys.Square:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise FormatError("square", f"cannot read {path}: {exc.strerror}") from None
    return magicsys.Square.from_text(text)


def _int_list(text: str) -> list[int]:
    try:
        return [int(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def _scan_config(args) -> exactlinalg.ScanConfig:
    return exactlinalg.ScanConfig(
        budget=args.budget, samples=args.samples, seed=args.seed, threads=args.threads
    )


# -- subcommands: each returns (report dict, exit code) -----------------------------


def cmd_construct(args):
    if args.ordering == "row-major":
        order = magicsys.row_major(args.order)
    elif args.ordering == "column-major":
        order = magicsys.column_major(args.order)
    else:
        order = magicsys.random_ordering(args.order, args.seed)
    system = magicsys.MagicSystem(args.order, ordering=order)
    C = magicsys.magic_matrix(system)
    report = C.to_json_dict()
    report["ordering"] = [list(c) for c in system.ordering]
    return report, EXIT_OK


def cmd_rank(args):
    C = _load_matrix(args.matrix)
    return {"rows": C.rows, "cols": C.cols, "rank": exactlinalg.rank(C)}, EXIT_OK


def cmd_profile(args):
    C = _load_matrix(args.matrix)
    max_card = C.cols if args.max_card is None else args.max_card
    prof = exactlinalg.rank_profile(C, max_card, _scan_config(args))
    return {"profile": {str(m): e.to_json_dict() for m, e in prof.items()}}, EXIT_OK


def _verdict_exit(v: domination.Verdict) -> int:
    return {"proven": EXIT_OK, "refuted": EXIT_NEGATIVE, "inconclusive": EXIT_BUDGET}[v.status]


def cmd_dominates(args):
    C = _load_matrix(args.matrix)
    if args.function == "F":
        f = domination.ThresholdFunction.F(C.rows, C.cols)
    elif args.function == "low":
        f = domination.ThresholdFunction.low(C.rows, C.cols)
    else:
        f = lambda x: x  # noqa: E731
    v = domination.dominates(C, f, _scan_config(args))
    return v.to_json_dict(), _verdict_exit(v)


def cmd_rank_condition(args):
    v = domination.check_rank_condition(args.order, _scan_config(args))
    report = v.to_json_dict()
    report["piecewise_equivalence"] = domination.piecewise_equivalence(args.order)
    return report, _verdict_exit(v)


def cmd_partition(args):
    C = _load_matrix(args.matrix)
    n = args.blocks
    if n is None:
        n = partition.largest_partitionable(C)
        if n == 0:
            return {"blocks": None, "largest": 0}, EXIT_NEGATIVE
    try:
        p = partition.find_basis_partition(C, n)
    except RankDeficientError as exc:
        return {"blocks": None, "error": str(exc)}, EXIT_NEGATIVE
    if p is None:
        return {"blocks": None, "requested": n}, EXIT_NEGATIVE
    report = p.to_json_dict()
    report["verified"] = partition.verify_partition(C, p)
    return report, EXIT_OK


def _system(args) -> counting.DiagonalSystem:
    return counting.DiagonalSystem(_load_matrix(args.matrix), tuple(args.exponents))


def cmd_count(args):
    rep = counting.count_solutions(_system(args), args.height, counting.Filter.parse(args.filter))
    return rep.to_json_dict(), EXIT_OK


def cmd_fit(args):
    sysm = _system(args)
    fit = counting.exponent_fit(sysm, args.heights, counting.Filter.parse(args.filter))
    report = fit.to_json_dict()
    if args.degree is not None:
        report["expected_exponent"] = str(counting.expected_exponent(sysm.r, sysm.s, K=args.degree))
    return report, EXIT_OK


def cmd_verify(args):
    rep = squares.verify_square(_load_square(args.square), args.degree)
    return rep.to_json_dict(), EXIT_OK if rep.magic else EXIT_NEGATIVE


def cmd_search(args):
    found = squares.brute_force_squares(
        args.order, args.degree, range(args.min, args.max + 1), args.distinct, args.budget
    )
    return {"count": len(found), "squares": [[list(r) for r in Z.entries] for Z in found]}, EXIT_OK


def cmd_catalog(args):
    order, who = magicsys.best_known_order(args.degree)
    return {"order": str(order) if order > 2**53 else order, "attribution": who}, EXIT_OK


def cmd_thresholds(args):
    report = {}
    if args.degree is not None:
        report["multimagic"] = magicsys.multimagic_threshold(args.degree)
    if args.power is not None:
        report["kth_power"] = magicsys.kth_power_threshold(args.power)
    if not report:
        raise DomainError("give --degree and/or --power")
    return report, EXIT_OK


def cmd_solubility(args):
    seeds = []
    if args.matrix is not None:
        sysm = _system(args)
    elif args.order is not None:
        ms = magicsys.MagicSystem(args.order, tuple(args.exponents))
        sysm = counting.DiagonalSystem(magicsys.magic_matrix(ms), ms.exponents)
        w = magicsys.latin_witness(ms, [v * v + 1 for v in range(args.order)])
        if w is not None:
            seeds.append(w)
    else:
        raise DomainError("give --matrix or --order")
    rep = solubility.solubility_report(
        sysm, args.prime_bound, seed=args.seed, attempts=args.attempts, seeds=seeds
    )
    return rep.to_json_dict(), EXIT_OK if rep.verdict == "evidence-positive" else EXIT_NEGATIVE


# -- parser --------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="multimagic", description=__doc__.splitlines()[0])
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", help="write the JSON report here instead of stdout")
    common.add_argument("--threads", type=int, default=1, help="worker threads for subset scans")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, func, help):
        p = sub.add_parser(name, help=help, parents=[common])
        p.set_defaults(func=func)
        return p

    def scan_opts(p):
        p.add_argument("--budget", type=int, default=2**20, help="rank evaluations for exhaustive scans")
        p.add_argument("--samples", type=int, default=100_000, help="random subsets per sampled size")
        p.add_argument("--seed", type=int, default=0)

    p = add("construct", cmd_construct, "emit the order-N magic coefficient matrix")
    p.add_argument("--order", type=int, required=True)
    p.add_argument("--ordering", choices=["row-major", "column-major", "random"], default="row-major")
    p.add_argument("--seed", type=int, default=0)

    p = add("rank", cmd_rank, "exact rank of a matrix")
    p.add_argument("--matrix", required=True)

    p = add("profile", cmd_profile, "minimum rank per column-subset size")
    p.add_argument("--matrix", required=True)
    p.add_argument("--max-card", type=int)
    scan_opts(p)

    p = add("dominates", cmd_dominates, "check rank(C_J) >= min(f(|J|), r)")
    p.add_argument("--matrix", required=True)
    p.add_argument("--function", choices=["F", "low", "identity"], default="F")
    scan_opts(p)

    p = add("rank-condition", cmd_rank_condition, "check the piecewise rank bound for C_N")
    p.add_argument("--order", type=int, required=True)
    scan_opts(p)

    p = add("partition", cmd_partition, "split columns into disjoint bases")
    p.add_argument("--matrix", required=True)
    p.add_argument("--blocks", type=int)

    for name, func, help in (
        ("count", cmd_count, "count bounded solutions"),
        ("fit", cmd_fit, "fit the growth exponent of solution counts"),
    ):
        p = add(name, func, help)
        p.add_argument("--matrix", required=True)
        p.add_argument("--exponents", type=_int_list, default=[1])
        p.add_argument("--filter", default="none", help="none | distinct | smooth:Q | prime, joined by '+'")
        if name == "count":
            p.add_argument("--height", type=int, required=True)
        else:
            p.add_argument("--heights", type=_int_list, default=[25, 50, 100, 200])
            p.add_argument("--degree", type=int, help="report s - rK(K+1)/2 for comparison")

    p = add("verify", cmd_verify, "check a square file for (multi)magic properties")
    p.add_argument("--square", required=True)
    p.add_argument("--degree", type=int, default=1)

    p = add("search", cmd_search, "exhaustively search small squares")
    p.add_argument("--order", type=int, required=True)
    p.add_argument("--degree", type=int, default=1)
    p.add_argument("--min", type=int, required=True)
    p.add_argument("--max", type=int, required=True)
    p.add_argument("--distinct", action="store_true")
    p.add_argument("--budget", type=int, default=10**7)

    p = add("catalog", cmd_catalog, "best known order of a distinct-entry K-multimagic square")
    p.add_argument("--degree", type=int, required=True)

    p = add("thresholds", cmd_thresholds, "smallest orders above the existence thresholds")
    p.add_argument("--degree", type=int)
    p.add_argument("--power", type=int)

    p = add("solubility", cmd_solubility, "search for nonsingular real and p-adic solutions")
    p.add_argument("--matrix")
    p.add_argument("--order", type=int, help="use the order-N magic system instead of --matrix")
    p.add_argument("--exponents", type=_int_list, default=[1, 2])
    p.add_argument("--prime-bound", type=int, default=20)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--attempts", type=int, default=100_000)
    return parser


def _config(args) -> dict:
    return {k: v for k, v in vars(args).items() if k != "func"}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.threads < 1:
        parser.error("--threads must be positive")
    try:
        report, code = args.func(args)
    except (FormatError, DomainError, InvalidIndexError) as exc:
        print(f"multimagic {args.command}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except BudgetExceeded as exc:
        report = {"error": str(exc)}
        if exc.partial is not None:
            report["partial_count"] = len(exc.partial)
        code = EXIT_BUDGET
    report["config"] = _config(args)
    text = json.dumps(report, indent=1)
    if args.out:
        Path(args.out).write_text(text + "\n")
    else:
        print(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
