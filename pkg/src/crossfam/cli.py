"""Command-line front end.

Exit codes: 0 success / property holds, 1 property violated, 2 usage or
guard error. Large integers are written to JSON as decimal strings.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import __version__
from .bounds import bound_for, n0_threshold, threshold_applicable
from .compression import compress_pair_to_fixpoint, compress_to_fixpoint, violating_index
from .intersection import first_cross_violation, first_t_violation
from .search import MODES, SearchGuardError, resolve_threads, verify_theorem
from .setcore import Family, FamilyParseError, Params, read_family, write_family
from .verify import SUITES, SuiteGuardError, parse_grid, replay_counterexample, run_suite


class UsageError(Exception):
    pass


def _int_list(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def _emit(payload: dict, path: str | None) -> None:
    text = json.dumps(payload, indent=2)
    print(text)
    if path:
        Path(path).write_text(text + "\n")


def _read(path: str, n: int) -> Family:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None
    try:
        return read_family(text, n)
    except FamilyParseError as exc:
        raise UsageError(f"{path}: {exc}") from None


def _params(args) -> Params:
    if args.k_uniformities:
        return Params(args.n, args.t, tuple(args.k_uniformities))
    if args.r is None or args.s is None:
        raise UsageError("give --r and --s, or --k-uniformities")
    return Params.pair(args.n, args.r, args.s, args.t)


def cmd_n0(args) -> int:
    value = n0_threshold(args.r, args.s, args.t)
    if args.json:
        _emit({"r": args.r, "s": args.s, "t": args.t, "n0": str(value), "version": __version__}, None)
    else:
        print(value)
    return 0


def cmd_bound(args) -> int:
    params = _params(args)
    r, s = params.uniformities[-2:]
    out = {
        "params": params.to_dict(),
        "bound": str(bound_for(params)),
        "n0": str(n0_threshold(r, s, params.t)),
        "threshold_applicable": threshold_applicable(params),
        "version": __version__,
    }
    if args.json:
        _emit(out, None)
    else:
        print(f"bound {out['bound']}")
        print(f"n0 {out['n0']}")
        print(f"applicable={'true' if out['threshold_applicable'] else 'false'}")
    return 0


def _write_out(text: str, path: str | None) -> None:
    if path:
        Path(path).write_text(text)
    else:
        sys.stdout.write(text)


def cmd_compress(args) -> int:
    a = _read(args.input, args.n)
    if args.pair:
        b = _read(args.pair, args.n)
        ca, cb, trace = compress_pair_to_fixpoint(a, b)
        if args.output or args.pair_output:
            _write_out(write_family(ca), args.output)
            _write_out(write_family(cb), args.pair_output)
        else:
            sys.stdout.write("# family A\n" + write_family(ca) + "# family B\n" + write_family(cb))
        if args.t is not None:
            before = first_cross_violation(a, b, args.t) is None
            after = first_cross_violation(ca, cb, args.t) is None
            print(f"cross-{args.t}-intersecting: before={before} after={after}", file=sys.stderr)
    else:
        ca, trace = compress_to_fixpoint(a)
        _write_out(write_family(ca), args.output)
    if args.trace:
        Path(args.trace).write_text(json.dumps(trace.to_dict(), indent=2) + "\n")
    return 0


def cmd_check(args) -> int:
    a = _read(args.input, args.n)
    verdict: dict = {"mode": args.mode, "n": args.n, "t": args.t, "version": __version__}
    if args.mode == "t-intersecting":
        if args.t is None:
            raise UsageError("--t is required for t-intersecting checks")
        bad = first_t_violation(a, args.t)
        verdict["holds"] = bad is None
        verdict["witness"] = [list(x.members) for x in bad] if bad else None
    elif args.mode == "cross":
        if args.t is None or not args.pair:
            raise UsageError("cross checks need --t and --pair")
        b = _read(args.pair, args.n)
        bad = first_cross_violation(a, b, args.t)
        verdict["holds"] = bad is None
        verdict["witness"] = [list(x.members) for x in bad] if bad else None
    else:
        fams = [a] + ([_read(args.pair, args.n)] if args.pair else [])
        found = [violating_index(f) for f in fams]
        verdict["holds"] = all(idx is None for idx in found)
        verdict["violating_index"] = [list(idx.as_tuple()) if idx else None for idx in found]
    _emit(verdict, None)
    return 0 if verdict["holds"] else 1


def _search_payload(verdict, all_optima: bool, seed) -> dict:
    rep = verdict.report
    witnesses = rep.witnesses if all_optima else rep.witnesses[:1]
    return {
        "params": verdict.params.to_dict(),
        "mode": verdict.mode,
        "optimum": str(verdict.optimum),
        "bound": str(verdict.bound),
        "witness_count": rep.witness_count,
        "witnesses": [[f.to_lists() for f in w] for w in witnesses],
        "uniqueness": verdict.uniqueness,
        "bound_holds": verdict.bound_holds,
        "bound_tight": verdict.bound_tight,
        "threshold_applicable": verdict.threshold_applicable,
        "nodes_explored": rep.nodes_explored,
        "seed": seed,
        "version": __version__,
    }


def cmd_search(args) -> int:
    params = _params(args)
    verdict = verify_theorem(params, args.mode, args.guard, resolve_threads(args.threads))
    _emit(_search_payload(verdict, args.all_optima, args.seed), args.json)
    return 0


def cmd_verify(args) -> int:
    if args.replay:
        record = json.loads(Path(args.replay).read_text())
        record = record.get("counterexample") or record
        holds = replay_counterexample(record)
        _emit({"suite": record["suite"], "holds": holds, "version": __version__}, args.json)
        return 0 if holds else 1
    if args.suite:
        grid = parse_grid(args.suite, args.grid)
        report = run_suite(args.suite, grid, args.seed, resolve_threads(args.threads))
        payload = report.to_dict()
        payload["version"] = __version__
        _emit(payload, args.json)
        return 0 if report.ok else 1
    if args.n is None or args.t is None:
        raise UsageError("verify needs --suite, --replay, or an instance (--n --t and --r/--s or --k-uniformities)")
    params = _params(args)
    verdict = verify_theorem(params, args.mode, args.guard, resolve_threads(args.threads))
    _emit(_search_payload(verdict, args.all_optima, args.seed), args.json)
    return 0 if verdict.passed else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="crossfam", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    def instance_flags(p, required: bool):
        p.add_argument("--n", type=int, required=required)
        p.add_argument("--r", type=int)
        p.add_argument("--s", type=int)
        p.add_argument("--t", type=int, required=required)
        p.add_argument("--k-uniformities", type=_int_list, metavar="R1,R2,...")

    p = sub.add_parser("n0", help="threshold n0(r, s, t)")
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--s", type=int, required=True)
    p.add_argument("--t", type=int, required=True)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_n0)

    p = sub.add_parser("bound", help="product bound and threshold applicability")
    instance_flags(p, True)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_bound)

    p = sub.add_parser("compress", help="compress a family (or a pair) to a left-compressed fixpoint")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--input", required=True)
    p.add_argument("--pair")
    p.add_argument("--t", type=int)
    p.add_argument("--trace")
    p.add_argument("--output", "-o")
    p.add_argument("--pair-output")
    p.set_defaults(func=cmd_compress)

    p = sub.add_parser("check", help="test t-intersection, cross-t-intersection or compressedness")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--t", type=int)
    p.add_argument("--mode", choices=("t-intersecting", "cross", "compressed"), required=True)
    p.add_argument("--input", required=True)
    p.add_argument("--pair")
    p.set_defaults(func=cmd_check)

    for name, func, required in (("search", cmd_search, True), ("verify", cmd_verify, False)):
        p = sub.add_parser(name, help="exact optimum search" if name == "search" else "verification suites")
        instance_flags(p, required)
        p.add_argument("--mode", choices=MODES, default="closure" if name == "search" else "brute")
        p.add_argument("--all-optima", action="store_true")
        p.add_argument("--guard", type=int)
        p.add_argument("--threads", type=int)
        p.add_argument("--seed", type=int, default=0 if name == "verify" else None)
        p.add_argument("--json", metavar="OUT")
        if name == "verify":
            p.add_argument("--suite", choices=SUITES)
            p.add_argument("--grid", default="default-tiny")
            p.add_argument("--replay", metavar="RECORD.json")
        p.set_defaults(func=func)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, SearchGuardError, SuiteGuardError, ValueError) as exc:
        print(f"crossfam {args.command}: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
