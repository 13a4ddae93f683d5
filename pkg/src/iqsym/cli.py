"""Command line front end: build rule caches, run identity checks and
suites, dump named elements in the text format.

Exit codes: 0 all pass, 1 any fail, 2 truncated without fail, 3 usage or
configuration error.
"""

from __future__ import annotations

import argparse
import sys

from .algebra import CompletionError, element_to_str
from .verify import CHECKS, CheckSpec, Session, run_check, run_suite, suite_specs

_INDEX_FLAGS = ("i", "j", "k", "l", "k1", "k2", "m", "n", "level", "dmax", "seed")
_STR_FLAGS = ("which", "side", "form", "variant", "route")


def _add_common(p):
    p.add_argument("--r", type=int, default=1, help="rank (half the cycle length)")
    p.add_argument("--degree", type=int, default=None, help="truncation degree")
    p.add_argument("--sign", choices=("even", "odd"), default="even")
    p.add_argument("--complete-to", type=int, default=None, help="confluence depth")
    p.add_argument("--cache", default=None, help="rule cache directory")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--report", default=None, help="write one JSON record per check")


def _session(args) -> Session:
    if args.r < 1:
        raise SystemExit(3)
    return Session(
        args.r,
        sign=args.sign,
        degree=args.degree,
        complete_to=args.complete_to,
        cache_dir=args.cache,
    )


def _write_report(path, reports):
    if not path:
        return
    with open(path, "w") as f:
        for rep in reports:
            f.write(rep.to_record() + "\n")


def _exit_code(reports) -> int:
    if any(r.status == "fail" for r in reports):
        return 1
    if any(r.status == "truncated" for r in reports):
        return 2
    return 0


def cmd_build(args) -> int:
    try:
        sess = _session(args)
    except CompletionError as e:
        print(f"certificate failed: {e}", file=sys.stderr)
        return 1
    rs = sess.rs
    counts = rs.count_irreducible(rs.confluent_upto)
    print(f"r={sess.r} confluent through degree {rs.confluent_upto} (trunc {rs.D})")
    for d, c in enumerate(counts, start=1):
        print(f"  degree {d}: {c} irreducible words")
    return 0


def cmd_check(args) -> int:
    if args.id not in CHECKS:
        print(f"unknown check id {args.id!r}", file=sys.stderr)
        print("known ids: " + ", ".join(sorted(CHECKS)), file=sys.stderr)
        return 3
    params = {}
    for name in _INDEX_FLAGS + _STR_FLAGS:
        val = getattr(args, name, None)
        if val is not None:
            params[name] = val
    sess = _session(args)
    try:
        rep = run_check(sess, CheckSpec(args.id, params))
    except TypeError as e:
        print(f"bad parameters for {args.id}: {e}", file=sys.stderr)
        return 3
    _print_report(rep)
    _write_report(args.report, [rep])
    return _exit_code([rep])


def cmd_suite(args) -> int:
    sess = _session(args)
    ids = args.only.split(",") if args.only else None
    reports = run_suite(
        sess, args.level, ids=ids, jobs=args.jobs, progress=_print_report
    )
    npass = sum(r.status == "pass" for r in reports)
    print(
        f"suite {args.level} r={sess.r} sign={sess.sign}: "
        f"{npass}/{len(reports)} pass, "
        f"{sum(r.status == 'fail' for r in reports)} fail, "
        f"{sum(r.status == 'truncated' for r in reports)} truncated"
    )
    _write_report(args.report, reports)
    return _exit_code(reports)


def cmd_dump(args) -> int:
    sess = _session(args)
    try:
        el = sess.tab.element(args.name)
    except ValueError as e:
        print(str(e), file=sys.stderr)
        return 3
    print(element_to_str(sess.rs, el))
    return 0


def _print_report(rep):
    line = f"{rep.status:9s} {rep.id} {rep.params} ({rep.wall_time_ms} ms)"
    if rep.status != "pass" and rep.residual_text:
        line += f"  residual: {rep.residual_text}"
    print(line, flush=True)


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(prog="iqsym")
    sub = ap.add_subparsers(dest="cmd", required=True)

    p = sub.add_parser("build", help="complete and certify a rewrite system")
    _add_common(p)
    p.set_defaults(fn=cmd_build)

    p = sub.add_parser("check", help="run one named check")
    _add_common(p)
    p.add_argument("--id", required=True)
    for name in _INDEX_FLAGS:
        p.add_argument(f"--{name}", type=int, default=None)
    for name in _STR_FLAGS:
        p.add_argument(f"--{name}", default=None)
    p.set_defaults(fn=cmd_check)

    p = sub.add_parser("suite", help="run a check suite")
    _add_common(p)
    p.add_argument("--level", choices=("quick", "full"), default="quick")
    p.add_argument("--only", default=None, help="comma-separated id filter")
    p.set_defaults(fn=cmd_suite)

    p = sub.add_parser("dump", help="print a named element")
    _add_common(p)
    p.add_argument("name", help="B[i,k], Theta[i,n], D[i,n], H[i,m], TB0[m], C")
    p.set_defaults(fn=cmd_dump)

    args = ap.parse_args(argv)
    try:
        return args.fn(args)
    except KeyboardInterrupt:
        return 3


if __name__ == "__main__":
    sys.exit(main())
