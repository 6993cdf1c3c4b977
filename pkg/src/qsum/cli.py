"""``qsum`` command line: verify, compute, search, explore-gcd."""

from __future__ import annotations

import argparse
import itertools
import json
import os
import random
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from typing import Callable, Iterable, Sequence

from . import __version__, andrews, conjectures, numeric, qcore, schmidt, sums
from .checks import CheckResult, Report, counterexample, skipped, verified
from .exact import LaurentPoly, NotDivisible

EXIT_OK, EXIT_COUNTEREXAMPLE, EXIT_USAGE = 0, 1, 2

SUITE_IDS = (
    "thm1", "thm2-positivity", "lemma21", "duality", "qdixon", "qpfaff", "m3",
    "andrews", "andrews-limit", "schmidt-c", "zud-t", "t-closed", "t-multisum",
    "legendre", "rebino", "cor43", "cor44", "cor46", "cor47", "cor246", "cor248",
    "conj51", "conj52", "conj53", "conj54",
)
OBJECT_IDS = ("S", "alt-sum", "qbinom", "t", "c", "alpha", "beta", "gamma", "calkin")

# Grid defaults when a flag is not given.
DEFAULTS: dict[str, dict[str, str]] = {
    "thm1": {"m": "3..4", "n": "1..3"},
    "thm2-positivity": {"m": "1..4", "n": "1..3"},
    "lemma21": {"m": "3..4", "n": "1..3"},
    "duality": {"m": "1..4", "n": "1..3"},
    "qdixon": {"n": "1..6"},
    "qpfaff": {"n": "1..4"},
    "m3": {"n": "1..4"},
    "andrews": {"m": "1..2", "N": "0..2", "exps": "-2..2"},
    "andrews-limit": {"m": "2..3", "N": "0..3", "n": "1..3"},
    "schmidt-c": {"n": "0..6", "r": "1..4"},
    "zud-t": {"n": "0..6", "r": "2..4"},
    "t-closed": {"n": "0..8", "r": "2..3"},
    "t-multisum": {"n": "0..5", "r": "4..6"},
    "legendre": {"n": "0..5"},
    "rebino": {"m": "1..3", "n": "1..4"},
    "conj53": {"n": "1..20", "m": "1..3"},
    "conj54": {"n": "1..40"},
}
for _name in numeric.SUITES:
    DEFAULTS[_name] = {"n": "1..40" if _name.startswith("conj") else "1..20"}


class UsageError(ValueError):
    pass


def parse_range(text: str | None) -> list[int]:
    """``"a..b"`` (inclusive), ``"a,b,c"`` or a single integer."""
    if text is None:
        return []
    out: list[int] = []
    try:
        for part in text.split(","):
            part = part.strip()
            if ".." in part:
                lo, hi = part.split("..", 1)
                lo_i, hi_i = int(lo), int(hi)
                if hi_i < lo_i:
                    raise UsageError(f"empty range {part!r}")
                out.extend(range(lo_i, hi_i + 1))
            elif part:
                out.append(int(part))
    except ValueError as exc:
        if isinstance(exc, UsageError):
            raise
        raise UsageError(f"cannot parse range {text!r}") from None
    if not out:
        raise UsageError(f"empty range {text!r}")
    return out


# -- task execution -------------------------------------------------------


def _timed(task: tuple[Callable, tuple]) -> CheckResult:
    func, args = task
    start = time.perf_counter()
    result = func(*args)
    result.wall_time = time.perf_counter() - start
    return result


def run_tasks(tasks: Sequence[tuple[Callable, tuple]], workers: int) -> list[CheckResult]:
    """Results come back in task order whatever the worker count."""
    if workers <= 1 or len(tasks) < 2:
        return [_timed(t) for t in tasks]
    chunk = max(1, len(tasks) // (workers * 8))
    with ProcessPoolExecutor(workers) as pool:
        return list(pool.map(_timed, tasks, chunksize=chunk))


def _tuples(m_values: Iterable[int], n_values: Sequence[int]) -> Iterable[tuple[int, ...]]:
    for m in m_values:
        yield from itertools.product(n_values, repeat=m)


# Module-level task functions so that worker processes can unpickle them.


def _task_positivity(n, j, explore):
    res = sums.check_positivity(n, j)
    if explore and not res.ok and not 0 <= j <= len(n) - 1:
        return skipped(res.check, res.params, **{**res.witness, "scope": "j outside 0..m-1"})
    return res


def _task_lemma(n, j):
    return sums.check_lemma_rec(sums.SumSpec(n, j))


def _task_conj53(n, exps):
    return _gcd_result("conj53", conjectures.gcd_window(n, exps), None)


def _task_conj54(n, exps, residue):
    return _gcd_result("conj54", conjectures.gcd_window(n, exps, residue), residue)


def _gcd_result(name: str, rep: conjectures.GcdReport, residue) -> CheckResult:
    params = {"n": rep.n, "exponents": rep.exponents}
    if residue is not None:
        params["class"] = residue
    witness = rep.to_json()
    if not rep.divides:
        return counterexample(name, params, reason="conjectured value does not divide", **witness)
    if rep.stabilized and not rep.equal:
        return counterexample(name, params, reason="stable gcd differs", **witness)
    return verified(name, params, **witness)


def _task_suite(name, params):
    return numeric.check_suite_instance(name, params)


def build_tasks(suite: str, args: argparse.Namespace) -> list[tuple[Callable, tuple]]:
    d = DEFAULTS.get(suite, {})

    def get(flag: str, default: str | None = None) -> list[int]:
        value = getattr(args, flag, None)
        return parse_range(value if value is not None else d.get(flag, default))

    tasks: list[tuple[Callable, tuple]] = []
    if suite == "thm1":
        ms = get("m")
        if min(ms) < 3:
            raise UsageError("thm1 needs m >= 3")
        tasks = [(sums.check_thm1, (n,)) for n in _tuples(ms, get("n"))]
    elif suite == "thm2-positivity":
        for n in _tuples(get("m"), get("n")):
            js = parse_range(args.j) if args.j else range(len(n))
            for j in js:
                if not 0 <= j <= len(n) - 1 and not args.explore:
                    raise UsageError(f"j={j} is outside 0..m-1; pass --explore")
                tasks.append((_task_positivity, (n, j, args.explore)))
    elif suite == "lemma21":
        for n in _tuples(get("m"), get("n")):
            js = parse_range(args.j) if args.j else range(-2, len(n) + 1)
            tasks.extend((_task_lemma, (n, j)) for j in js)
    elif suite == "duality":
        tasks = [(sums.check_duality, (n,)) for n in _tuples(get("m"), get("n"))]
    elif suite == "qdixon":
        tasks = [(sums.check_qdixon, t) for t in itertools.product(get("n"), repeat=3)]
    elif suite == "qpfaff":
        for n1, n2, n3 in itertools.product(get("n"), repeat=3):
            lim = min(n1, n2, n3)
            ks = parse_range(args.k) if args.k else range(-lim, lim + 1)
            tasks.extend((sums.check_qpfaff, (n1, n2, n3, k)) for k in ks)
    elif suite == "m3":
        for t in itertools.product(get("n"), repeat=3):
            js = parse_range(args.j) if args.j else range(3)
            tasks.extend((sums.check_m3, t + (j,)) for j in js)
    elif suite == "andrews":
        tasks = _andrews_tasks(args, get)
    elif suite == "andrews-limit":
        for m in get("m"):
            for N in get("N"):
                for n in itertools.product(get("n"), repeat=m):
                    tasks.append((andrews.andrews_limit_check, (m, N, n)))
    elif suite == "schmidt-c":
        tasks = [(schmidt.check_c_routes, (n, r)) for r in get("r") for n in get("n")]
    elif suite in ("zud-t", "t-closed", "t-multisum"):
        func = {"zud-t": schmidt.check_zud, "t-closed": schmidt.check_t_closed,
                "t-multisum": schmidt.check_t_multisum}[suite]
        rs = get("r")
        if suite == "t-closed" and not set(rs) <= {2, 3}:
            raise UsageError("t-closed needs r in {2, 3}")
        if suite == "t-multisum" and min(rs) < 4:
            raise UsageError("t-multisum needs r >= 4")
        if suite == "zud-t" and min(rs) < 2:
            raise UsageError("zud-t needs r >= 2")
        for r in rs:
            for n in get("n"):
                js = [j for j in parse_range(args.j) if 0 <= j <= n] if args.j else range(n + 1)
                tasks.extend((func, (n, j, r)) for j in js)
    elif suite == "legendre":
        tasks = [(schmidt.check_legendre, (n, args.seed)) for n in get("n")]
    elif suite == "rebino":
        r_values = parse_range(args.r) if args.r else [None]
        for n in _tuples(get("m"), get("n")):
            for r in r_values:
                tasks.append((numeric.check_rebino, (n, None if r is None else (r,) * len(n))))
    elif suite in numeric.SUITES:
        ns = set(get("n"))
        for params in numeric.suite_instances(suite, max(ns), args.exp_sum):
            sizes = params[: len(params) - _exponent_count(suite)]
            if all(x in ns for x in sizes):
                tasks.append((_task_suite, (suite, params)))
    elif suite == "conj53":
        width = args.r_window
        for m in get("m"):
            if m < 1:
                raise UsageError("conj53 needs m >= 1")
            tasks.extend((_task_conj53, (n, list(range(m, m + width)))) for n in get("n"))
    elif suite == "conj54":
        classes = parse_range(args.r) if args.r else [0, 1, 2]
        if not set(classes) <= {0, 1, 2}:
            raise UsageError("conj54 classes (--r) must be among 0,1,2")
        for n in get("n"):
            for c in classes:
                tasks.append((_task_conj54, (n, conjectures.residue_window(c, args.r_window), c)))
    else:
        raise UsageError(f"unknown suite {suite!r}")
    if any(x < 0 for x in get("n", "1")) and suite not in ("andrews",):
        raise UsageError("--n values must be nonnegative")
    return tasks


def _exponent_count(suite: str) -> int:
    return len(numeric.SUITES[suite].params) - {"cor43": 2, "cor44": 3}.get(suite, 1)


def _andrews_tasks(args, get) -> list[tuple[Callable, tuple]]:
    method = args.method
    tasks: list[tuple[Callable, tuple]] = []
    if args.r:
        for r in parse_range(args.r):
            for n in get("n", "1..5"):
                for j in range(n + 1):
                    p = andrews.schmidt_specialization(n, j, r)
                    tasks.append((andrews.andrews_check, (p, method)))
        return tasks
    exps = get("exps")
    rng = random.Random(args.seed)
    for m in get("m"):
        for N in get("N"):
            for combo in itertools.product(exps, repeat=2 * m + 1):
                if args.sample < 1.0 and rng.random() >= args.sample:
                    continue
                p = andrews.AndrewsParams(m, N, combo[0], combo[1:m + 1], combo[m + 1:])
                tasks.append((andrews.andrews_check, (p, method)))
    return tasks


# -- subcommands ----------------------------------------------------------


def _config(args: argparse.Namespace) -> dict:
    skip = {"func", "format", "workers", "cache"}
    return {k: v for k, v in sorted(vars(args).items()) if k not in skip and v is not None}


def _emit_report(report: Report, fmt: str) -> None:
    if fmt == "json":
        print(report.dumps())
        return
    for rec in report.records:
        params = " ".join(f"{k}={_fmt_param(v)}" for k, v in rec.params.items())
        line = f"{rec.status:<14} {rec.check} {params}"
        if rec.status != "verified" and rec.witness:
            line += "  " + json.dumps(rec.to_json()["witness"], sort_keys=True)
        print(line)
    s = report.summary
    print(f"total {s['total']}: {s['verified']} verified, "
          f"{s['counterexample']} counterexample, {s['skipped']} skipped")


def _fmt_param(v) -> str:
    if isinstance(v, (list, tuple)):
        return ",".join(map(str, v))
    return str(v)


def cmd_verify(args: argparse.Namespace) -> int:
    suite = args.suite
    if suite not in SUITE_IDS:
        raise UsageError(f"unknown suite {suite!r}; choose from {', '.join(SUITE_IDS)}")
    tasks = build_tasks(suite, args)
    report = Report(__version__, {"suite": suite, **_config(args)})
    report.records = run_tasks(tasks, args.workers)
    _emit_report(report, args.format)
    return report.exit_code()


def _need(args, *flags):
    for f in flags:
        if getattr(args, f) is None:
            raise UsageError(f"--{f} is required")


def _single(args, flag) -> int:
    values = parse_range(getattr(args, flag))
    if len(values) != 1:
        raise UsageError(f"--{flag} takes a single integer here")
    return values[0]


def compute_object(obj: str, args: argparse.Namespace):
    if obj in ("S", "alt-sum"):
        _need(args, "n")
        n = parse_range(args.n)
        j = _single(args, "j") if args.j is not None else 0
        spec = sums.SumSpec(tuple(n), j)
        if any(x < 1 for x in n):
            raise UsageError("entries of --n must be positive")
        return sums.S(spec) if obj == "S" else sums.alt_sum(spec)
    if obj == "qbinom":
        _need(args, "n", "k")
        return qcore.qbinom(_single(args, "n"), _single(args, "k"))
    if obj == "t":
        _need(args, "n", "j", "r")
        return schmidt.t_direct(schmidt.TCParams(_single(args, "n"), _single(args, "j"),
                                                 _single(args, "r")))
    if obj == "c":
        _need(args, "n", "r")
        n, r = _single(args, "n"), _single(args, "r")
        if n < 0 or r < 1:
            raise UsageError("need n >= 0 and r >= 1")
        return schmidt.c_triangular(n, r)[n]
    if obj in ("alpha", "beta", "gamma"):
        value = args.value if args.value is not None else args.n
        if value is None:
            raise UsageError(f"compute {obj} needs a value")
        values = parse_range(value)
        if len(values) != 1:
            raise UsageError(f"compute {obj} takes a single integer")
        n = values[0]
        if n < 0:
            raise UsageError("value must be nonnegative")
        return conjectures.digit_stats(obj, n)
    if obj == "calkin":
        _need(args, "n", "m")
        return numeric.calkin_sum(_single(args, "n"), _single(args, "m"))
    raise UsageError(f"unknown object {obj!r}; choose from {', '.join(OBJECT_IDS)}")


def cmd_compute(args: argparse.Namespace) -> int:
    try:
        value = compute_object(args.object, args)
    except NotDivisible as exc:
        print(f"not an integer: remainder {exc.remainder}", file=sys.stderr)
        return EXIT_COUNTEREXAMPLE
    if args.format == "json":
        if isinstance(value, LaurentPoly):
            payload = value.to_pairs()
        elif isinstance(value, conjectures.DigitStats):
            payload = {"value": value.value, "digits": list(value.digits), "base": value.base}
        else:
            payload = str(value)
        print(json.dumps({"object": args.object, "params": _config(args), "value": payload},
                         sort_keys=True))
    elif isinstance(value, LaurentPoly):
        print(value.to_text())
    elif isinstance(value, conjectures.DigitStats):
        print(value.value)
    else:
        print(value)
    return EXIT_OK


def cmd_search(args: argparse.Namespace) -> int:
    if args.target < 0 or args.limit < 0:
        raise UsageError("target and --limit must be nonnegative")
    if args.brute:
        found = conjectures.first_with_brute(args.stat, args.target, args.limit, args.workers)
    else:
        found = conjectures.first_with(args.stat, args.target, args.limit)
    if args.format == "json":
        print(json.dumps({"stat": args.stat, "target": args.target, "limit": args.limit,
                          "n": None if found is None else str(found)}, sort_keys=True))
    else:
        print("none" if found is None else found)
    return EXIT_OK


def cmd_explore_gcd(args: argparse.Namespace) -> int:
    _need(args, "n")
    exps = parse_range(args.exps) if args.exps else None
    residues = parse_range(args.r) if args.r else [None]
    report = Report(__version__, {"command": "explore-gcd", **_config(args)})
    for n in parse_range(args.n):
        if n < 1:
            raise UsageError("--n must be positive")
        for res in residues:
            if exps is not None:
                window = exps
            elif res is None:
                window = list(range(1, args.r_window + 1))
            else:
                window = conjectures.residue_window(res, args.r_window)
            start = time.perf_counter()
            try:
                rep = conjectures.gcd_window(n, window, res)
            except ValueError as exc:
                raise UsageError(str(exc)) from None
            rec = _gcd_result("gcd", rep, res)
            rec.wall_time = time.perf_counter() - start
            report.records.append(rec)
    _emit_report(report, args.format)
    return report.exit_code()


# -- argument parsing -----------------------------------------------------


def _default_workers() -> int:
    try:
        return max(1, int(os.environ.get("QSUM_WORKERS", "1")))
    except ValueError:
        return 1


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("text", "json"), default="text")
    common.add_argument("--workers", type=int, default=_default_workers(),
                        help="worker processes (default: $QSUM_WORKERS or 1)")
    common.add_argument("--cache", help="q-binomial cache file (read, then rewritten)")

    grid = argparse.ArgumentParser(add_help=False)
    for flag in ("n", "m", "j", "r", "k", "N"):
        grid.add_argument(f"--{flag}", help="integer, a..b or comma list")
    grid.add_argument("--exps", help="exponent grid for andrews / explicit window for explore-gcd"
                                     " (use --exps=-4..4 for negative starts)")
    grid.add_argument("--r-window", type=int, default=6, help="exponents per gcd window")

    parser = argparse.ArgumentParser(prog="qsum", description=__doc__)
    parser.add_argument("--version", action="version", version=f"qsum {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    v = sub.add_parser("verify", parents=[common, grid], help="run a verification suite")
    v.add_argument("suite", help=", ".join(SUITE_IDS))
    v.add_argument("--explore", action="store_true",
                   help="allow parameters outside a theorem's range; failures there are skipped")
    v.add_argument("--method", choices=("height", "points"), default="height",
                   help="andrews certificate")
    v.add_argument("--sample", type=float, default=1.0, help="andrews grid sampling fraction")
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--exp-sum", type=int, default=7, help="max exponent sum for divisibility suites")
    v.set_defaults(func=cmd_verify)

    c = sub.add_parser("compute", parents=[common, grid], help="compute one object")
    c.add_argument("object", help=", ".join(OBJECT_IDS))
    c.add_argument("value", nargs="?", help="argument for alpha/beta/gamma")
    c.set_defaults(func=cmd_compute)

    s = sub.add_parser("search", parents=[common], help="least n with a digit statistic")
    s.add_argument("stat", choices=("alpha", "beta", "gamma"))
    s.add_argument("target", type=int)
    s.add_argument("--limit", type=int, required=True)
    s.add_argument("--brute", action="store_true", help="vectorized scan instead of digit search")
    s.set_defaults(func=cmd_search)

    g = sub.add_parser("explore-gcd", parents=[common, grid],
                       help="gcd of alternating central binomial power sums")
    g.set_defaults(func=cmd_explore_gcd)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.workers < 1:
        print("qsum: --workers must be positive", file=sys.stderr)
        return EXIT_USAGE
    cache = getattr(args, "cache", None)
    try:
        if cache and os.path.exists(cache):
            qcore.load_cache(cache)
        code = args.func(args)
        if cache:
            qcore.save_cache(cache)
        return code
    except (UsageError, ValueError) as exc:
        print(f"qsum: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
