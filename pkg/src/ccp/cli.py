"""``ccp`` command-line interface.

Exit codes: 0 success, 1 invalid input or computation error, 2 when
``verify`` finds a violated identity.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
import time
from fractions import Fraction

from . import _kernels
from . import decomposition as dec
from . import popularity as popmod
from . import power_sums as ps
from . import simulator, verify
from . import waiting_time as wt
from .errors import CCPError
from .numerics import Backend, binomial, to_decimal_string, to_exact_string

EXIT_OK, EXIT_ERROR, EXIT_VIOLATION = 0, 1, 2


class UsageError(CCPError):
    code = "usage"


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _is_scalar(v) -> bool:
    return isinstance(v, (Fraction, float)) and not isinstance(v, bool)


def _json_value(v):
    if isinstance(v, Fraction):
        return to_exact_string(v)
    return v


def _json_rows(rows):
    out = []
    for row in rows:
        item = {}
        for key, v in row.items():
            item[key] = _json_value(v)
            if _is_scalar(v):
                item[f"{key}_decimal"] = to_decimal_string(v)
        out.append(item)
    return out


def _csv_text(rows, comment: str | None = None) -> str:
    buf = io.StringIO()
    if comment:
        buf.write(f"# {comment}\n")
    if rows:
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(list(rows[0]))
        for row in rows:
            writer.writerow([to_decimal_string(v) if _is_scalar(v) else v for v in row.values()])
    return buf.getvalue()


def _emit(args, rows, meta: dict | None = None) -> None:
    meta = meta or {}
    if args.format == "json":
        doc = {"command": args.command, **{k: _json_value(v) for k, v in meta.items()}, "rows": _json_rows(rows)}
        sys.stdout.write(json.dumps(doc, indent=2) + "\n")
    else:
        comment = " ".join(f"{k}={_json_value(v)}" for k, v in meta.items()) if args.command == "simulate" else None
        sys.stdout.write(_csv_text(rows, comment))


def load_popularity(args) -> popmod.Popularity:
    """Build the popularity named by ``--popularity FILE`` or ``--uniform N``."""
    if (args.popularity is None) == (args.uniform is None):
        raise UsageError("give exactly one of --popularity FILE or --uniform N")
    if args.uniform is not None:
        return popmod.uniform(args.uniform, args.backend or Backend.EXACT)
    return popmod.load(args.popularity, backend=args.backend, renormalize=args.renormalize)


def _require(args, *names):
    for name in names:
        if getattr(args, name) is None:
            raise UsageError(f"--{name.replace('_', '-')} is required for {args.command}")


def _k_range(args, pop):
    if args.k is not None and args.kmax is not None:
        raise UsageError("give --k or --kmax, not both")
    if args.k is not None:
        return [args.k]
    kmax = args.kmax if args.kmax is not None else wt.default_kmax(pop.n, args.c)
    return range(kmax + 1)


def cmd_distribution(args) -> int:
    pop = load_popularity(args)
    _require(args, "c")
    func = {"pdf": wt.pdf, "cdf": wt.cdf, "ccdf": wt.ccdf}[args.command]
    rows = [{"k": k, args.command: func(pop, args.c, k, args.method)} for k in _k_range(args, pop)]
    _emit(args, rows, {"n": pop.n, "c": args.c, "backend": pop.backend.value})
    return EXIT_OK


def cmd_expectation(args) -> int:
    pop = load_popularity(args)
    _require(args, "c")
    _emit(args, [{"c": args.c, "expectation": wt.expectation(pop, args.c)}], {"n": pop.n, "backend": pop.backend.value})
    return EXIT_OK


def cmd_alpha(args) -> int:
    pop = load_popularity(args)
    _require(args, "exponent")
    if args.alpha_method == "uniform":
        if not pop.is_uniform:
            raise UsageError("--alpha-method uniform needs --uniform N")
        table = dec.alpha_uniform(pop.n, args.exponent, pop.backend)
    else:
        table = dec.alpha_general(pop, args.exponent)
    us = [args.u] if args.u is not None else range(1, table.k + 1)
    rows = [{"u": u, "alpha": table[u]} for u in us]
    _emit(args, rows, {"n": table.n, "k": table.k, "provenance": table.provenance, "condition": table.condition})
    return EXIT_OK


def cmd_eta(args) -> int:
    if args.n is None:
        args.n = load_popularity(args).n
    _require(args, "exponent", "j")
    backend = Backend(args.backend or Backend.EXACT)
    rows = [{"q": q, "eta": dec.eta(args.n, args.exponent, args.j, q, backend)} for q in range(1, args.exponent + 1)]
    _emit(args, rows, {"n": args.n, "k": args.exponent, "j": args.j})
    return EXIT_OK


def cmd_powersum(args) -> int:
    pop = load_popularity(args)
    _require(args, "j", "exponent")
    method = args.method if args.method != "auto" else dec.choose_method(pop, args.j, args.exponent)
    value = dec.power_sum(pop, args.j, args.exponent, method)
    _emit(args, [{"j": args.j, "k": args.exponent, "method": method, "power_sum": value}], {"n": pop.n, "backend": pop.backend.value})
    return EXIT_OK


def cmd_verify(args) -> int:
    report = verify.run(args.n_max, args.trials, args.seed if args.seed is not None else 0)
    rows = [{"identity": c.name, "cases": c.cases, "passed": c.passed} for c in report.checks]
    if args.format == "json":
        doc = {
            "command": "verify",
            "seed": report.seed,
            "n_max": report.n_max,
            "trials": report.trials,
            "passed": report.passed,
            "rows": rows,
            "failures": [c.failure for c in report.checks if not c.passed],
        }
        sys.stdout.write(json.dumps(doc, indent=2) + "\n")
    else:
        sys.stdout.write(_csv_text(rows))
    for c in report.checks:
        if not c.passed:
            sys.stderr.write(f"identity violated: {json.dumps(c.failure)}\n")
    return EXIT_OK if report.passed else EXIT_VIOLATION


def cmd_simulate(args) -> int:
    pop = load_popularity(args)
    _require(args, "c")
    cfg = simulator.SimConfig(samples=args.samples, seed=args.seed if args.seed is not None else 0, k_cap=args.kmax)
    emp = simulator.empirical_distribution(pop, args.c, cfg)
    rows = [{"k": k, "count": v, "frequency": v / emp.samples} for k, v in emp.counts.items()]
    meta = {"generator": emp.generator, "seed": emp.seed, "samples": emp.samples, "truncated": emp.truncated}
    _emit(args, rows, meta)
    return EXIT_OK


def compare(pop: popmod.Popularity, j: int, k: int, guard: int | None = None) -> dict:
    """Run the enumeration and fast paths on one query and report values, times and subset counts."""
    n = pop.n
    guard = ps.current_guard() if guard is None else guard
    brute_subsets = binomial(n, j)
    fast_subsets = sum(binomial(n, q) for q in range(1, k + 1))
    out = {
        "n": n,
        "j": j,
        "k": k,
        "backend": pop.backend.value,
        "brute_subsets": brute_subsets,
        "fast_subsets": fast_subsets,
        "subset_ratio": dec.subset_count_ratio(n, j, k),
        "numba": _kernels.USE_NUMBA,
    }
    dec.clear_cache()
    t0 = time.perf_counter()
    fast = dec.power_sum_fast(pop, j, k)
    out["fast_seconds"] = time.perf_counter() - t0
    out["fast_value"] = fast
    if brute_subsets > guard:
        out["brute_status"] = "infeasible, ratio only"
        return out
    if not pop.exact:
        _kernels.power_sum(pop.array[:2], 1, k)  # compile outside the timed region
    t0 = time.perf_counter()
    brute = ps.power_sum_bruteforce(pop, j, k, guard=guard)
    out["brute_seconds"] = time.perf_counter() - t0
    out["brute_value"] = brute
    out["brute_status"] = "ok"
    if pop.exact:
        out["rel_diff"] = 0.0 if fast == brute else float(abs(fast - brute) / abs(brute))
    else:
        out["rel_diff"] = abs(fast - brute) / abs(brute)
    out["speedup"] = out["brute_seconds"] / max(out["fast_seconds"], 1e-9)
    return out


def cmd_compare(args) -> int:
    pop = load_popularity(args)
    _require(args, "j", "exponent")
    result = compare(pop, args.j, args.exponent, args.guard)
    if args.format == "json":
        doc = {"command": "compare"}
        for key, v in result.items():
            doc[key] = _json_value(v)
            if _is_scalar(v):
                doc[f"{key}_decimal"] = to_decimal_string(v)
        sys.stdout.write(json.dumps(doc, indent=2) + "\n")
    else:
        sys.stdout.write(_csv_text([result]))
    return EXIT_OK


COMMANDS = {
    "pdf": cmd_distribution,
    "cdf": cmd_distribution,
    "ccdf": cmd_distribution,
    "expectation": cmd_expectation,
    "alpha": cmd_alpha,
    "eta": cmd_eta,
    "powersum": cmd_powersum,
    "verify": cmd_verify,
    "simulate": cmd_simulate,
    "compare": cmd_compare,
}


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    src = common.add_argument_group("popularity")
    src.add_argument("--popularity", metavar="FILE", help="JSON popularity file")
    src.add_argument("--uniform", type=int, metavar="N", help="uniform popularity on N items")
    src.add_argument("--renormalize", action="store_true", help="divide float probabilities by their sum")
    common.add_argument("--backend", choices=[b.value for b in Backend], help="exact rationals or float64")
    common.add_argument("--format", choices=["csv", "json"], default="csv")
    common.add_argument("--guard", type=int, metavar="LIMIT", help="largest subset count one enumeration may visit")
    common.add_argument("--seed", type=int)

    parser = _Parser(prog="ccp", description="Coupon-collector waiting times and subset power-sum identities.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    for name in ("pdf", "cdf", "ccdf"):
        p = sub.add_parser(name, parents=[common], help=f"{name} of the waiting time T_c")
        p.add_argument("--c", type=int)
        p.add_argument("--k", type=int, help="single trial count")
        p.add_argument("--kmax", type=int, help="table for k = 0..KMAX")
        p.add_argument("--method", choices=["auto", "brute", "fast", "uniform"], default="auto")

    p = sub.add_parser("expectation", parents=[common], help="E[T_c]")
    p.add_argument("--c", type=int)

    p = sub.add_parser("alpha", parents=[common], help="decomposition weights alpha[k, u]")
    p.add_argument("--exponent", "--k", dest="exponent", type=int)
    p.add_argument("--u", type=int, help="single weight index (default: all of 1..k)")
    p.add_argument("--alpha-method", choices=["general", "uniform"], default="general")

    p = sub.add_parser("eta", parents=[common], help="eta coefficients for a size-j power sum")
    p.add_argument("--n", type=int)
    p.add_argument("--exponent", "--k", dest="exponent", type=int)
    p.add_argument("--j", type=int)

    p = sub.add_parser("powersum", parents=[common], help="sum of P_J**k over size-j subsets")
    p.add_argument("--j", type=int)
    p.add_argument("--exponent", "--k", dest="exponent", type=int)
    p.add_argument("--method", choices=["auto", "brute", "fast", "uniform"], default="auto")

    p = sub.add_parser("verify", parents=[common], help="exact identity-verification suite")
    p.add_argument("--n-max", type=int, default=8)
    p.add_argument("--trials", type=int, default=50)

    p = sub.add_parser("simulate", parents=[common], help="Monte Carlo waiting-time histogram")
    p.add_argument("--c", type=int)
    p.add_argument("--samples", type=int, default=100_000)
    p.add_argument("--kmax", type=int, help="per-sample trial cap (default 1000 n)")

    p = sub.add_parser("compare", parents=[common], help="enumeration vs fast power sum")
    p.add_argument("--j", type=int)
    p.add_argument("--exponent", "--k", dest="exponent", type=int)
    return parser


def _fail(fmt: str, exc: Exception, code: str) -> None:
    if fmt == "json":
        sys.stderr.write(json.dumps({"error": code, "message": str(exc)}) + "\n")
    else:
        sys.stderr.write(f"ccp: error: {exc}\n")


def run(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    fmt = "json" if "json" in argv and "--format" in argv else "csv"
    try:
        args = build_parser().parse_args(argv)
        fmt = args.format
        if args.guard is not None:
            with ps.enumeration_guard(args.guard):
                return COMMANDS[args.command](args)
        return COMMANDS[args.command](args)
    except CCPError as exc:
        _fail(fmt, exc, exc.code)
        return EXIT_ERROR


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
