"""Command-line interface: value sets, permutation verdicts, sharp bounds,
derivative-order profiles, and bound-versus-oracle verification sweeps.

All stdout output is deterministic: identical arguments produce identical
bytes.  Diagnostics and opt-in progress go to stderr.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import os
import sys

from .bounds import big_m
from .hensel import InfiniteValuationError, check_lifting_base, derivative_order, hensel_profile
from .oracle import oracle_big_m, oracle_feasible, set_threads
from .permutation import (
    CollidingPair,
    CriticalDerivative,
    MissingValue,
    is_permutation,
    is_permutation_brute,
    is_permutation_prime_power,
    is_permutation_rivest,
)
from .poly import ParseError, parse_poly, render_poly
from .valuesets import CapExceededError, FactoredModulus, n_value, value_set

EXIT_OK = 0
EXIT_FALSE = 1
EXIT_USAGE = 2
EXIT_CAP = 3

#: Default table-visit budget for the verification sweep; covers every
#: modulus up to 32 and skips the ones whose enumeration is intractable.
DEFAULT_VERIFY_CAP = 4_000_000_000


def _witness_text(w) -> str:
    if isinstance(w, MissingValue):
        return f"missing value {w.value}"
    if isinstance(w, CriticalDerivative):
        return f"critical derivative at residue {w.residue} mod {w.prime}"
    if isinstance(w, CollidingPair):
        return f"colliding inputs {w.first} and {w.second}"
    return "none"


def _witness_json(w):
    if isinstance(w, MissingValue):
        return {"kind": "missing-value", "value": w.value}
    if isinstance(w, CriticalDerivative):
        return {"kind": "critical-derivative", "residue": w.residue, "prime": w.prime}
    if isinstance(w, CollidingPair):
        return {"kind": "colliding-pair", "first": w.first, "second": w.second}
    return None


def _yesno(flag: bool) -> str:
    return "yes" if flag else "no"


def _flat(value) -> str:
    if isinstance(value, bool):
        return _yesno(value)
    if value is None:
        return ""
    if isinstance(value, (list, tuple)):
        return " ".join(_flat(v) for v in value)
    if isinstance(value, dict):
        return ";".join(f"{k}={_flat(v)}" for k, v in value.items())
    return str(value)


def _emit(args, record: dict, plain_lines: list[str], csv_rows=None) -> None:
    if args.format == "json":
        sys.stdout.write(json.dumps(record) + "\n")
    elif args.format == "csv":
        writer = csv.writer(sys.stdout, lineterminator="\n")
        if csv_rows is None:
            csv_rows = [["field", "value"]] + [
                [key, _flat(value)] for key, value in record.items() if key != "command"
            ]
        writer.writerows(csv_rows)
    else:
        sys.stdout.write("\n".join(plain_lines) + "\n")


def _values_line(values, size: int, display_cap: int) -> str:
    if values is None:
        return "values = (not materialized)"
    if size <= display_cap:
        return "values = " + " ".join(map(str, values))
    head = " ".join(map(str, values[:8]))
    tail = " ".join(map(str, values[-8:]))
    return f"values = {head} ... {tail} ({size} total, display capped)"


def _cmd_valueset(args) -> int:
    f = parse_poly(args.poly)
    fm = FactoredModulus.parse(args.modulus)
    report = value_set(f, fm, cap=args.cap)
    record = {
        "command": "valueset",
        "poly": render_poly(f),
        "m": fm.m,
        "factors": [
            {"p": sub.prime, "r": sub.exponent, "n": sub.size} for sub in report.factors
        ],
        "n": report.size,
        "values": list(report.values),
        "surjective": report.is_surjective,
        "provenance": "direct-enumeration",
    }
    lines = [
        f"poly = {record['poly']}",
        f"m = {fm.m}",
        f"factorization = {fm}",
        f"n = {report.size}",
    ]
    for sub in report.factors:
        lines.append(f"factor {sub.prime}^{sub.exponent}: n = {sub.size}")
    lines.append(_values_line(report.values, report.size, args.display_cap))
    lines.append(f"surjective = {_yesno(report.is_surjective)}")
    _emit(args, record, lines)
    return EXIT_OK


def _cmd_isperm(args) -> int:
    f = parse_poly(args.poly)
    fm = FactoredModulus.parse(args.modulus)
    if args.method == "brute":
        verdict = is_permutation_brute(f, fm.m, cap=args.cap)
    elif args.method == "rivest":
        if len(fm.factors) != 1 or fm.factors[0][0] != 2 or fm.factors[0][1] < 2:
            raise ValueError("the rivest method needs a modulus 2^r with r >= 2")
        verdict = is_permutation_rivest(f, fm.factors[0][1])
    elif len(fm.factors) == 1:
        verdict = is_permutation_prime_power(f, *fm.factors[0])
    else:
        verdict = is_permutation(f, fm)
    record = {
        "command": "isperm",
        "poly": render_poly(f),
        "m": fm.m,
        "method": verdict.method.value,
        "verdict": verdict.is_permutation,
        "witness": _witness_json(verdict.witness),
        "factors": [
            {
                "p": p,
                "r": r,
                "verdict": sub.is_permutation,
                "method": sub.method.value,
                "witness": _witness_json(sub.witness),
            }
            for (p, r), sub in zip(fm.factors, verdict.sub_verdicts)
        ],
    }
    lines = [
        f"poly = {record['poly']}",
        f"m = {fm.m}",
        f"method = {verdict.method.value}",
        f"permutation = {_yesno(verdict.is_permutation)}",
    ]
    if verdict.witness is not None:
        lines.append(f"witness = {_witness_text(verdict.witness)}")
    for (p, r), sub in zip(fm.factors, verdict.sub_verdicts):
        lines.append(f"factor {p}^{r}: permutation = {_yesno(sub.is_permutation)}")
    _emit(args, record, lines)
    return EXIT_OK if verdict.is_permutation else EXIT_FALSE


def _cmd_maxbound(args) -> int:
    fm = FactoredModulus.parse(args.modulus)
    report = big_m(fm)
    achieved = n_value(report.achieving_poly, fm, cap=args.cap)
    record = {
        "command": "maxbound",
        "m": fm.m,
        "factors": [{"p": p, "r": r} for p, r in fm.factors],
        "bound": report.bound,
        "per_prime": {str(p): v for p, v in report.per_prime.items()},
        "exception": report.exception_flag,
        "poly": render_poly(report.achieving_poly),
        "n": achieved,
        "provenance": "sharp-nonpermutation-bound",
    }
    lines = [
        f"m = {fm.m}",
        f"factorization = {fm}",
        f"bound = {report.bound}",
    ]
    for p, v in report.per_prime.items():
        lines.append(f"m({p}) = {v}")
    lines.append(f"exception = {_yesno(report.exception_flag)}")
    lines.append(f"achieving poly = {record['poly']}")
    lines.append(f"achieved n = {achieved}")
    _emit(args, record, lines)
    return EXIT_OK


def _cmd_verify(args) -> int:
    lo, sep, hi = args.m_range.partition("..")
    if not sep or not lo.isdigit() or not hi.isdigit():
        raise ValueError("range must look like 2..30")
    lo, hi = int(lo), int(hi)
    if lo < 2 or hi < lo:
        raise ValueError("range must satisfy 2 <= lo <= hi")
    rows = []
    for m in range(lo, hi + 1):
        if args.progress:
            print(f"checking m = {m}", file=sys.stderr)
        bound = big_m(m).bound
        if oracle_feasible(m, cap=args.cap):
            observed = oracle_big_m(m, cap=args.cap)[0]
            rows.append({"m": m, "bound": bound, "oracle": observed, "match": observed == bound})
        else:
            rows.append({"m": m, "bound": bound, "oracle": None, "match": None})
    checked = [row for row in rows if row["match"] is not None]
    verdict = bool(checked) and all(row["match"] for row in checked)
    record = {
        "command": "verify",
        "lo": lo,
        "hi": hi,
        "rows": rows,
        "verdict": verdict,
        "provenance": "bound-vs-exhaustive-oracle",
    }
    header = ["m", "bound", "oracle", "match"]
    table_rows = [
        [
            str(row["m"]),
            str(row["bound"]),
            "-" if row["oracle"] is None else str(row["oracle"]),
            "skipped" if row["match"] is None else _yesno(row["match"]),
        ]
        for row in rows
    ]
    lines = [" ".join(header)] + [" ".join(r) for r in table_rows]
    _emit(args, record, lines, csv_rows=[header] + table_rows)
    if any(row["match"] is False for row in rows):
        return EXIT_FALSE
    if not checked:
        return EXIT_CAP
    return EXIT_OK


def _cmd_hensel(args) -> int:
    f = parse_poly(args.poly)
    p = args.prime
    profile = hensel_profile(f, p)
    orders = {
        str(a): ("infinity" if math.isinf(s) else int(s))
        for a, s in profile.orders.items()
    }
    record = {
        "command": "hensel",
        "poly": render_poly(f),
        "prime": p,
        "orders": orders,
    }
    lines = [f"poly = {record['poly']}", f"prime = {p}"]
    for a, s in orders.items():
        lines.append(f"s({a}) = {s}")
    exit_code = EXIT_OK
    if args.at is not None:
        s_at = derivative_order(f, p, args.at)
        record["at"] = args.at
        record["s_at"] = "infinity" if math.isinf(s_at) else int(s_at)
        lines.append(f"s at {args.at} = {record['s_at']}")
    if args.base is not None:
        if args.at is None:
            raise ValueError("--base requires --at")
        holds = check_lifting_base(f, p, args.at, args.base)
        record["base"] = args.base
        record["verdict"] = holds
        lines.append(f"base r0 = {args.base}: holds = {_yesno(holds)}")
        if not holds:
            exit_code = EXIT_FALSE
    _emit(args, record, lines)
    return exit_code


def _add_common(sub: argparse.ArgumentParser) -> None:
    sub.add_argument(
        "--format", choices=("plain", "json", "csv"), default="plain",
        help="output format (default: plain)",
    )
    sub.add_argument(
        "--display-cap", type=int, default=64, metavar="N",
        help="largest value set printed in full in plain mode (default: 64)",
    )
    sub.add_argument(
        "--threads", type=int, default=None, metavar="N",
        help="worker threads for jit sweeps (default: RESIRING_THREADS or all)",
    )
    sub.add_argument(
        "--progress", action="store_true",
        help="write progress lines to stderr",
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="resiring",
        description="Value sets and permutation tests over residue class rings Z/mZ.",
    )
    subs = parser.add_subparsers(dest="subcommand", required=True)

    p_vs = subs.add_parser("valueset", help="value set of f mod m")
    p_vs.add_argument("--poly", required=True, help='polynomial, e.g. "x^3+2*x"')
    p_vs.add_argument("--modulus", required=True, help='decimal or factored, e.g. "2^3*3^2"')
    p_vs.add_argument("--cap", type=int, default=10**7, help="largest enumerable modulus")
    _add_common(p_vs)
    p_vs.set_defaults(func=_cmd_valueset)

    p_ip = subs.add_parser("isperm", help="decide whether f permutes Z/mZ")
    p_ip.add_argument("--poly", required=True)
    p_ip.add_argument("--modulus", required=True)
    p_ip.add_argument(
        "--method", choices=("auto", "brute", "hensel", "rivest"), default="auto"
    )
    p_ip.add_argument("--cap", type=int, default=10**7)
    _add_common(p_ip)
    p_ip.set_defaults(func=_cmd_isperm)

    p_mb = subs.add_parser("maxbound", help="sharp bound M(m) with a witness polynomial")
    p_mb.add_argument("--modulus", required=True)
    p_mb.add_argument("--cap", type=int, default=10**7)
    _add_common(p_mb)
    p_mb.set_defaults(func=_cmd_maxbound)

    p_vf = subs.add_parser("verify", help="compare M(m) against the enumeration oracle")
    p_vf.add_argument("--m-range", required=True, metavar="LO..HI")
    p_vf.add_argument(
        "--cap", type=int, default=DEFAULT_VERIFY_CAP,
        help="largest oracle sweep, in visited tables",
    )
    _add_common(p_vf)
    p_vf.set_defaults(func=_cmd_verify)

    p_hl = subs.add_parser("hensel", help="derivative-order profile and lifting-base check")
    p_hl.add_argument("--poly", required=True)
    p_hl.add_argument("--prime", type=int, required=True)
    p_hl.add_argument("--at", type=int, default=None, help="specific integer point")
    p_hl.add_argument("--base", type=int, default=None, help="base exponent r0 to check")
    _add_common(p_hl)
    p_hl.set_defaults(func=_cmd_hensel)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    threads = args.threads
    if threads is None:
        env = os.environ.get("RESIRING_THREADS", "")
        threads = int(env) if env.isdigit() and int(env) > 0 else None
    if threads is not None:
        set_threads(threads)
    try:
        return args.func(args)
    except ParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except CapExceededError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CAP
    except (ValueError, InfiniteValuationError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
