"""Command-line front end: catalog listing, single checks, grid sweeps and
the divisor-count cross-check.

Exit codes: 0 all pass; 1 any fail; 2 usage/constraint error or skipped
single check; 3 internal/IO error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction

from . import __version__
from .catalog import (
    DEFAULT_ORDER,
    UnknownIdentity,
    default_suite,
    get_identity,
    list_identities,
    render_params,
    verify,
)
from .limits import (
    DuplicateValues,
    PoleAtX,
    check_dilch2_noq,
    check_dilcher_noq,
    check_multi_noq,
    check_multi_noq_xm_limit,
    check_trigo,
    check_zeng_key,
)
from .literals import parse_monomial, parse_rational
from .qobjects import divisor_count, odd_divisor_count
from .series import QMonomial, coeff, invert_binomial, mul, qpow, sum_terms

# ---------------------------------------------------------------------------
# exact rational checks, exposed alongside the series catalog

RATIONAL_CHECKS: dict[str, tuple[tuple[tuple[str, str], ...], object, str]] = {
    "trigo": ((("n", "int"),), check_trigo,
              "alternating binomial sum equals the harmonic number"),
    "dilcher_noq": ((("m", "int"), ("n", "int")), check_dilcher_noq,
                    "alternating sum of C(n,k)/k^m equals the chain sum"),
    "multi_noq": ((("m", "int"), ("n", "int"), ("x", "rational")),
                  check_multi_noq, "x-deformed chain identity"),
    "multi_noq_xm_limit": ((("m", "int"), ("n", "int")),
                           check_multi_noq_xm_limit,
                           "factorial endpoint of the x-deformation"),
    "dilch2_noq": ((("m", "int"), ("n", "int"), ("x", "rational")),
                   check_dilch2_noq, "tail-difference variant"),
    "zeng_key": ((("a", "rationals"), ("m", "int")), check_zeng_key,
                 "partial-fraction form of complete homogeneous sums"),
}


def _render_rational_params(spec, p) -> str:
    parts = []
    for name, kind in spec:
        v = p[name]
        if kind == "rationals":
            parts.append(f"{name}=({','.join(str(Fraction(t)) for t in v)})")
        else:
            parts.append(f"{name}={v}")
    return ",".join(parts)


def run_rational_check(id: str, p: dict) -> dict:
    """One exact rational check as a report row (same schema as verify)."""
    spec, fn, _ = RATIONAL_CHECKS[id]
    row = {
        "identity": id,
        "params": _render_rational_params(spec, p),
        "first_mismatch": None,
        "skip_reason": None,
        "elapsed_ms": 0,
    }
    t0 = time.perf_counter()
    try:
        ok = fn(**p)
        row["status"] = "pass" if ok else "fail"
    except (PoleAtX, DuplicateValues) as e:
        row["status"] = "skipped"
        row["skip_reason"] = str(e)
    except ValueError as e:
        row["status"] = "skipped"
        row["skip_reason"] = str(e)
    row["elapsed_ms"] = round((time.perf_counter() - t0) * 1e3, 3)
    return row


X_POINTS = (Fraction(7, 2), Fraction(-5, 2), Fraction(9, 4),
            Fraction(11, 3), Fraction(-7, 3))
ZENG_TUPLES = ((Fraction(1),),
               (Fraction(1), Fraction(2)),
               (Fraction(1), Fraction(2), Fraction(3)),
               (Fraction(1, 2), Fraction(2), Fraction(3), Fraction(-5, 2)),
               (Fraction(1), Fraction(2), Fraction(3), Fraction(4), Fraction(5)))


def rational_suite(max_n: int) -> list[tuple[str, dict]]:
    """The exact-arithmetic companion grid for a sweep."""
    out: list[tuple[str, dict]] = []
    for n in range(1, max_n + 1):
        out.append(("trigo", {"n": n}))
    for m in range(1, max_n + 1):
        for n in range(1, max_n + 1):
            out.append(("dilcher_noq", {"m": m, "n": n}))
            out.append(("multi_noq_xm_limit", {"m": m, "n": n}))
            for x in X_POINTS:
                out.append(("multi_noq", {"m": m, "n": n, "x": x}))
                out.append(("dilch2_noq", {"m": m, "n": n, "x": x}))
    for a in ZENG_TUPLES:
        for m in range(1, min(max_n, 4) + 1):
            out.append(("zeng_key", {"a": a, "m": m}))
    return out


# ---------------------------------------------------------------------------
# report documents

def make_document(rows: list[dict], order: int, suite: str) -> dict:
    totals = {"pass": 0, "fail": 0, "skipped": 0}
    for r in rows:
        totals[r["status"]] += 1
    rows = sorted(rows, key=lambda r: (r["identity"], r["params"]))
    return {
        "header": {"version": __version__, "order": order, "suite": suite,
                   "totals": totals},
        "rows": rows,
    }


def render_document(doc: dict) -> str:
    """Canonical byte-stable JSON serialization."""
    return json.dumps(doc, sort_keys=True, separators=(",", ":")) + "\n"


# ---------------------------------------------------------------------------
# parameter parsing for `check`

def _parse_extra_params(extras: list[str]) -> dict[str, str]:
    raw: dict[str, str] = {}
    i = 0
    while i < len(extras):
        tok = extras[i]
        if not tok.startswith("--"):
            raise ValueError(f"expected --name, got {tok!r}")
        name, eq, val = tok[2:].partition("=")
        if not eq:
            i += 1
            if i >= len(extras):
                raise ValueError(f"missing value for --{name}")
            val = extras[i]
        raw[name.replace("-", "_")] = val
        i += 1
    return raw


def _coerce(kind: str, text: str):
    if kind == "int":
        return int(text)
    if kind == "monomial":
        return parse_monomial(text)
    if kind == "rational":
        return parse_rational(text)
    if kind == "rationals":
        return tuple(parse_rational(t) for t in text.split(","))
    raise ValueError(f"unknown parameter kind {kind!r}")


def _coerce_params(spec, raw: dict[str, str]) -> dict:
    p = {}
    for name, kind in spec:
        if name not in raw:
            raise ValueError(f"missing parameter --{name}")
        p[name] = _coerce(kind, raw[name])
    extra = set(raw) - {n for n, _ in spec}
    if extra:
        raise ValueError(f"unexpected parameters: {sorted(extra)}")
    return p


# ---------------------------------------------------------------------------
# subcommands

def cmd_catalog(args) -> int:
    if args.format == "json":
        doc = {
            "series": [
                {"id": d.id, "params": [list(t) for t in d.params],
                 "description": d.description, "infinite": d.infinite}
                for d in list_identities()
            ],
            "rational": [
                {"id": id, "params": [list(t) for t in spec], "description": description}
                for id, (spec, _, description) in sorted(RATIONAL_CHECKS.items())
            ],
        }
        print(json.dumps(doc, sort_keys=True, indent=2))
        return 0
    for d in list_identities():
        print(f"{d.id:20s} ({d.signature()}) -- {d.description}")
    print("rational:")
    for id, (spec, _, description) in sorted(RATIONAL_CHECKS.items()):
        sig = ", ".join(f"{n}: {k}" for n, k in spec)
        print(f"  {id:20s} ({sig}) -- {description}")
    return 0


_STATUS_EXIT = {"pass": 0, "fail": 1, "skipped": 2}


def cmd_check(args, extras) -> int:
    raw = _parse_extra_params(extras)
    if args.id in RATIONAL_CHECKS:
        spec, _, _ = RATIONAL_CHECKS[args.id]
        p = _coerce_params(spec, raw)
        row = run_rational_check(args.id, p)
    else:
        d = get_identity(args.id)  # raises UnknownIdentity
        p = _coerce_params(d.params, raw)
        row = verify(args.id, p, args.order).to_row()
    if args.format == "json":
        print(json.dumps(row, sort_keys=True, separators=(",", ":")))
    else:
        line = f"{row['identity']} [{row['params']}]: {row['status']}"
        if row["first_mismatch"]:
            fm = row["first_mismatch"]
            line += (f" at q^{fm['exponent']}: "
                     f"lhs={fm['lhs']} rhs={fm['rhs']}")
        if row["skip_reason"]:
            line += f" ({row['skip_reason']})"
        print(line)
    return _STATUS_EXIT[row["status"]]


def _run_task(task) -> dict:
    kind, id, p, order = task
    if kind == "rational":
        row = run_rational_check(id, p)
    else:
        row = verify(id, p, order).to_row()
    row["elapsed_ms"] = 0  # zeroed so documents are reproducible bytes
    return row


def run_sweep(max_n: int, order: int, jobs: int, seed: int = 0) -> dict:
    tasks = [("series", id, p, order) for id, p in default_suite(max_n, order, seed)]
    tasks += [("rational", id, p, order) for id, p in rational_suite(max_n)]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            rows = list(ex.map(_run_task, tasks, chunksize=16))
    else:
        rows = [_run_task(t) for t in tasks]
    suite = f"default(max_n={max_n},seed={seed})"
    return make_document(rows, order, suite)


def cmd_sweep(args) -> int:
    if args.max_n < 1:
        print("--max-n must be >= 1", file=sys.stderr)
        return 2
    doc = run_sweep(args.max_n, args.order, args.jobs, args.seed)
    text = render_document(doc)
    if args.out:
        try:
            with open(args.out, "w") as f:
                f.write(text)
        except OSError as e:
            print(f"cannot write {args.out}: {e}", file=sys.stderr)
            return 3
    else:
        sys.stdout.write(text)
    t = doc["header"]["totals"]
    print(f"pass={t['pass']} fail={t['fail']} skipped={t['skipped']}",
          file=sys.stderr)
    return 0 if t["fail"] == 0 else 1


def cmd_divisor(args) -> int:
    n_max = args.max
    if n_max < 1:
        print("--max must be >= 1", file=sys.stderr)
        return 2
    s1 = sum_terms(lambda k: mul(qpow(k), invert_binomial(1, k, n_max)),
                   1, n_max)
    s2 = sum_terms(lambda k: mul(qpow(k, 2), invert_binomial(1, 2 * k, n_max)),
                   1, n_max)
    for n in range(1, n_max + 1):
        d = divisor_count(n)
        od = odd_divisor_count(n)
        if coeff(s1, n) != d:
            print(f"mismatch at n={n}: coeff {coeff(s1, n)} != d(n) = {d}")
            return 1
        if coeff(s2, n) != 2 * od:
            print(f"mismatch at n={n}: coeff {coeff(s2, n)} != 2*odd-d(n) = {2 * od}")
            return 1
    print(f"all divisor counts match for n <= {n_max}")
    return 0


# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="qdivisor",
        description="exact verification of q-series divisor identities")
    sub = p.add_subparsers(dest="command", required=True)

    pc = sub.add_parser("catalog", help="list the identity catalog")
    pc.add_argument("--format", choices=("text", "json"), default="text")

    pk = sub.add_parser("check", help="verify one identity at given parameters")
    pk.add_argument("--id", required=True)
    pk.add_argument("--order", type=int, default=DEFAULT_ORDER)
    pk.add_argument("--format", choices=("text", "json"), default="text")

    ps = sub.add_parser("sweep", help="verify the whole grid")
    ps.add_argument("--max-n", type=int, default=4)
    ps.add_argument("--order", type=int, default=DEFAULT_ORDER)
    ps.add_argument("--jobs", type=int, default=os.cpu_count() or 1)
    ps.add_argument("--seed", type=int, default=0)
    ps.add_argument("--out", default=None)

    pd = sub.add_parser("divisor", help="cross-check coefficients against "
                                        "trial-division divisor counts")
    pd.add_argument("--max", type=int, default=100)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args, extras = parser.parse_known_args(argv)
    try:
        if args.command == "catalog":
            if extras:
                print(f"unexpected arguments: {extras}", file=sys.stderr)
                return 2
            return cmd_catalog(args)
        if args.command == "check":
            return cmd_check(args, extras)
        if extras:
            print(f"unexpected arguments: {extras}", file=sys.stderr)
            return 2
        if args.command == "sweep":
            return cmd_sweep(args)
        return cmd_divisor(args)
    except (UnknownIdentity, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except Exception as e:  # pragma: no cover - internal failure path
        print(f"internal error: {e}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
