"""Command-line front end.

Subcommands: bound, table, figure, energy, krein.  Every emitted value is
accompanied by its certificate (or an explicit unverified-hypothesis
marker); outputs are deterministic for a fixed configuration and seed.
Exit codes: 0 success, 2 precondition or hypothesis failure (including
usage errors), 3 numeric failure.
"""

import argparse
import sys

import mpmath as mp

from . import krein as krein_mod
from . import levenshtein as lev_mod
from .energy import energy_lower_bound, parse_potential
from .errors import ArgumentError, NumericError, PreconditionError, SphereLPError
from .precision import MIN_DPS, get_working_dps, mpf, set_working_dps
from .serialize import dumps_csv, dumps_json, envelope, fmt17, number, trunc3
from .signed import max_k_for_ell, s_window

EXIT_OK = 0
EXIT_PRECONDITION = 2
EXIT_NUMERIC = 3


def _add_common(p):
    p.add_argument("--format", choices=["json", "csv", "text"], default="text")
    p.add_argument("--output", help="write to this path instead of stdout")
    p.add_argument("--precision", type=int, default=None,
                   help=f"working decimal digits (>= {MIN_DPS}; default from "
                        "SPHERELP_PRECISION or 35)")
    p.add_argument("--seed", type=int, default=0,
                   help="seed recorded with the output for sampled checks")


def build_parser():
    ap = argparse.ArgumentParser(
        prog="spherelp",
        description="Cardinality bounds for spherical codes with inner products "
                    "in [ell, s] and energy bounds for codes avoiding a polar cap.",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    b = sub.add_parser("bound", help="cardinality bound for inner products in [ell, s]")
    b.add_argument("--n", type=int, required=True)
    b.add_argument("--ell", required=True)
    b.add_argument("--s", required=True)
    b.add_argument("--k", type=int, default=None,
                   help="degree parameter; default: largest k whose window contains s")
    b.add_argument("--krein", choices=["none", "weak", "full"], default="weak")
    b.add_argument("--dump-certificate", action="store_true",
                   help="include the family and polynomial data in JSON output")
    _add_common(b)

    t = sub.add_parser("table", help="threshold table ell*(n,k) with ratio roots")
    t.add_argument("--n-min", type=int, default=3)
    t.add_argument("--n-max", type=int, default=10)
    t.add_argument("--k-min", type=int, default=1)
    t.add_argument("--k-max", type=int, default=10)
    t.add_argument("--step", default="1e-3")
    t.add_argument("--workers", type=int, default=1)
    t.add_argument("--json-sidecar", help="also write full-precision JSON here")
    _add_common(t)

    f = sub.add_parser("figure", help="bound comparison curves over an s grid")
    f.add_argument("--n", type=int, required=True)
    f.add_argument("--ell", required=True)
    f.add_argument("--s-min", default=None)
    f.add_argument("--s-max", default="0.8")
    f.add_argument("--points", type=int, default=176)
    _add_common(f)

    e = sub.add_parser("energy", help="lower bound on potential energy")
    e.add_argument("--n", type=int, required=True)
    e.add_argument("--M", required=True)
    e.add_argument("--ell", required=True)
    e.add_argument("--potential", required=True,
                   help="riesz:<sigma> | gaussian:<c> | log | newton | file:<path>")
    e.add_argument("--M-ladder", default=None,
                   help="comma-separated M values; emits a CSV ladder (M,k,s,bound)")
    e.add_argument("--krein", choices=["none", "weak", "full"], default="full")
    _add_common(e)

    k = sub.add_parser("krein", help="product-positivity check or threshold sweep")
    k.add_argument("--n", type=int, required=True)
    k.add_argument("--k", type=int, required=True)
    k.add_argument("--ell", default=None)
    k.add_argument("--sweep", action="store_true", help="estimate ell*(n,k)")
    k.add_argument("--step", default="1e-3")
    k.add_argument("--pairs", choices=["full", "weak"], default="full")
    k.add_argument("--scan", type=int, default=None,
                   help="sample the condition at this many points of [-1, ell*]")
    _add_common(k)
    return ap


def _emit(args, text):
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _config_dict(args, fields):
    cfg = {"precision": get_working_dps(), "seed": args.seed}
    for f in fields:
        cfg[f] = getattr(args, f.replace("-", "_"))
    return cfg


def _auto_k(n, ell, s):
    """Largest admissible k whose window contains s."""
    kmax = max_k_for_ell(n, ell).k
    best = None
    for k in range(1, kmax + 1):
        try:
            lo, hi = s_window(n, ell, k)
        except SphereLPError:
            break
        if lo <= s <= hi:
            best = k
    if best is None:
        raise PreconditionError(
            f"no degree window contains s={s} at ell={ell}; pass --k explicitly"
        )
    return best


def cmd_bound(args):
    n, ell, s = args.n, mpf(args.ell), mpf(args.s)
    k = args.k if args.k is not None else _auto_k(n, ell, s)
    rep = lev_mod.bound_L2k(n, ell, s, k, krein=args.krein)
    if args.format == "json":
        payload = {"bound": rep.as_dict()}
        if args.dump_certificate:
            payload["family_1l"] = rep.polynomial.kernel.family.as_dict()
            payload["kernel_poly"] = rep.polynomial.kernel.as_dict()
            payload["polynomial"] = rep.polynomial.as_dict()
        out = envelope("bound", payload, _config_dict(args, ["n", "ell", "s", "k", "krein"]))
        _emit(args, dumps_json(out))
    elif args.format == "csv":
        header = ["n", "ell", "s", "k", "value", "value_trunc3"]
        row = [n, fmt17(ell), fmt17(s), k, fmt17(rep.value), trunc3(rep.value)]
        _emit(args, dumps_csv(header, [row]))
    else:
        lines = [
            f"bound on codes in [{fmt17(ell)}, {fmt17(s)}] for n={n}, degree 2k={2 * k}:",
            f"  value = {fmt17(rep.value)}   (= 1/rho_{k + 1}; f(1)/f0 agrees)",
            f"  nodes = {[number(x) for x in rep.nodes]}",
            f"  rho   = {[number(w) for w in rep.rho]}",
            "  checks: " + ", ".join(f"{c}={v}" for c, v in sorted(rep.checks.items())),
        ]
        _emit(args, "\n".join(lines) + "\n")
    return EXIT_OK


def cmd_table(args):
    ns = range(args.n_min, args.n_max + 1)
    ks = range(args.k_min, args.k_max + 1)
    res = krein_mod.sweep_table(ns, ks, step=mpf(args.step), workers=args.workers)
    ks_desc = sorted(ks, reverse=True)
    header = ["row"] + [str(k) for k in ks_desc]
    rows = []
    for n in ns:
        rows.append([f"ell_star({n})"] + [trunc3(res[n]["ell_star"][k].value) for k in ks_desc])
        rows.append([f"ratio_root({n})"] + [trunc3(res[n]["ratio_root"][k]) for k in ks_desc])
    csv_text = dumps_csv(header, rows)
    sidecar = {
        "cells": {
            str(n): {
                str(k): {
                    "ell_star": res[n]["ell_star"][k].as_dict(),
                    "ratio_root": number(res[n]["ratio_root"][k]),
                }
                for k in ks
            }
            for n in ns
        }
    }
    if args.json_sidecar:
        with open(args.json_sidecar, "w") as fh:
            fh.write(dumps_json(envelope(
                "table", sidecar,
                _config_dict(args, ["n_min", "n_max", "k_min", "k_max", "step"]))))
    if args.format == "json":
        _emit(args, dumps_json(envelope(
            "table", sidecar,
            _config_dict(args, ["n_min", "n_max", "k_min", "k_max", "step"]))))
    else:
        _emit(args, csv_text)
    return EXIT_OK


def cmd_figure(args):
    n, ell = args.n, mpf(args.ell)
    s_min = mpf(args.s_min) if args.s_min is not None else ell
    s_max = mpf(args.s_max)
    pts = args.points
    grid = [s_min + (s_max - s_min) * mp.mpf(i) / (pts - 1) for i in range(pts)]
    rows = lev_mod.bound_curves(n, ell, grid)
    odd_cols = ["L1", "L3", "L5", "L7"]
    new_cols = ["L2", "L4", "L6", "L8"]
    header = ["s"] + odd_cols + new_cols
    out_rows = [
        [fmt17(r["s"])] + [fmt17(r[c]) if r[c] is not None else None for c in odd_cols + new_cols]
        for r in rows
    ]
    if args.format == "json":
        payload = {
            "columns": header,
            "rows": [
                {c: (number(r[c]) if c != "s" else number(r["s"]))
                 for c in header if c == "s" or r[c] is not None}
                for r in rows
            ],
            "crossovers": [
                {
                    "k": c.k,
                    "s": number(c.s_cross),
                    "left": number(c.left_value),
                    "right": number(c.right_value),
                    "gap": number(c.gap),
                }
                for c in _crossovers(n, ell)
            ],
        }
        _emit(args, dumps_json(envelope("figure", payload, _config_dict(args, ["n", "ell", "points"]))))
    else:
        _emit(args, dumps_csv(header, out_rows))
    return EXIT_OK


def _crossovers(n, ell):
    out = []
    for k in (1, 2, 3):
        try:
            out.append(lev_mod.regime_crossover(n, ell, k))
        except SphereLPError:
            break
    return out


def cmd_energy(args):
    n, ell = args.n, mpf(args.ell)
    pot = parse_potential(args.potential, n=n)
    if args.M_ladder:
        rows = []
        for mtxt in args.M_ladder.split(","):
            rep = energy_lower_bound(n, mpf(mtxt), ell, pot, krein=args.krein)
            rows.append([fmt17(rep.M), rep.k, fmt17(rep.s), fmt17(rep.value)])
        _emit(args, dumps_csv(["M", "k", "s", "bound"], rows))
        return EXIT_OK
    rep = energy_lower_bound(n, mpf(args.M), ell, pot, krein=args.krein)
    if args.format == "json":
        _emit(args, dumps_json(envelope(
            "energy", {"energy": rep.as_dict()},
            _config_dict(args, ["n", "M", "ell", "potential", "krein"]))))
    elif args.format == "csv":
        _emit(args, dumps_csv(
            ["n", "M", "ell", "potential", "k", "s", "bound", "status"],
            [[n, fmt17(rep.M), fmt17(ell), args.potential, rep.k, fmt17(rep.s),
              fmt17(rep.value), rep.status]]))
    else:
        lines = [
            f"energy bound for n={n}, M={fmt17(rep.M)}, ell={fmt17(ell)}, "
            f"potential {args.potential}:",
            f"  value = {fmt17(rep.value)}   (status: {rep.status})",
            f"  degree 2k = {2 * rep.k}, s = {fmt17(rep.s)}",
            f"  nodes = {[number(x) for x in rep.bound.nodes]}",
            f"  rho   = {[number(w) for w in rep.bound.rho]}",
            "  checks: " + ", ".join(f"{c}={v}" for c, v in sorted(rep.checks.items())),
        ]
        _emit(args, "\n".join(lines) + "\n")
    return EXIT_OK


def cmd_krein(args):
    n, k = args.n, args.k
    if args.sweep:
        es = krein_mod.ell_star(n, k, step=mpf(args.step))
        if args.format == "json":
            _emit(args, dumps_json(envelope(
                "krein", {"ell_star": es.as_dict()},
                _config_dict(args, ["n", "k", "step"]))))
        else:
            _emit(args, f"ell_star({n},{k}) = {fmt17(es.value)} "
                        f"(trunc3 {trunc3(es.value)}; bracket width "
                        f"{fmt17(es.bracket[1] - es.bracket[0])})\n")
        return EXIT_OK
    if args.scan is not None:
        scan = krein_mod.conjecture_scan(n, k, args.scan)
        payload = {
            "all_pass": scan.all_pass,
            "ell_hi": number(scan.ell_hi),
            "points": [[number(e), ok] for e, ok in scan.points],
            "failures": [number(e) for e in scan.failures],
        }
        if args.format == "json":
            _emit(args, dumps_json(envelope("krein", payload,
                                            _config_dict(args, ["n", "k", "scan"]))))
        else:
            _emit(args, f"scan({n},{k}): {'all pass' if scan.all_pass else 'FAILURES'} "
                        f"on {len(scan.points)} points up to {fmt17(scan.ell_hi)}\n")
        return EXIT_OK
    if args.ell is None:
        raise ArgumentError("krein needs --ell (single check), --sweep, or --scan")
    rep = krein_mod.lsk_check(n, mpf(args.ell), k, mode=args.pairs)
    if args.format == "json":
        _emit(args, dumps_json(envelope(
            "krein", {"check": rep.as_dict()},
            _config_dict(args, ["n", "k", "ell", "pairs"]))))
    else:
        verdict = "pass" if rep.overall else "fail"
        why = f" ({rep.reason})" if rep.reason else ""
        _emit(args, f"krein check n={n}, k={k}, ell={args.ell}: {verdict}{why}\n")
    return EXIT_OK


_COMMANDS = {
    "bound": cmd_bound,
    "table": cmd_table,
    "figure": cmd_figure,
    "energy": cmd_energy,
    "krein": cmd_krein,
}


def main(argv=None):
    args = build_parser().parse_args(argv)
    if args.precision is not None:
        try:
            set_working_dps(args.precision)
        except ArgumentError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_PRECONDITION
    try:
        return _COMMANDS[args.command](args)
    except NumericError as exc:
        print(f"numeric failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except SphereLPError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION


if __name__ == "__main__":
    sys.exit(main())
