"""Command-line front end.

Exit codes: 0 success, 1 invariant violation, 2 invalid input or cap exceeded.

CSV schemas (fixed column order):
  census / enumerate --weights:
      beta_id, min_wt, delta_num, delta_den, lcd_sufficient, lcd_exact, exact_scan
  enumerate (default):
      beta_id, lcd_sufficient, lcd_exact
  scan-lengths:
      n, mu, ratio_approx

JSON output has sorted keys, rationals as "num/den" strings, and carries the
tool version plus an echo of the configuration (thread count and output paths
excluded, so runs with different worker counts compare byte for byte).
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import os
import sys
from dataclasses import asdict, is_dataclass
from fractions import Fraction

import numpy as np

from . import __version__
from . import asymptotics as asy
from . import lcd_chain, lcd_field
from .chain_ring import build_chain_ring
from .gf import build_field, prime_power
from .group_algebra import AlgebraElem, GroupSpec, deserialize, serialize
from .idempotents import build_idempotents, check_system, tau_fixed_dim

log = logging.getLogger("qaclcd")


# -- serialization -----------------------------------------------------------


def _jsonable(x):
    if isinstance(x, Fraction):
        return f"{x.numerator}/{x.denominator}"
    if is_dataclass(x) and not isinstance(x, type):
        return _jsonable(asdict(x))
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, np.integer):
        return int(x)
    if isinstance(x, np.bool_):
        return bool(x)
    return x


def emit_report(results, fmt: str, path: str | None):
    """Write ``results`` as JSON (dict) or CSV (``(header, rows)``)."""
    if fmt == "json":
        text = json.dumps(_jsonable(results), sort_keys=True, indent=2) + "\n"
    else:
        header, rows = results
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(header)
        w.writerows(rows)
        text = buf.getvalue()
    if path in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)


def _b(x: bool) -> str:
    return "true" if x else "false"


def _config_echo(args) -> dict:
    skip = {"threads", "output", "summary", "func", "verbose"}
    return {k: v for k, v in sorted(vars(args).items()) if k not in skip}


def _header(args) -> dict:
    return {"version": __version__, "config": _config_echo(args)}


# -- argument helpers -----------------------------------------------------


def _threads(args) -> int:
    env = os.environ.get("QACLCD_THREADS")
    if env:
        return max(1, int(env))
    return max(1, args.threads)


def _system(args):
    prime_power(args.q)
    G = GroupSpec.parse(args.group)
    if G.n < 7:
        print("notice: n < 7; the asymptotic hypotheses assume n >= 7", file=sys.stderr)
    return build_idempotents(G, args.q)


def _lambda(args, system) -> int:
    if args.q == 2:
        raise ValueError("no admissible λ for q=2")
    if args.lam is None:
        lams = lcd_field.admissible_lambdas(system)
        if not lams:
            raise ValueError(lcd_field.lambda_problem(system, 1) or "no admissible lambda")
        return lams[0]
    problem = lcd_field.lambda_problem(system, args.lam)
    if problem:
        raise ValueError(problem)
    return args.lam


def _deltas(args, n: int) -> list[Fraction]:
    if args.delta:
        return sorted(set(Fraction(d) for d in args.delta))
    return [Fraction(k, 2 * n) for k in range(2 * n + 1)]


# -- subcommands -------------------------------------------------------------


def cmd_idempotents(args) -> int:
    S = _system(args)
    checks = check_system(S)
    comps = []
    for c in S.components:
        comps.append(
            {
                "label": c.label,
                "kind": c.kind,
                "k": c.k,
                "tau_fixed_dim": tau_fixed_dim(S, c),
                "orbits": [list(o.members) for o in c.orbits],
                "idempotent": serialize(c.idem),
            }
        )
    tau_sum = sum(x["tau_fixed_dim"] for x in comps)
    checks.append(("tau-fixed dimensions sum to n", tau_sum == S.group.n))
    out = _header(args) | {
        "q": S.q,
        "group": str(S.group),
        "r": S.r,
        "s": S.s,
        "t": S.t,
        "mu": S.mu,
        "components": comps,
        "checks": [{"name": n, "ok": ok} for n, ok in checks],
    }
    emit_report(out, "json", args.output)
    return 0 if all(ok for _, ok in checks) else 1


def _rows_csv(rows: list[lcd_field.CensusRow]):
    header = ["beta_id", "min_wt", "delta_num", "delta_den", "lcd_sufficient", "lcd_exact", "exact_scan"]
    body = [
        [r.beta_id, r.min_wt, r.delta.numerator, r.delta.denominator, _b(r.lcd_sufficient), _b(r.lcd_exact), _b(r.exact_scan)]
        for r in rows
    ]
    return header, body


def _sampled_rows(S, lam, trials, seed):
    F, G = S.field, S.group
    one = AlgebraElem.one(F, G)
    rows = []
    for b in lcd_field.materialize_D_lambda(S, lam):
        beta = AlgebraElem(F, G, b)
        code = lcd_field.code_from_pair(one, beta)
        mw = lcd_field.min_weight_sampled(code, trials, seed)
        rows.append(
            lcd_field.CensusRow(
                serialize(beta),
                mw,
                Fraction(mw, 2 * G.n),
                lcd_field.sufficient_lcd_check(one, beta) is not None,
                lcd_field.exact_lcd_check(code),
                exact_scan=False,
            )
        )
    return rows


def _census_rows(args, S, lam):
    F, G = S.field, S.group
    if F.order**G.n > lcd_field.SCAN_CAP:
        if not args.sampled:
            raise lcd_field.CapExceeded("exact scan cap exceeded; pass --sampled for upper bounds")
        return _sampled_rows(S, lam, args.trials, args.seed)
    return lcd_field.census_rows(S, lam, threads=_threads(args))


def _oracle(S, lam, threads):
    try:
        return lcd_field.brute_force_D_lambda(S, lam, threads)
    except lcd_field.CapExceeded:
        return None


def cmd_enumerate(args) -> int:
    S = _system(args)
    lam = _lambda(args, S)
    formula, factors = lcd_field.count_D_lambda(S, lam)
    if args.weights:
        rows = _census_rows(args, S, lam)
        emit_report(_rows_csv(rows), "csv", args.output)
        bad = [r for r in rows if not r.lcd_exact]
        n_items = len(rows)
    else:
        F, G = S.field, S.group
        one = AlgebraElem.one(F, G)
        body = []
        bad = []
        for b in lcd_field.materialize_D_lambda(S, lam):
            beta = AlgebraElem(F, G, b)
            exact = lcd_field.exact_lcd_check(lcd_field.code_from_pair(one, beta))
            suff = lcd_field.sufficient_lcd_check(one, beta) is not None
            body.append([serialize(beta), _b(suff), _b(exact)])
            if not exact:
                bad.append(beta)
        emit_report((["beta_id", "lcd_sufficient", "lcd_exact"], body), "csv", args.output)
        n_items = len(body)
    oracle = _oracle(S, lam, _threads(args)) if args.oracle else None
    summary = _header(args) | {
        "q": S.q,
        "group": str(S.group),
        "lambda": lam,
        "count_formula": formula,
        "count_enumerated": n_items,
        "count_oracle": oracle,
        "factors": [{"component": k, "size": v} for k, v in factors],
    }
    if args.summary:
        emit_report(summary, "json", args.summary)
    ok = not bad and n_items == formula and (oracle is None or oracle == formula)
    return 0 if ok else 1


def cmd_census(args) -> int:
    S = _system(args)
    lam = _lambda(args, S)
    rows = _census_rows(args, S, lam)
    formula, _ = lcd_field.count_D_lambda(S, lam)
    deltas = _deltas(args, S.group.n)
    sizes = [{"delta": d, "size": lcd_field.census_le_delta(rows, d)} for d in deltas]
    if args.format == "csv":
        emit_report(_rows_csv(rows), "csv", args.output)
    summary = _header(args) | {
        "q": S.q,
        "group": str(S.group),
        "lambda": lam,
        "count_formula": formula,
        "count_oracle": _oracle(S, lam, _threads(args)) if args.oracle else None,
        "census": sizes,
        "upper_bound": any(not r.exact_scan for r in rows),
    }
    if args.format == "json":
        summary["rows"] = [
            {"beta_id": r.beta_id, "min_wt": r.min_wt, "delta": r.delta, "lcd_sufficient": r.lcd_sufficient,
             "lcd_exact": r.lcd_exact, "exact_scan": r.exact_scan}
            for r in rows
        ]
        emit_report(summary, "json", args.output)
    elif args.summary:
        emit_report(summary, "json", args.summary)
    ok = len(rows) == formula and all(r.lcd_exact for r in rows)
    ok = ok and all(a["size"] <= b["size"] for a, b in zip(sizes, sizes[1:]))
    return 0 if ok else 1


def cmd_mindist(args) -> int:
    prime_power(args.q)
    G = GroupSpec.parse(args.group)
    F = build_field(*_quad(args.q))
    beta = deserialize(F, G, args.beta)
    code = lcd_field.code_from_pair(AlgebraElem.one(F, G), beta)
    if F.order**G.n > lcd_field.SCAN_CAP or args.sampled:
        if not args.sampled:
            raise lcd_field.CapExceeded("exact scan cap exceeded; pass --sampled for an upper bound")
        mw = lcd_field.min_weight_sampled(code, args.trials, args.seed)
        upper = True
    else:
        mw = lcd_field.min_weight_one_beta(F, G, beta.coeffs)
        upper = False
    out = _header(args) | {
        "beta": args.beta,
        "min_wt": mw,
        "delta": Fraction(mw, 2 * G.n),
        "upper_bound": upper,
        "lcd_exact": lcd_field.exact_lcd_check(code),
    }
    emit_report(out, "json", args.output)
    return 0


def _quad(q: int) -> tuple[int, int]:
    p, m = prime_power(q)
    return p, 2 * m


def cmd_bounds(args) -> int:
    S = _system(args)
    lam = _lambda(args, S)
    total, _ = lcd_field.count_D_lambda(S, lam)
    delta = Fraction(args.delta[0]) if args.delta else Fraction(1, 10)
    census = None
    if args.census:
        rows = lcd_field.census_rows(S, lam, threads=_threads(args))
        census = lcd_field.census_le_delta(rows, delta)
    rep = asy.thm311_bound(S, delta, lam, census, total)
    c41 = asy.cor41_check(S, lam)
    rep.lower_bound = c41.lower_bound
    rep.exact_count = c41.exact_count
    rep.cor41_hypothesis = c41.cor41_hypothesis
    rep.cor41_holds = c41.cor41_holds
    out = _header(args) | rep.as_dict()
    out["entropy_approx"] = asy.entropy_hq(S.q, delta)
    mgd = asy.max_good_delta(S.q, S.group.n, S.mu)
    out["max_good_delta"] = mgd if mgd is not None else "none-available"
    emit_report(out, "json", args.output)
    violated = (c41.cor41_hypothesis and not c41.cor41_holds) or rep.bound_holds_vs_census is False
    return 1 if violated else 0


def cmd_scan_lengths(args) -> int:
    rows = asy.scan_lengths(args.q, args.max_n)
    emit_report((["n", "mu", "ratio_approx"], [[r.n, r.mu, f"{r.ratio:.12f}"] for r in rows]), "csv", args.output)
    return 0


def cmd_lift(args) -> int:
    S = build_chain_ring(args.ring)
    G = GroupSpec.parse(args.group)
    beta = deserialize(S.residue_field, G, args.beta)
    rep = lcd_chain.lift_code(S, beta, args.mode, sampled=args.sampled, seed=args.seed, trials=args.trials)
    out = _header(args) | asdict(rep)
    emit_report(out, "json", args.output)
    ok = rep.residue_identity and rep.chain_params[1] == G.n
    if rep.lcd_direct is not None:
        ok = ok and rep.lcd_direct == rep.lcd_residue
        ok = ok and (not rep.lcd_unit_criterion or rep.lcd_direct)
    if rep.chain_min_wt_exact:
        ok = ok and rep.chain_params[2] == rep.residue_params[2]
    return 0 if ok else 1


def cmd_verify(args) -> int:
    from . import verify

    suite = {
        "field": verify.field_suite,
        "counting": verify.counting_suite,
        "chain": verify.chain_suite,
        "bounds": verify.bounds_suite,
    }[args.suite]
    checks = suite(args, threads=_threads(args))
    out = _header(args) | {
        "suite": args.suite,
        "checks": [{"name": n, "ok": bool(ok)} for n, ok in checks],
        "ok": all(ok for _, ok in checks),
    }
    emit_report(out, "json", args.output)
    return 0 if out["ok"] else 1


# -- parser -----------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="qaclcd", description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, *, field=True, lam=False, seed=False):
        if field:
            sp.add_argument("--q", type=int, required=True, help="base field order q (F = F_{q^2})")
            sp.add_argument("--group", required=True, help="invariant factors, e.g. 7 or 3,3")
        if lam:
            sp.add_argument("--lambda", dest="lam", type=int, default=None,
                            help="integer code of lambda in F (default: smallest admissible)")
        if seed:
            sp.add_argument("--seed", type=int, default=0)
            sp.add_argument("--sampled", action="store_true", help="allow sampled upper bounds beyond caps")
            sp.add_argument("--trials", type=int, default=10_000)
        sp.add_argument("--threads", type=int, default=1, help="worker threads (QACLCD_THREADS overrides)")
        sp.add_argument("--output", "-o", default=None, help="output path (default stdout)")
        sp.add_argument("-v", "--verbose", action="store_true")

    sp = sub.add_parser("idempotents", help="primitive idempotents and their tau classification")
    common(sp)
    sp.set_defaults(func=cmd_idempotents)

    sp = sub.add_parser("enumerate", help="list D_lambda")
    common(sp, lam=True, seed=True)
    sp.add_argument("--weights", action="store_true", help="include exact minimum weights")
    sp.add_argument("--oracle", action="store_true", help="also run the brute-force count")
    sp.add_argument("--summary", default=None, help="path for the JSON summary")
    sp.set_defaults(func=cmd_enumerate)

    sp = sub.add_parser("census", help="minimum-weight census of D_lambda")
    common(sp, lam=True, seed=True)
    sp.add_argument("--delta", action="append", help="threshold(s) as rationals, e.g. 1/2")
    sp.add_argument("--format", choices=["csv", "json"], default="csv")
    sp.add_argument("--oracle", action="store_true")
    sp.add_argument("--summary", default=None, help="path for the JSON summary (csv format)")
    sp.set_defaults(func=cmd_census)

    sp = sub.add_parser("mindist", help="minimum weight of C_{1,beta}")
    common(sp, seed=True)
    sp.add_argument("--beta", required=True, help="serialized beta, most significant group index first")
    sp.set_defaults(func=cmd_mindist)

    sp = sub.add_parser("bounds", help="counting bounds at a given delta")
    common(sp, lam=True)
    sp.add_argument("--delta", action="append")
    sp.add_argument("--census", action="store_true", help="compare against an exact census")
    sp.set_defaults(func=cmd_bounds)

    sp = sub.add_parser("scan-lengths", help="cyclic lengths sorted by log_q n / mu_q(n)")
    sp.add_argument("--q", type=int, required=True)
    sp.add_argument("--max-n", type=int, required=True)
    sp.add_argument("--threads", type=int, default=1)
    sp.add_argument("--output", "-o", default=None)
    sp.add_argument("-v", "--verbose", action="store_true")
    sp.set_defaults(func=cmd_scan_lengths)

    sp = sub.add_parser("lift", help="lift C_{1,beta} to a chain ring")
    common(sp, field=False, seed=True)
    sp.add_argument("--ring", required=True, help='e.g. "uA:q=2,s=2" or "gr:p=3,s=2,m=1"')
    sp.add_argument("--group", required=True)
    sp.add_argument("--beta", required=True)
    sp.add_argument("--mode", choices=["naive", "teichmuller"], default="naive")
    sp.set_defaults(func=cmd_lift)

    sp = sub.add_parser("verify", help="run an invariant battery")
    sp.add_argument("--suite", choices=["field", "chain", "counting", "bounds"], required=True)
    sp.add_argument("--q", type=int, default=3)
    sp.add_argument("--group", default="5")
    sp.add_argument("--lambda", dest="lam", type=int, default=None)
    sp.add_argument("--ring", default=None, help="chain suite ring (default uA:q=<q>,s=2)")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--trials", type=int, default=20)
    sp.add_argument("--threads", type=int, default=1)
    sp.add_argument("--output", "-o", default=None)
    sp.add_argument("-v", "--verbose", action="store_true")
    sp.set_defaults(func=cmd_verify)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.ERROR, format="%(levelname)s %(message)s")
    try:
        return args.func(args)
    except (ValueError, OverflowError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
