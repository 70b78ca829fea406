"""Command-line entry point: ``squadb {verify,bound,identity,means,tightness}``."""

import argparse
import csv
import json
import sys

from .bounds import (DerivData, ExponentPair, bound_concave, bound_holder,
                     bound_power_mean, classic_ostrowski, ostrowski_bound)
from .catalog import lookup
from .errors import SquadbError
from .harness import run_suite, tightness_scan
from .means import proposition_table
from .oracle import OracleConfig
from .rules import Interval, RuleParams, deviation, identity_rhs


def _function(args):
    params = {}
    for item in args.param or ():
        key, _, val = item.partition("=")
        params[key] = float(val)
    if getattr(args, "s", None) is not None:
        params.setdefault("s", args.s)
    return lookup(args.function, **params)


def _add_function_args(p):
    p.add_argument("--function", required=True, help="catalog entry name")
    p.add_argument("--param", action="append", metavar="KEY=VALUE",
                   help="family parameter used to pick a catalog entry")
    p.add_argument("--a", type=float, required=True)
    p.add_argument("--b", type=float, required=True)
    p.add_argument("--lambda", dest="lam", type=float, default=0.5)
    p.add_argument("--theta", type=float, default=0.0)


def cmd_verify(args, out):
    report = run_suite(cfg=OracleConfig.from_env())
    text = report.to_json()
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        out.write(text)
    counts = report.counts
    print(f"pass={counts['pass']} fail={counts['fail']} skipped={counts['skipped']}",
          file=sys.stderr)
    return 0 if counts["fail"] == 0 else 1


def cmd_tightness(args, out):
    report = tightness_scan(cfg=OracleConfig.from_env())
    text = report.to_csv()
    if args.top:
        text = "\n".join(text.splitlines()[:args.top + 1]) + "\n"
    out.write(text)
    return 0 if report.counts["fail"] == 0 else 1


def cmd_bound(args, out):
    fn = _function(args)
    iv = Interval(args.a, args.b)
    rp = RuleParams(args.lam, args.theta)
    s = args.s if args.s is not None else 1.0
    dd = DerivData.from_derivative(fn.fp, iv, rp)
    if args.engine == "power_mean":
        res = bound_power_mean(dd, iv, rp, s, args.q).as_dict()
    elif args.engine in ("holder", "concave"):
        pq = ExponentPair(args.q, args.p) if args.p else ExponentPair.conjugate(args.q)
        engine = bound_holder if args.engine == "holder" else bound_concave
        res = engine(dd, iv, rp, s, pq).as_dict()
    else:
        x = rp.node(iv)
        M = fn.deriv_sup(iv.a, iv.b)
        if args.engine == "classic_ostrowski":
            value = classic_ostrowski(M, x, iv)
        else:
            variant = {"ostrowski_pm": "power_mean", "ostrowski_holder": "holder",
                       "ostrowski_concave": "concave_point_values"}[args.engine]
            value = ostrowski_bound(M, x, iv, s, args.q, variant, p=args.p,
                                    d_left_mid=abs(fn.fp((x + iv.a) / 2)),
                                    d_right_mid=abs(fn.fp((x + iv.b) / 2)))
        res = {"value": value, "engine": args.engine, "terms": {"M": M, "x": x},
               "params": {"a": iv.a, "b": iv.b, "lambda": rp.lam, "theta": 1.0,
                          "s": s, "q": args.q}}
    dev, err = deviation(fn.f, iv, rp, OracleConfig.from_env())
    res["function"] = fn.label
    res["deviation"] = dev
    res["oracle_err_estimate"] = err
    out.write(json.dumps(res, sort_keys=True, indent=1) + "\n")
    return 0


def cmd_identity(args, out):
    fn = _function(args)
    iv = Interval(args.a, args.b)
    rp = RuleParams(args.lam, args.theta)
    cfg = OracleConfig.from_env()
    lhs, _ = deviation(fn.f, iv, rp, cfg)
    rhs, _ = identity_rhs(fn.fp, iv, rp, cfg)
    out.write(f"function  {fn.label}\n")
    out.write(f"deviation {lhs!r}\n")
    out.write(f"identity  {rhs!r}\n")
    out.write(f"residual  {abs(lhs - rhs)!r}\n")
    return 0


def cmd_means(args, out):
    rows = proposition_table()
    fields = list(rows[0])
    writer = csv.DictWriter(out, fieldnames=fields, lineterminator="\n")
    writer.writeheader()
    for row in rows:
        writer.writerow({k: repr(v) for k, v in row.items()})
    bad = sum(1 for r in rows if r["lhs"] > min(r["rhs_prop1"], r["rhs_prop2"]) + 1e-10)
    return 0 if bad == 0 else 1


def build_parser():
    parser = argparse.ArgumentParser(prog="squadb", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("verify", help="run the full verification suite (JSON report)")
    p.add_argument("--out", help="write the report here instead of stdout")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("tightness", help="cases sorted by lhs/rhs (CSV)")
    p.add_argument("--top", type=int, default=0, help="only print the first N rows")
    p.set_defaults(func=cmd_tightness)

    p = sub.add_parser("bound", help="evaluate one bound engine (JSON)")
    _add_function_args(p)
    p.add_argument("--s", type=float, default=None)
    p.add_argument("--q", type=float, default=1.0)
    p.add_argument("--p", type=float, default=None)
    p.add_argument("--engine", default="power_mean",
                   choices=["power_mean", "holder", "concave", "ostrowski_pm",
                            "ostrowski_holder", "ostrowski_concave", "classic_ostrowski"])
    p.set_defaults(func=cmd_bound)

    p = sub.add_parser("identity", help="both sides of the deviation identity")
    _add_function_args(p)
    p.add_argument("--s", type=float, default=None, help="family parameter")
    p.set_defaults(func=cmd_identity)

    p = sub.add_parser("means", help="mean-inequality table over the standard grid (CSV)")
    p.set_defaults(func=cmd_means)
    return parser


def main(argv=None, out=None):
    out = out or sys.stdout
    args = build_parser().parse_args(argv)
    try:
        return args.func(args, out)
    except SquadbError as exc:
        print(f"squadb: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
