"""Command-line front end.

    paracount count --route rank2 --shape 0,0 --profile 1,1,1,1
    paracount count --route brute --q 2 --shape 1,0 --profile 1,1,1 --flags full
    paracount verify --suite hua --q 2 --nmax 2 --profile 1,1,1

Reports are JSON on stdout (sorted keys, exact numbers, ascending coefficient
lists).  Failures print {"error": ..., "message": ...} and exit with status 2;
a verification that runs but does not hold exits with status 1.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys
from fractions import Fraction

from . import formula, higgs, paracount
from .bundle import BundleShape, Divisor, divisor_for_profile
from .ff import ClosedPoint, FieldError, field_of_size
from .ffmat import CapExceeded
from .partitions import normalize, parse_partition, partitions
from .qfunc import evaluate, to_json, to_str
from .symfunc import kostka_foulkes, kostka_oracle


def _ints(text: str) -> tuple:
    return tuple(int(x) for x in text.split(",") if x.strip())


def _multipartition(text: str) -> tuple:
    return tuple(parse_partition(p) for p in text.split("/"))


def _num(x):
    x = Fraction(x)
    return int(x) if x.denominator == 1 else [x.numerator, x.denominator]


def _poly_report(f, qs) -> dict:
    return {"polynomial": to_json(f), "text": to_str(f),
            "evaluations": {str(q): _num(evaluate(f, q)) for q in qs}}


class Instance:
    """Parsed instance flags shared by the subcommands."""

    def __init__(self, args):
        self.q = getattr(args, "q", None)
        self.shape = BundleShape.parse(args.shape) if getattr(args, "shape", None) else None
        self.points = getattr(args, "points", None)
        self.profile = _ints(args.profile) if getattr(args, "profile", None) else None
        if self.points and self.profile is None:
            self.profile = tuple(1 if p.strip() == "inf" else len(_ints(p)) - 1 for p in self.points.split(";"))
        self.mu = self._mu(args)

    def _mu(self, args):
        text = getattr(args, "mu", None)
        if text:
            return tuple(normalize(p) for p in _multipartition(text))
        flags = getattr(args, "flags", None)
        if flags and self.shape is not None and self.profile is not None:
            return paracount.full_flags(self.shape.rank, len(self.profile))
        return None

    def divisor(self) -> Divisor:
        if self.q is None:
            raise ValueError("--q is required for this route")
        F = field_of_size(self.q)
        if self.points:
            pts = []
            for p in self.points.split(";"):
                p = p.strip()
                pts.append(ClosedPoint.infinity(F) if p == "inf" else ClosedPoint(F, _ints(p)))
            return Divisor(F, tuple(pts))
        return divisor_for_profile(F, self.profile, allow_infinity=True)

    def inputs(self) -> dict:
        out = {}
        if self.q is not None:
            out["q"] = self.q
        if self.shape is not None:
            out["shape"] = str(self.shape)
        if self.profile is not None:
            out["profile"] = list(self.profile)
        if self.mu is not None:
            out["mu"] = [list(p) for p in self.mu]
        return out


# ---------------------------------------------------------------------------
# subcommands


def cmd_count(args) -> dict:
    inst = Instance(args)
    if inst.mu is None and args.route == "rank2" and inst.profile is not None:
        inst.mu = paracount.full_flags(2, len(inst.profile))
    if inst.mu is None:
        raise ValueError("give --mu or --flags full")
    rep = {"command": "count", "route": args.route, "inputs": inst.inputs()}
    if args.route in ("brute", "twist"):
        D = inst.divisor()
        rep["inputs"]["divisor"] = str(D)
        if args.route == "brute":
            rep["value"] = paracount.count_A_direct(inst.shape, D, inst.mu)
        else:
            rep["value"] = paracount.count_A_twist(inst.shape, D, inst.mu)
        return rep
    if args.route == "formula":
        f = formula.a_formula(inst.shape, inst.profile, inst.mu)
    else:
        if inst.shape.rank != 2:
            raise ValueError("rank2 route needs a rank-2 shape")
        if any(p != (1, 1) for p in inst.mu):
            raise ValueError("rank2 route covers full flags only")
        degs = inst.shape.degrees()
        a, b = degs[0], degs[-1]
        f = formula.rank2_closed(a, b, inst.profile)
    rep.update(_poly_report(f, [inst.q] if inst.q else []))
    return rep


def cmd_higgs(args) -> dict:
    inst = Instance(args)
    D = inst.divisor()
    rep = {"command": "higgs", "route": args.route, "inputs": inst.inputs()}
    rep["inputs"]["divisor"] = str(D)
    if args.twisted:
        lam = tuple(normalize(p) for p in _multipartition(args.twisted))
        rep["inputs"]["lambda"] = [list(p) for p in lam]
        if args.route == "verify":
            rep["report"] = higgs.verify_lasttheo(inst.shape, D, lam)
            rep["ok"] = rep["report"]["ok"]
            return rep
        patterns = [higgs.twisted_pattern(p) for p in lam]
    else:
        if inst.mu is None:
            raise ValueError("give --mu, --flags full or --twisted")
        if args.route == "verify":
            rep["report"] = higgs.verify_maintheo(inst.shape, D, inst.mu)
            rep["ok"] = rep["report"]["ok"]
            return rep
        patterns = [higgs.split_pattern(p) for p in inst.mu]
    specs = higgs.find_generic(D, patterns)
    rep["orbits"] = [str(s) for s in specs]
    rep["d"] = higgs.d_dim(specs, D.degrees)
    if args.route == "direct":
        rep["y"] = higgs.y_count(inst.shape, D, specs)
        rep["x"] = D.base.size ** inst.shape.delta * rep["y"]
    else:
        rep["x"] = higgs.fourier_count(inst.shape, D, specs)
    rep["paut"] = higgs.paut_order(inst.shape, D.base.size)
    rep["x_over_paut"] = _num(Fraction(rep["x"], rep["paut"]))
    return rep


def cmd_verify(args) -> dict:
    inst = Instance(args)
    suite = args.suite
    rep = {"command": "verify", "suite": suite, "inputs": inst.inputs()}
    if suite == "hua":
        bs = _ints(args.b) if args.b else (0,)
        res = formula.verify_hua(args.q, args.nmax, bs, inst.profile)
    elif suite == "descent":
        res = formula.descent_check(inst.shape, inst.profile, inst.mu, args.q)
    elif suite == "position":
        res = paracount.position_check(inst.shape, inst.profile, inst.mu, args.q)
    elif suite == "degree-sum":
        n = args.n
        mu = inst.mu or paracount.full_flags(n, len(inst.profile))
        got = formula.degree_sum_A(n, args.d, inst.profile, mu)
        res = {"sum": to_json(got), "text": to_str(got)}
        if n == 2 and all(p == (1, 1) for p in mu):
            want = formula.sumind_closed(inst.profile)
            res["closed_form"] = to_json(want)
            res["ok"] = got == want
    elif suite == "charsum":
        res = higgs.charsum_check(inst.shape, inst.divisor(), inst.mu)
    else:
        rows, ok = [], True
        for n in range(1, args.n + 1):
            oracle = kostka_oracle(n)
            for (nu, lam), f in sorted(oracle.items()):
                g = kostka_foulkes(nu, lam)
                rows.append({"nu": list(nu), "lambda": list(lam), "charge": to_json(g), "oracle": to_json(f)})
                ok = ok and f == g
        res = {"rows": rows, "ok": ok}
    rep["report"] = res
    if "ok" in res:
        rep["ok"] = bool(res["ok"])
    return rep


def cmd_kostka(args) -> dict:
    if args.nu:
        nu, lam = parse_partition(args.nu), parse_partition(args.lam)
        f = kostka_foulkes(nu, lam)
        return {"command": "kostka", "nu": list(nu), "lambda": list(lam), "polynomial": to_json(f), "text": to_str(f)}
    rows = []
    for nu in partitions(args.n):
        for lam in partitions(args.n):
            f = kostka_foulkes(nu, lam)
            rows.append({"nu": list(nu), "lambda": list(lam), "polynomial": to_json(f)})
    return {"command": "kostka", "n": args.n, "rows": rows}


def cmd_pair(args) -> dict:
    inst = Instance(args)
    if inst.mu is None:
        raise ValueError("give --mu or --flags full")
    if args.basis == "h":
        f = formula.a_formula(inst.shape, inst.profile, inst.mu)
    else:
        f = formula.pair_with_power(inst.shape, inst.profile, inst.mu)
    rep = {"command": "pair", "basis": args.basis, "inputs": inst.inputs()}
    rep.update(_poly_report(f, [inst.q] if inst.q else []))
    return rep


# ---------------------------------------------------------------------------
# plumbing


def _instance_flags(p, q_required=False):
    p.add_argument("--q", type=int, required=q_required, help="field size")
    p.add_argument("--shape", help="degrees of the line bundle summands, e.g. 1,0")
    p.add_argument("--profile", help="point degrees, e.g. 2,1,1")
    p.add_argument("--points", help="explicit points: ascending monic coefficients or inf, ';'-separated")
    p.add_argument("--mu", help="multipartition, e.g. 1.1/2/11")
    p.add_argument("--flags", choices=["full", "borel"], help="full flags at every point")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="paracount", description="Counts of quasi-parabolic structures on P^1.")
    parser.add_argument("--csv", help="also write the report as CSV to this path")
    parser.add_argument("--cache", help="directory for interpolated H-polynomials")
    parser.add_argument("--jobs", type=int, default=os.cpu_count() or 1)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("count", help="count geometrically indecomposable structures")
    p.add_argument("--route", choices=["brute", "twist", "formula", "rank2"], default="formula")
    _instance_flags(p)
    p.set_defaults(func=cmd_count)

    p = sub.add_parser("higgs", help="Higgs field point counts")
    p.add_argument("--route", choices=["direct", "fourier", "verify"], default="direct")
    p.add_argument("--twisted", help="cycle types for twisted regular orbits, e.g. 2/11/11")
    _instance_flags(p, q_required=True)
    p.set_defaults(func=cmd_higgs)

    p = sub.add_parser("verify", help="run a verification suite")
    p.add_argument("--suite", required=True,
                   choices=["hua", "descent", "position", "degree-sum", "charsum", "kostka-oracle"])
    p.add_argument("--nmax", type=int, default=2)
    p.add_argument("--b", help="bundle degrees used by the hua suite, e.g. 0 or 1,0")
    p.add_argument("--n", type=int, default=2)
    p.add_argument("--d", type=int, default=0)
    _instance_flags(p)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("kostka", help="modified Kostka-Foulkes polynomials")
    p.add_argument("--nu")
    p.add_argument("--lam")
    p.add_argument("--n", type=int, default=2)
    p.set_defaults(func=cmd_kostka)

    p = sub.add_parser("pair", help="Hall pairing with h_mu or p_lambda")
    p.add_argument("--basis", choices=["h", "p"], default="h")
    _instance_flags(p)
    p.set_defaults(func=cmd_pair)
    return parser


def _flatten(prefix, value, out):
    if isinstance(value, dict):
        for k in sorted(value):
            _flatten(f"{prefix}.{k}" if prefix else str(k), value[k], out)
    else:
        out.append((prefix, json.dumps(value, sort_keys=True)))


def write_csv(path: str, report: dict):
    rows = []
    _flatten("", report, rows)
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["field", "value"])
        w.writerows(rows)


ERRORS = (CapExceeded, FieldError, ValueError, ArithmeticError, formula.FormulaError,
          paracount.NoTwistCharacter, higgs.GenericityError)


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    formula.set_jobs(args.jobs)
    if args.cache:
        formula.set_cache_dir(args.cache)
    try:
        report = args.func(args)
    except ERRORS as exc:
        print(json.dumps({"error": type(exc).__name__, "message": str(exc)}, sort_keys=True))
        return 2
    print(json.dumps(report, sort_keys=True, indent=2))
    if args.csv:
        write_csv(args.csv, report)
    return 1 if report.get("ok") is False else 0


if __name__ == "__main__":
    sys.exit(main())
