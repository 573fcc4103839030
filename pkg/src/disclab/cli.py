"""Command line front end.

    disclab <gen|lift|compute|oracle|scan|verify> [flags]

All floating-point output is printed with 17 significant digits and every
random quantity is driven by an explicit or default seed, so identical
invocations produce byte-identical output. DISCLAB_THREADS (or --threads)
caps worker threads for Monte Carlo sampling; results do not depend on the
cap. Exit codes: 0 success, 1 domain error, 2 usage error, 3 a verification
verdict failed.
"""

from __future__ import annotations

import argparse
import io
import json
import math
import sys
from typing import Sequence

from .errors import DisclabError
from .exact_l2 import diaphony, extreme_l2, periodic_l2, star_l2
from .experiments import (
    diaphony_scan,
    fit_log_exponent,
    growth_scan,
    inequality_suite,
    prefix_transference_verify,
    vdc_exponent_report,
    vdc_star_constant,
)
from .lp_oracle import McConfig, exact_lp_1d, linf_estimate, mc_lp
from .pointsets import (
    METHOD_CLOSED_FORM,
    METHOD_PIECEWISE,
    Estimate,
    PointSet,
    read_points,
    write_points,
)
from .rng import DEFAULT_SEED
from .sequences import Halton, VanDerCorput, lift, prefix

USAGE_ERROR = 2
DOMAIN_ERROR = 1
VERDICT_FAILED = 3

_JSON_KEYS = ("kind", "p", "method", "value", "stderr", "samples", "seed", "n", "d")


def _fmt(x) -> str:
    if x is None:
        return "null"
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, float):
        if math.isinf(x):
            return '"inf"'
        return f"{x:.17g}"
    if isinstance(x, int):
        return str(x)
    return json.dumps(x)


def _estimate_json(est: Estimate) -> str:
    vals = {
        "kind": est.kind,
        "p": float(est.p),
        "method": est.method,
        "value": est.value,
        "stderr": est.stderr,
        "samples": est.samples,
        "seed": est.seed,
        "n": est.n,
        "d": est.d,
    }
    body = ", ".join(f'"{k}": {_fmt(vals[k])}' for k in _JSON_KEYS)
    return "{" + body + "}"


def _write(text: str, out_path: str | None) -> None:
    if out_path:
        with open(out_path, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _make_generator(family: str, base: int, bases: str) -> VanDerCorput | Halton:
    if family == "vdc":
        return VanDerCorput(base=base)
    if family == "halton":
        return Halton(tuple(int(b) for b in bases.split(",")))
    raise DisclabError(f"unknown sequence family {family!r}")


def _parse_ns(text: str) -> list[int]:
    """Grammar: 'a..b:geometric[:factor]' (factor default 2),
    'a..b:linear[:step]', or a comma list of integers."""
    if ".." in text:
        rng, _, sched = text.partition(":")
        a_s, _, b_s = rng.partition("..")
        try:
            a, b = int(a_s), int(b_s)
        except ValueError:
            raise DisclabError(f"bad range in --ns: {text!r}") from None
        name, _, par = sched.partition(":")
        if name in ("", "geometric"):
            factor = float(par) if par else 2.0
            if factor <= 1.0:
                raise DisclabError("geometric factor must be > 1")
            out, x = [], float(a)
            while round(x) <= b:
                out.append(int(round(x)))
                x *= factor
            return sorted(set(out))
        if name == "linear":
            step = int(par) if par else max(1, (b - a) // 32)
            return list(range(a, b + 1, step))
        raise DisclabError(f"unknown schedule {name!r} in --ns")
    try:
        return sorted({int(tok) for tok in text.split(",")})
    except ValueError:
        raise DisclabError(f"bad --ns list: {text!r}") from None


def _parse_p(text: str) -> float:
    if text.lower() in ("inf", "infinity", "oo"):
        return math.inf
    try:
        p = float(text)
    except ValueError:
        raise DisclabError(f"bad --p value {text!r}") from None
    if p < 1.0:
        raise DisclabError("p must satisfy p >= 1")
    return p


def _load_points(args) -> PointSet:
    pts = read_points(args.infile)
    pts.require_nonempty()
    return pts


def _emit_points(pts: PointSet, out_path: str | None) -> None:
    buf = io.StringIO()
    write_points(pts, buf)
    _write(buf.getvalue(), out_path)


# --------------------------------------------------------------------------
# subcommands
# --------------------------------------------------------------------------


def _cmd_gen(args) -> int:
    gen = _make_generator(args.kind, args.base, args.bases)
    _emit_points(prefix(gen, args.n), args.out)
    return 0


def _cmd_lift(args) -> int:
    gen = _make_generator(args.kind, args.base, args.bases)
    _emit_points(lift(gen, args.n), args.out)
    return 0


def _cmd_compute(args) -> int:
    pts = _load_points(args)
    p = _parse_p(args.p)
    kind = args.kind
    if math.isinf(p):
        if kind not in ("star", "extreme"):
            raise DisclabError("p=inf supports kinds star and extreme only")
        est = linf_estimate(pts, kind)
    elif kind == "diaphony":
        if p != 2.0:
            raise DisclabError("diaphony is a quadratic quantity; use --p 2")
        est = Estimate(kind, 2.0, diaphony(pts), METHOD_CLOSED_FORM, pts.n, pts.d)
    elif p == 2.0:
        fn = {"star": star_l2, "extreme": extreme_l2, "periodic": periodic_l2}[kind]
        est = Estimate(kind, 2.0, fn(pts), METHOD_CLOSED_FORM, pts.n, pts.d)
    else:
        if pts.d != 1 or kind not in ("star", "extreme"):
            raise DisclabError(
                "exact evaluation for p not in {2, inf} exists only for star/extreme "
                "in d=1; use the oracle subcommand"
            )
        est = Estimate(kind, p, exact_lp_1d(pts, kind, p), METHOD_PIECEWISE, pts.n, pts.d)
    if args.format == "json":
        _write(_estimate_json(est) + "\n", args.out)
    else:
        header = ",".join(_JSON_KEYS)
        row = ",".join(
            _fmt(v).strip('"')
            for v in (
                est.kind, float(est.p), est.method, est.value,
                est.stderr, est.samples, est.seed, est.n, est.d,
            )
        )
        _write(header + "\n" + row + "\n", args.out)
    return 0


def _cmd_oracle(args) -> int:
    pts = _load_points(args)
    p = _parse_p(args.p)
    if math.isinf(p):
        raise DisclabError("the Monte Carlo oracle requires finite p; use compute for p=inf")
    cfg = McConfig(kind=args.kind, p=p, samples=args.samples, seed=args.seed,
                   threads=args.threads)
    est = mc_lp(pts, cfg)
    _write(_estimate_json(est) + "\n", args.out)
    return 0


def _cmd_scan(args) -> int:
    gen = _make_generator(args.seq, args.base, args.bases)
    ns = _parse_ns(args.ns)
    p = _parse_p(args.p)
    mc = None
    if args.samples and args.kind != "diaphony":
        mc = McConfig(kind=args.kind, p=p, samples=args.samples, seed=args.seed)
    if args.kind == "diaphony":
        result = diaphony_scan(gen, ns)
    else:
        result = growth_scan(gen, args.kind, p, ns, mc)
    if args.format == "json":
        payload = result.to_dict()
        if len(result.rows) >= 3 and min(r.n for r in result.rows) >= 3:
            alpha, c, rms = fit_log_exponent(result.rows)
            payload["fit"] = {"alpha": alpha, "c": c, "rms": rms}
        _write(json.dumps(payload, indent=2, sort_keys=True) + "\n", args.out)
    else:
        lines = ["N,value,rate,ratio"]
        for r in result.rows:
            lines.append(f"{r.n},{r.value:.17g},{r.rate:.17g},{r.ratio:.17g}")
        _write("\n".join(lines) + "\n", args.out)
    if args.plot_data:
        d = gen.d
        lines = ["N,log_n_pow_d_half,log_n,sqrt_log_n"]
        for r in result.rows:
            ln = math.log(r.n)
            lines.append(f"{r.n},{ln ** (d / 2.0):.17g},{ln:.17g},{math.sqrt(ln):.17g}")
        with open(args.plot_data, "w", encoding="utf-8") as fh:
            fh.write("\n".join(lines) + "\n")
    return 0


def _cmd_verify(args) -> int:
    if args.suite == "inequalities":
        rep = inequality_suite(
            trials=args.trials,
            dims=tuple(int(x) for x in args.dims.split(",")),
            n=args.n,
            seed=args.seed,
        )
        report = rep.to_dict()
        failed = not rep.passed
    elif args.suite == "lemma1":
        gen = _make_generator(args.seq, args.base, args.bases)
        rep = prefix_transference_verify(gen, args.n)
        report = rep.to_dict()
        failed = not rep.passed
    elif args.suite == "vdc-constant":
        rep = vdc_star_constant(args.max_n)
        report = rep.to_dict()
        checkpoints = sorted(rep.checkpoint_sups.items(), key=lambda kv: int(kv[0]))
        monotone = all(
            checkpoints[i][1] <= checkpoints[i + 1][1] + 1e-12
            for i in range(len(checkpoints) - 1)
        )
        checks = {
            # the raw sup carries a +O(1/log n) excess over the limit and
            # stays above it at any reachable n; reported for transparency
            "sup_le_target_plus_0.005": rep.sup_ratio <= rep.target + 0.005,
            "running_sup_monotone": monotone,
            "envelope_slope_matches_target_1pct": abs(rep.envelope_slope - rep.target)
            <= 0.01 * rep.target,
        }
        report["checks"] = checks
        failed = not all(checks.values())
    elif args.suite == "growth":
        report = vdc_exponent_report(max_n=args.max_n)
        checks = {
            "extreme_alpha_in_[0.4,0.6]": 0.4 <= report["fits"]["extreme"]["alpha"] <= 0.6,
            "n_diaphony_alpha_in_[0.4,0.6]": 0.4
            <= report["fits"]["n_diaphony"]["alpha"]
            <= 0.6,
            "star_alpha_in_[0.9,1.1]": 0.9 <= report["fits"]["star"]["alpha"] <= 1.1,
        }
        report["checks"] = checks
        failed = not all(checks.values())
    else:  # pragma: no cover - argparse restricts choices
        raise DisclabError(f"unknown suite {args.suite!r}")
    _write(json.dumps(report, indent=2, sort_keys=True) + "\n", args.out)
    return VERDICT_FAILED if failed else 0


# --------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="disclab",
        description="Star, extreme and periodic L_p discrepancies and diaphony "
        "of point sets in the unit cube, plus growth experiments.",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen", help="emit a sequence prefix as CSV points")
    g.add_argument("--kind", choices=("vdc", "halton"), default="vdc")
    g.add_argument("--base", type=int, default=2, help="radical-inverse base (vdc)")
    g.add_argument("--bases", default="2,3", help="comma separated coprime bases (halton)")
    g.add_argument("--n", type=int, required=True)
    g.add_argument("--out", default=None)
    g.set_defaults(fn=_cmd_gen)

    l = sub.add_parser("lift", help="emit the lifted (d+1)-dim prefix as CSV")
    l.add_argument("--kind", choices=("vdc", "halton"), default="vdc")
    l.add_argument("--base", type=int, default=2)
    l.add_argument("--bases", default="2,3")
    l.add_argument("--n", type=int, required=True)
    l.add_argument("--out", default=None)
    l.set_defaults(fn=_cmd_lift)

    c = sub.add_parser("compute", help="exact discrepancy of a CSV point set")
    c.add_argument("--kind", required=True,
                   choices=("star", "extreme", "periodic", "diaphony"))
    c.add_argument("--p", default="2", help="p in [1, inf]; 'inf' for the supremum")
    c.add_argument("--in", dest="infile", required=True, help="CSV point file")
    c.add_argument("--format", choices=("json", "csv"), default="json")
    c.add_argument("--out", default=None)
    c.set_defaults(fn=_cmd_compute)

    o = sub.add_parser("oracle", help="Monte Carlo discrepancy estimate")
    o.add_argument("--kind", required=True, choices=("star", "extreme", "periodic"))
    o.add_argument("--p", default="2")
    o.add_argument("--samples", type=int, default=100000)
    o.add_argument("--seed", type=int, default=DEFAULT_SEED)
    o.add_argument("--threads", type=int, default=0,
                   help="worker cap; 0 honours DISCLAB_THREADS / cpu count")
    o.add_argument("--in", dest="infile", required=True)
    o.add_argument("--out", default=None)
    o.set_defaults(fn=_cmd_oracle)

    s = sub.add_parser("scan", help="growth scan against (log n)^{d/2}")
    s.add_argument("--seq", choices=("vdc", "halton"), default="vdc")
    s.add_argument("--base", type=int, default=2)
    s.add_argument("--bases", default="2,3")
    s.add_argument("--kind", default="extreme",
                   choices=("star", "extreme", "periodic", "diaphony"))
    s.add_argument("--p", default="2")
    s.add_argument("--ns", required=True,
                   help="'16..65536:geometric[:factor]', 'a..b:linear[:step]' or '2,4,8'")
    s.add_argument("--samples", type=int, default=0,
                   help="Monte Carlo samples for p != 2 in d >= 2")
    s.add_argument("--seed", type=int, default=DEFAULT_SEED)
    s.add_argument("--format", choices=("csv", "json"), default="csv")
    s.add_argument("--plot-data", default=None,
                   help="also write reference-rate curves to this CSV")
    s.add_argument("--out", default=None)
    s.set_defaults(fn=_cmd_scan)

    v = sub.add_parser("verify", help="run a verification suite; exit 3 on failure")
    v.add_argument("--suite", required=True,
                   choices=("inequalities", "lemma1", "vdc-constant", "growth"))
    v.add_argument("--trials", type=int, default=100)
    v.add_argument("--dims", default="1,2")
    v.add_argument("--n", type=int, default=32,
                   help="points per trial (inequalities) or max prefix (lemma1)")
    v.add_argument("--seed", type=int, default=DEFAULT_SEED)
    v.add_argument("--max-n", dest="max_n", type=int, default=1 << 14)
    v.add_argument("--seq", choices=("vdc", "halton"), default="vdc")
    v.add_argument("--base", type=int, default=2)
    v.add_argument("--bases", default="2,3")
    v.add_argument("--out", default=None)
    v.set_defaults(fn=_cmd_verify)
    return ap


def main(argv: Sequence[str] | None = None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        return args.fn(args)
    except (DisclabError, ValueError, FileNotFoundError) as exc:
        print(f"disclab: error: {exc}", file=sys.stderr)
        return DOMAIN_ERROR


if __name__ == "__main__":
    sys.exit(main())
