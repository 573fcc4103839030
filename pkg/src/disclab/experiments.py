"""Experiment drivers: inequality checks, prefix-maximum transference,
growth-rate scans, exponent fits, and the van der Corput star constant.

Each driver returns a report object that serializes to flat dicts, so the
CLI can emit them as JSON and the test suite can assert on the fields.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field

import numpy as np

from .errors import GuardError
from .exact_l2 import diaphony, extreme_l2, periodic_l2, star_l2
from .lp_oracle import (
    McConfig,
    exact_lp_1d,
    linf_exact_small,
    linf_extreme_1d,
    linf_star_1d,
    mc_lp,
)
from .prefix_scan import prefix_discrepancies
from .rng import random_point_set
from .sequences import SequenceGen, VanDerCorput, lift, prefix

__all__ = [
    "ScanRow",
    "CaseCheck",
    "VerdictReport",
    "inequality_suite",
    "prefix_transference_verify",
    "growth_scan",
    "diaphony_scan",
    "fit_log_exponent",
    "vdc_star_constant",
    "vdc_exponent_report",
    "VDC_STAR_TARGET",
]

# Inequality margins are theorems for exact evaluators; the tolerance only
# absorbs rounding.
REL_TOL = 1e-9

# limsup of star-L2 / log N along the binary radical-inverse sequence
VDC_STAR_TARGET = 1.0 / (6.0 * math.log(2.0))


@dataclass(frozen=True)
class ScanRow:
    """One scan record: value at n, the reference rate, and their ratio."""

    n: int
    value: float
    rate: float
    ratio: float


@dataclass(frozen=True)
class CaseCheck:
    claim: str
    lhs: float
    rhs: float
    margin: float
    passed: bool
    meta: dict = field(default_factory=dict)


@dataclass
class VerdictReport:
    suite: str
    cases: list[CaseCheck]
    meta: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.cases)

    @property
    def failures(self) -> list[CaseCheck]:
        return [c for c in self.cases if not c.passed]

    def to_dict(self) -> dict:
        return {
            "suite": self.suite,
            "passed": self.passed,
            "n_cases": len(self.cases),
            "n_failures": len(self.failures),
            "meta": self.meta,
            "cases": [asdict(c) for c in self.cases],
        }


def _leq(claim: str, lhs: float, rhs: float, meta: dict) -> CaseCheck:
    """lhs <= rhs up to relative tolerance; margin is rhs - lhs."""
    tol = REL_TOL * max(1.0, abs(rhs))
    return CaseCheck(claim, lhs, rhs, rhs - lhs, lhs <= rhs + tol, meta)


def inequality_suite(
    trials: int,
    dims: tuple[int, ...] = (1, 2),
    n: int = 32,
    seed: int = 0,
    keep_cases: bool = False,
) -> VerdictReport:
    """Check the order relations between the discrepancy families on seeded
    random point sets.

    Per trial: extreme <= star and extreme <= periodic at p = 2 (these hold
    with constant one); for d <= 2 and n <= 64 additionally the supremum
    sandwich star <= extreme <= 2^d star at p = infinity. Any failure beyond
    rounding tolerance indicates an implementation bug, not randomness.

    keep_cases retains every per-trial margin; otherwise only failures and
    the worst margin per claim are kept (reports stay small at thousands of
    trials).
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    cases: list[CaseCheck] = []
    worst: dict[str, CaseCheck] = {}

    def record(check: CaseCheck) -> None:
        if keep_cases or not check.passed:
            cases.append(check)
        prev = worst.get(check.claim)
        if prev is None or check.margin < prev.margin:
            worst[check.claim] = check

    for d in dims:
        for t in range(trials):
            pts = random_point_set(n, d, seed + 7919 * d + t)
            meta = {"d": d, "n": n, "trial": t, "seed": seed + 7919 * d + t}
            s2, e2, p2 = star_l2(pts), extreme_l2(pts), periodic_l2(pts)
            record(_leq("extreme_l2<=star_l2", e2, s2, meta))
            record(_leq("extreme_l2<=periodic_l2", e2, p2, meta))
            if d <= 2 and n <= 64:
                if d == 1:
                    li_s, li_e = linf_star_1d(pts), linf_extreme_1d(pts)
                else:
                    li_s = linf_exact_small(pts, "star")
                    li_e = linf_exact_small(pts, "extreme")
                record(_leq("linf_star<=linf_extreme", li_s, li_e, meta))
                record(_leq("linf_extreme<=2^d*linf_star", li_e, (2.0**d) * li_s, meta))
    report = VerdictReport(
        suite="inequalities",
        cases=cases if cases else list(worst.values()),
        meta={
            "trials": trials,
            "dims": list(dims),
            "n": n,
            "seed": seed,
            "worst_margins": {k: c.margin for k, c in worst.items()},
        },
    )
    return report


DEFAULT_LEMMA_CAP = 1024


def prefix_transference_verify(
    gen: SequenceGen,
    n_max: int,
    p: float = 2.0,
    mc: McConfig | None = None,
    n_cap: int = DEFAULT_LEMMA_CAP,
) -> VerdictReport:
    """Check the prefix-maximum transference bound.

    Lifting the first N terms of a d-dimensional sequence with the equispaced
    coordinate k/N gives an (N, d+1) point set whose extreme L_p discrepancy
    is dominated by the best prefix:

        max_{n<=N} extreme_{p,n}(sequence)
            >= 2^(1/p - 1) * extreme_{p,N}(lifted) - 2^(-d/p).

    For p = 2 both sides are exact closed forms. Other p require a Monte
    Carlo configuration; the check then allows a 3 sigma margin on top of the
    tolerance. The report carries the realized slack per N.
    """
    if n_max < 1:
        raise ValueError("n_max must be >= 1")
    if n_max > n_cap:
        raise GuardError(
            f"n_max={n_max} exceeds the cap {n_cap}; the prefix maximum costs O(N^3)"
        )
    if p != 2.0 and mc is None:
        raise ValueError("p != 2 requires a Monte Carlo config")
    d = gen.d
    cases = []
    full = prefix(gen, n_max)

    if p == 2.0:
        running = 0.0
        prefix_best: list[float] = []
        if d == 1:
            vals = prefix_discrepancies(full, kinds=("extreme",))["extreme"]
            prefix_best = np.maximum.accumulate(vals).tolist()
        else:
            for n in range(1, n_max + 1):
                running = max(running, extreme_l2(full.prefix(n)))
                prefix_best.append(running)
        for n in (2**k for k in range(0, n_max.bit_length())):
            if n > n_max:
                break
            lifted = lift(full, n)
            rhs = extreme_l2(lifted) / math.sqrt(2.0) - 2.0 ** (-d / 2.0)
            lhs = prefix_best[n - 1]
            tol = REL_TOL * max(1.0, abs(rhs))
            cases.append(
                CaseCheck(
                    "prefix_max_extreme>=transferred_bound",
                    lhs,
                    rhs,
                    lhs - rhs,
                    lhs >= rhs - tol,
                    {"n": n, "d": d, "p": p, "seq": gen.name},
                )
            )
    else:
        assert mc is not None
        best = -math.inf
        best_se = 0.0
        for n in range(1, n_max + 1):
            pf = full.prefix(n)
            if d == 1:
                v, se = exact_lp_1d(pf, "extreme", p), 0.0
            else:
                est = mc_lp(pf, McConfig("extreme", p, mc.samples, mc.seed + n))
                v, se = est.value, est.stderr or 0.0
            if v > best:
                best, best_se = v, se
        est = mc_lp(lift(full, n_max), McConfig("extreme", p, mc.samples, mc.seed))
        rhs = 2.0 ** (1.0 / p - 1.0) * est.value - 2.0 ** (-d / p)
        sigma = 3.0 * math.hypot(best_se, (est.stderr or 0.0) * 2.0 ** (1.0 / p - 1.0))
        cases.append(
            CaseCheck(
                "prefix_max_extreme>=transferred_bound(mc)",
                best,
                rhs,
                best - rhs,
                best >= rhs - sigma - REL_TOL,
                {"n": n_max, "d": d, "p": p, "seq": gen.name, "three_sigma": sigma},
            )
        )
    return VerdictReport(
        suite="lemma1",
        cases=cases,
        meta={"seq": gen.name, "n_max": n_max, "p": p, "d": d},
    )


def _rate(n: int, d: int, per_n: bool) -> float:
    r = math.log(n) ** (d / 2.0)
    return r / n if per_n else r


def _scan_values(
    gen: SequenceGen,
    kind: str,
    p: float,
    ns: list[int],
    mc: McConfig | None,
) -> dict[int, float]:
    """Discrepancy of each requested prefix length.

    p = 2 and d = 1 go through the incremental engine (one pass covers every
    prefix); p = 2 in higher dimension uses the closed forms per n; other
    finite p use exact integration in d = 1 and Monte Carlo otherwise.
    """
    n_max = max(ns)
    d = gen.d
    values: dict[int, float] = {}
    if d == 1 and (p == 2.0 or kind == "diaphony"):
        vals = prefix_discrepancies(prefix(gen, n_max), kinds=(kind,))[kind]
        return {n: float(vals[n - 1]) for n in ns}
    if p == 2.0 or kind == "diaphony":
        fn = {"star": star_l2, "extreme": extreme_l2, "periodic": periodic_l2,
              "diaphony": diaphony}[kind]
        full = prefix(gen, n_max)
        return {n: fn(full.prefix(n)) for n in ns}
    full = prefix(gen, n_max)
    for n in ns:
        pf = full.prefix(n)
        if d == 1 and kind in ("star", "extreme"):
            values[n] = exact_lp_1d(pf, kind, p)
        else:
            if mc is None:
                raise ValueError("p != 2 in d >= 2 requires a Monte Carlo config")
            values[n] = mc_lp(pf, McConfig(kind, p, mc.samples, mc.seed + n)).value
    return values


@dataclass
class ScanResult:
    rows: list[ScanRow]
    running_max: list[float]
    running_min: list[float]

    def to_dict(self) -> dict:
        return {
            "rows": [asdict(r) for r in self.rows],
            "running_max_ratio": self.running_max,
            "running_min_ratio": self.running_min,
        }


def growth_scan(
    gen: SequenceGen,
    kind: str,
    p: float,
    ns: list[int],
    mc: McConfig | None = None,
) -> ScanResult:
    """Scan prefix discrepancies against the (log n)^{d/2} reference rate.

    Only the running extremes of the ratio carry meaning: the growth floor
    holds along a subsequence, so individual ratios may dip (they do, badly,
    at prefix lengths where the sequence is unusually balanced).
    """
    ns = sorted(set(int(n) for n in ns))
    if ns[0] < 2:
        raise ValueError("scan requires n >= 2 so that log n > 0")
    per_n = kind == "diaphony"
    values = _scan_values(gen, kind, p, ns, mc)
    rows = []
    for n in ns:
        rate = _rate(n, gen.d, per_n)
        rows.append(ScanRow(n, values[n], rate, values[n] / rate))
    ratios = [r.ratio for r in rows]
    return ScanResult(
        rows,
        running_max=list(np.maximum.accumulate(ratios)),
        running_min=list(np.minimum.accumulate(ratios)),
    )


def diaphony_scan(gen: SequenceGen, ns: list[int]) -> ScanResult:
    """Diaphony against its (log n)^{d/2} / n reference rate."""
    return growth_scan(gen, "diaphony", 2.0, ns)


def fit_log_exponent(rows: list[ScanRow]) -> tuple[float, float, float]:
    """Least squares of log(value) on log(log(n)).

    Returns (alpha, c, rms): the best fit of value ~ e^c (log n)^alpha and
    the RMS residual in log space. Requires at least three rows, positive
    values, and n >= 3 so the regressor is positive.
    """
    if len(rows) < 3:
        raise ValueError("need at least 3 rows to fit")
    ns = np.array([r.n for r in rows], dtype=np.float64)
    vals = np.array([r.value for r in rows], dtype=np.float64)
    if np.any(ns < 3):
        raise ValueError("fit requires n >= 3 (log log n must be positive)")
    if np.any(vals <= 0):
        raise ValueError("fit requires positive values")
    x = np.log(np.log(ns))
    if np.allclose(x, x[0]):
        raise ValueError("degenerate fit: all n equal")
    y = np.log(vals)
    design = np.vstack([x, np.ones_like(x)]).T
    coef, *_ = np.linalg.lstsq(design, y, rcond=None)
    alpha, c = float(coef[0]), float(coef[1])
    rms = float(np.sqrt(np.mean((design @ coef - y) ** 2)))
    return alpha, c, rms


@dataclass
class VdcConstantReport:
    """Full-scan report for the star-L2 growth constant of the binary
    radical-inverse sequence."""

    max_n: int
    n_min: int
    sup_ratio: float
    arg_n: int
    target: float
    envelope_slope: float
    window_sups: dict[str, float]
    checkpoint_sups: dict[str, float]

    def to_dict(self) -> dict:
        return asdict(self)


def vdc_star_constant(max_n: int, n_min: int = 2, base: int = 2) -> VdcConstantReport:
    """Scan star L2 of every radical-inverse prefix up to max_n.

    Reports sup over n in [n_min, max_n] of value / log n together with the
    n attaining it, per-octave window sups, running sups at dyadic
    checkpoints, and the least-squares slope of the running-max envelope
    against log n. The envelope slope is the quantity that recovers the
    asymptotic constant at reachable n: the per-n ratio carries an O(1/log n)
    excess (measured near +0.57/log n in base 2, where the peak prefix
    lengths have alternating binary digits), so the raw sup approaches the
    limit slowly from above.
    """
    if max_n < 16:
        raise ValueError("max_n must be >= 16")
    n_min = max(2, n_min)
    vals = prefix_discrepancies(prefix(VanDerCorput(base), max_n), kinds=("star",))["star"]
    ns = np.arange(1, max_n + 1)
    sel = ns >= n_min
    ratio = vals[sel] / np.log(ns[sel])
    arg = int(np.argmax(ratio))
    sup_ratio = float(ratio[arg])
    arg_n = int(ns[sel][arg])

    window_sups = {}
    k = 1
    while 2**k < max_n:
        w = (ns >= 2**k) & (ns < min(2 ** (k + 1), max_n + 1))
        if w.any():
            window_sups[f"[2^{k},2^{k+1})"] = float((vals[w] / np.log(ns[w])).max())
        k += 1

    checkpoint_sups = {}
    running = np.maximum.accumulate(ratio)
    for k in range(4, max_n.bit_length()):
        cp = 2**k
        if cp >= n_min and cp <= max_n:
            checkpoint_sups[str(cp)] = float(running[cp - n_min])

    env = np.maximum.accumulate(vals)
    cps = [2**k for k in range(4, max_n.bit_length() + 1) if 2**k <= max_n]
    log_n = np.log(np.array(cps, dtype=np.float64))
    env_vals = env[np.array(cps) - 1]
    design = np.vstack([log_n, np.ones_like(log_n)]).T
    coef, *_ = np.linalg.lstsq(design, env_vals, rcond=None)
    return VdcConstantReport(
        max_n=max_n,
        n_min=n_min,
        sup_ratio=sup_ratio,
        arg_n=arg_n,
        target=VDC_STAR_TARGET,
        envelope_slope=float(coef[0]),
        window_sups=window_sups,
        checkpoint_sups=checkpoint_sups,
    )


def vdc_exponent_report(max_n: int = 1 << 16, first_checkpoint: int = 64) -> dict:
    """Fitted growth exponents for the binary radical-inverse sequence.

    One dense prefix scan supplies star and extreme L2 and n * diaphony for
    every n <= max_n. The fit runs on the running-max envelope sampled at
    dyadic checkpoints: the growth floors hold only along subsequences, so
    the envelope (best value seen so far) is the finite-scale object with the
    advertised order, while per-n values oscillate wildly below it.
    """
    kinds = ("star", "extreme", "diaphony")
    vals = prefix_discrepancies(prefix(VanDerCorput(2), max_n), kinds=kinds)
    ns = np.arange(1, max_n + 1, dtype=np.float64)
    out: dict = {"max_n": max_n, "checkpoints": [], "fits": {}}
    cps = [
        2**k
        for k in range(first_checkpoint.bit_length() - 1, max_n.bit_length() + 1)
        if first_checkpoint <= 2**k <= max_n
    ]
    out["checkpoints"] = cps
    for kind in kinds:
        series = vals[kind] * (ns if kind == "diaphony" else 1.0)
        env = np.maximum.accumulate(series)
        rows = [
            ScanRow(cp, float(env[cp - 1]), _rate(cp, 1, False), float(env[cp - 1]) / _rate(cp, 1, False))
            for cp in cps
        ]
        alpha, c, rms = fit_log_exponent(rows)
        label = "n_diaphony" if kind == "diaphony" else kind
        out["fits"][label] = {"alpha": alpha, "c": c, "rms": rms}
    return out
