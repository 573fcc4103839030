"""Definition-level evaluators: Monte Carlo for any finite p, piecewise-exact
integration in one dimension for any p >= 1, and exact supremum (p = infinity)
algorithms for low dimension.

These operate straight from the definitions and serve as ground truth for the
closed forms in `exact_l2`, besides being useful on their own for p != 2.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .errors import GuardError
from .pointsets import (
    METHOD_GRID_ENUM,
    METHOD_MONTE_CARLO,
    METHOD_PIECEWISE,
    Estimate,
    PointSet,
)
from .rng import PRNG_NAME, uniform01

__all__ = [
    "McConfig",
    "mc_lp",
    "exact_lp_1d",
    "linf_star_1d",
    "linf_extreme_1d",
    "linf_exact_small",
    "linf_estimate",
]

MC_KINDS = ("star", "extreme", "periodic")

# Samples per chunk. Partial sums are produced per chunk and combined in
# chunk order, so the result is independent of how many workers ran them.
_CHUNK = 1 << 16

_MIN_SAMPLES_FOR_STDERR = 100


@dataclass(frozen=True)
class McConfig:
    """Monte Carlo estimator configuration."""

    kind: str
    p: float
    samples: int
    seed: int
    threads: int = 0  # 0: take DISCLAB_THREADS, else cpu count

    def __post_init__(self) -> None:
        if self.kind not in MC_KINDS:
            raise ValueError(f"kind must be one of {MC_KINDS}, got {self.kind!r}")
        if not (1.0 <= self.p < math.inf):
            raise ValueError("p must be finite and >= 1; use the linf operations for p=inf")
        if self.samples < 1:
            raise ValueError("samples must be >= 1")


def _thread_count(requested: int) -> int:
    if requested > 0:
        return requested
    env = os.environ.get("DISCLAB_THREADS", "0")
    try:
        cap = int(env)
    except ValueError:
        cap = 0
    if cap > 0:
        return cap
    return min(os.cpu_count() or 1, 8)


def _chunk_moments(pts: np.ndarray, cfg: McConfig, start_sample: int, count: int):
    """(sum y, sum y^2) of the integrand over samples start..start+count-1.

    Stream layout: sample s consumes positions [s*w, (s+1)*w) where w = d for
    star and 2d otherwise; for two-corner kinds the first d values are corner
    a, the next d corner b.
    """
    n, d = pts.shape
    width = d if cfg.kind == "star" else 2 * d
    u = uniform01(cfg.seed, start_sample * width, count * width).reshape(count, width)
    if cfg.kind == "star":
        t = u
        inside = np.ones((count, n), dtype=bool)
        for j in range(d):
            inside &= pts[:, j][None, :] < t[:, j][:, None]
        delta = inside.sum(axis=1) - n * t.prod(axis=1)
    elif cfg.kind == "extreme":
        a, b = u[:, :d], u[:, d:]
        lo = np.minimum(a, b)
        hi = np.maximum(a, b)
        if d == 1:
            xs = np.sort(pts[:, 0])
            cnt = np.searchsorted(xs, hi[:, 0]) - np.searchsorted(xs, lo[:, 0])
        else:
            inside = np.ones((count, n), dtype=bool)
            for j in range(d):
                xj = pts[:, j][None, :]
                inside &= (xj >= lo[:, j][:, None]) & (xj < hi[:, j][:, None])
            cnt = inside.sum(axis=1)
        delta = cnt - n * (hi - lo).prod(axis=1)
    else:  # periodic
        a, b = u[:, :d], u[:, d:]
        wrap = a > b
        if d == 1:
            xs = np.sort(pts[:, 0])
            ge_u = n - np.searchsorted(xs, a[:, 0])
            lt_v = np.searchsorted(xs, b[:, 0])
            cnt = np.where(wrap[:, 0], ge_u + lt_v, lt_v - (n - ge_u))
        else:
            inside = np.ones((count, n), dtype=bool)
            for j in range(d):
                xj = pts[:, j][None, :]
                inside &= (xj >= a[:, j][:, None]) ^ (xj >= b[:, j][:, None]) ^ wrap[:, j][:, None]
            cnt = inside.sum(axis=1)
        delta = cnt - n * (b - a + wrap).prod(axis=1)
    y = np.abs(delta) ** cfg.p
    if cfg.kind == "extreme":
        # min/max folding doubles the density per coordinate on {u <= v}
        y *= 2.0 ** (-d)
    return float(y.sum()), float((y * y).sum())


def mc_lp(points: PointSet, cfg: McConfig) -> Estimate:
    """Monte Carlo L_p discrepancy estimate.

    star samples anchored corners t; extreme samples two corners and folds
    them with componentwise min/max (the integral over the ordered region
    equals 2^-d times the folded expectation); periodic samples unordered
    corner pairs with wraparound membership. The standard error of the
    p-th-power mean is pushed through the final 1/p power by the delta
    method. Reproducible: seed and sample count determine the result bit for
    bit, independent of thread count.
    """
    points.require_nonempty()
    pts = points.coords
    n, d = pts.shape
    starts = list(range(0, cfg.samples, _CHUNK))
    jobs = [(s, min(_CHUNK, cfg.samples - s)) for s in starts]
    workers = _thread_count(cfg.threads)
    if workers > 1 and len(jobs) > 1:
        with ThreadPoolExecutor(max_workers=workers) as ex:
            results = list(ex.map(lambda j: _chunk_moments(pts, cfg, *j), jobs))
    else:
        results = [_chunk_moments(pts, cfg, *j) for j in jobs]
    mean = math.fsum(r[0] for r in results) / cfg.samples
    mean_sq = math.fsum(r[1] for r in results) / cfg.samples
    value = mean ** (1.0 / cfg.p)
    stderr = 0.0
    if cfg.samples >= _MIN_SAMPLES_FOR_STDERR and mean > 0.0:
        var = max(mean_sq - mean * mean, 0.0) * cfg.samples / (cfg.samples - 1)
        se_mean = math.sqrt(var / cfg.samples)
        stderr = se_mean * value / (cfg.p * mean)
    return Estimate(
        kind=cfg.kind,
        p=cfg.p,
        value=value,
        method=METHOD_MONTE_CARLO,
        n=n,
        d=d,
        stderr=stderr,
        samples=cfg.samples,
        seed=cfg.seed,
        rng=PRNG_NAME,
    )


# ---------------------------------------------------------------------------
# Exact one-dimensional L_p by piecewise integration
# ---------------------------------------------------------------------------


def _cells(x: np.ndarray):
    """Breakpoint edges (0, distinct coords, 1) and the box count on each
    cell (e_i, e_{i+1}]."""
    xs = np.sort(x)
    edges = np.unique(np.concatenate(([0.0], xs, [1.0])))
    counts = np.searchsorted(xs, edges[:-1], side="right").astype(np.float64)
    return edges, counts, xs


def _phi1(s: np.ndarray, p: float) -> np.ndarray:
    """Antiderivative of |s|^p."""
    return np.sign(s) * np.abs(s) ** (p + 1.0) / (p + 1.0)


def _psi(s: np.ndarray, p: float) -> np.ndarray:
    """Antiderivative of s |s|^p."""
    return np.abs(s) ** (p + 2.0) / (p + 2.0)


def exact_lp_1d(points: PointSet, kind: str, p: float) -> float:
    """Exact L_p discrepancy in dimension one for any real p >= 1.

    The anchored discrepancy function D(t) = count([0,t)) - n t is linear on
    each cell between consecutive point values, so |D|^p integrates in closed
    form cell by cell. For arbitrary boxes the integrand over a cell pair
    depends on v - u alone, and integrating against the trapezoidal density
    of v - u needs only the first and second antiderivatives of |s|^p. No
    sampling error; accuracy is limited only by rounding.
    """
    points.require_nonempty()
    points.require_dim(1)
    if not (1.0 <= p < math.inf):
        raise ValueError("p must be finite and >= 1; use the linf operations for p=inf")
    if kind not in ("star", "extreme"):
        raise ValueError(f"kind must be 'star' or 'extreme', got {kind!r}")
    x = points.coords[:, 0]
    n = x.size
    edges, a, _ = _cells(x)
    lo, hi = edges[:-1], edges[1:]
    if kind == "star":
        terms = (_phi1(a - n * lo, p) - _phi1(a - n * hi, p)) / n
        return math.fsum(terms.tolist()) ** (1.0 / p)

    widths = hi - lo
    m = lo.size
    parts = [math.fsum(((n**p) * widths ** (p + 2.0) / ((p + 1.0) * (p + 2.0))).tolist())]
    for i in range(m - 1):
        gap = a[i + 1 :] - a[i]
        w1 = lo[i + 1 :] - hi[i]
        w2 = lo[i + 1 :] - lo[i]
        w3 = hi[i + 1 :] - hi[i]
        w4 = hi[i + 1 :] - lo[i]
        w_mid_lo = np.minimum(w2, w3)
        w_mid_hi = np.maximum(w2, w3)
        height = np.minimum(widths[i], widths[i + 1 :])

        def piece(aw, bw, alpha, beta):
            s_hi = gap - n * alpha
            s_lo = gap - n * beta
            out = (aw + bw * gap / n) * (_phi1(s_hi, p) - _phi1(s_lo, p))
            if bw:
                out -= (bw / n) * (_psi(s_hi, p) - _psi(s_lo, p))
            return out / n

        t = (
            piece(-w1, 1.0, w1, w_mid_lo)
            + piece(height, 0.0, w_mid_lo, w_mid_hi)
            + piece(w4, -1.0, w_mid_hi, w4)
        )
        parts.append(math.fsum(t.tolist()))
    return math.fsum(parts) ** (1.0 / p)


# ---------------------------------------------------------------------------
# Exact L_infinity
# ---------------------------------------------------------------------------


def linf_star_1d(points: PointSet) -> float:
    """sup_t |count([0,t)) - n t| in dimension one.

    With sorted values x_(1) <= ... <= x_(n) the supremum over the closure is
    max_i max(n x_(i) - (i-1), i - n x_(i)); it is a supremum, attained as a
    limit of half-open boxes.
    """
    points.require_nonempty()
    points.require_dim(1)
    x = np.sort(points.coords[:, 0])
    n = x.size
    i = np.arange(1, n + 1)
    return float(np.max(np.maximum(n * x - (i - 1), i - n * x)))


def linf_extreme_1d(points: PointSet) -> float:
    """sup over u <= v of |D(v) - D(u)| for the anchored discrepancy function
    D, in dimension one.

    On each cell D is linear and decreasing, so the candidate extremes are
    the one-sided limits at cell ends: H_i at the left end, L_i at the right.
    Two prefix/suffix scans over those O(n) candidates cover the rising and
    falling swings.
    """
    points.require_nonempty()
    points.require_dim(1)
    x = points.coords[:, 0]
    n = x.size
    edges, a, _ = _cells(x)
    high = a - n * edges[:-1]
    low = a - n * edges[1:]
    best = 0.0
    if high.size > 1:
        prefix_min = np.minimum.accumulate(low)
        best = max(best, float(np.max(high[1:] - prefix_min[:-1])))
    suffix_min = np.minimum.accumulate(low[::-1])[::-1]
    best = max(best, float(np.max(high - suffix_min)))
    return best


_LINF_MAX_N = 64
_LINF_MAX_D = 2


def linf_exact_small(points: PointSet, kind: str) -> float:
    """Exact supremum discrepancy by enumerating critical corners (d <= 2,
    n <= 64).

    Candidate thresholds per axis are the point coordinates plus 0 and 1.
    The positive part of the supremum closes the box around its points
    (counts with <=), the negative part shrinks it open (counts with <);
    both are limits of half-open boxes, and pure modes per part dominate any
    mixed choice.
    """
    points.require_nonempty()
    if kind not in ("star", "extreme"):
        raise ValueError(f"kind must be 'star' or 'extreme', got {kind!r}")
    n, d = points.n, points.d
    if d > _LINF_MAX_D or n > _LINF_MAX_N:
        raise GuardError(f"exact enumeration is limited to d <= {_LINF_MAX_D}, n <= {_LINF_MAX_N}")
    if d == 1:
        return _linf_small_1d(points.coords[:, 0], kind)
    return _linf_small_2d(points.coords, kind)


def _linf_small_1d(x: np.ndarray, kind: str) -> float:
    n = x.size
    xs = np.sort(x)
    c = np.unique(np.concatenate(([0.0], xs, [1.0])))
    if kind == "star":
        closed = np.searchsorted(xs, c, side="right")
        strict = np.searchsorted(xs, c, side="left")
        return max(float(np.max(closed - n * c)), float(np.max(n * c - strict)), 0.0)
    best = 0.0
    for i, u in enumerate(c):
        v = c[i:]
        closed = np.searchsorted(xs, v, side="right") - np.searchsorted(xs, u, side="left")
        strict = np.searchsorted(xs, v, side="left") - np.searchsorted(xs, u, side="right")
        vol = n * (v - u)
        best = max(best, float(np.max(closed - vol)), float(np.max(vol - strict)))
    return best


def _linf_small_2d(pts: np.ndarray, kind: str) -> float:
    n = pts.shape[0]
    c1 = np.unique(np.concatenate(([0.0], pts[:, 0], [1.0])))
    c2 = np.unique(np.concatenate(([0.0], pts[:, 1], [1.0])))
    k1, k2 = c1.size, c2.size
    # C[i, j] = number of points with x1 <= c1[i-1] and x2 <= c2[j-1]
    hist = np.zeros((k1 + 1, k2 + 1))
    r1 = np.searchsorted(c1, pts[:, 0])
    r2 = np.searchsorted(c2, pts[:, 1])
    np.add.at(hist, (r1 + 1, r2 + 1), 1.0)
    cum = hist.cumsum(axis=0).cumsum(axis=1)
    if kind == "star":
        closed = cum[1:, 1:]
        strict = cum[:-1, :-1]
        vol = n * np.outer(c1, c2)
        return max(float(np.max(closed - vol)), float(np.max(vol - strict)), 0.0)
    iu2, iv2 = np.triu_indices(k2)
    width2 = c2[iv2] - c2[iu2]
    best = 0.0
    for a in range(k1):
        for b in range(a, k1):
            width1 = c1[b] - c1[a]
            closed = (
                cum[b + 1, iv2 + 1] - cum[a, iv2 + 1] - cum[b + 1, iu2] + cum[a, iu2]
            )
            opened = (
                cum[b, iv2] - cum[a + 1, iv2] - cum[b, iu2 + 1] + cum[a + 1, iu2 + 1]
            )
            vol = n * width1 * width2
            best = max(best, float(np.max(closed - vol)), float(np.max(vol - opened)))
    return best


def linf_estimate(points: PointSet, kind: str) -> Estimate:
    """Estimate wrapper for the exact supremum algorithms, dispatching on
    dimension."""
    if points.d == 1:
        value = linf_star_1d(points) if kind == "star" else linf_extreme_1d(points)
        method = METHOD_PIECEWISE
    else:
        value = linf_exact_small(points, kind)
        method = METHOD_GRID_ENUM
    return Estimate(kind=kind, p=math.inf, value=value, method=method, n=points.n, d=points.d)
