import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from disclab import (
    GuardError,
    McConfig,
    PointSet,
    VanDerCorput,
    exact_lp_1d,
    extreme_l2,
    linf_exact_small,
    linf_extreme_1d,
    linf_star_1d,
    mc_lp,
    prefix,
    random_point_set,
    star_l2,
    uniform01,
)


def pset(rows):
    return PointSet(np.atleast_2d(np.asarray(rows, dtype=float)))


# ---------------------------------------------------------------------------
# Monte Carlo estimator
# ---------------------------------------------------------------------------


def test_mc_extreme_singleton_identity():
    est = mc_lp(pset([[0.5]]), McConfig("extreme", 2.0, 10**6, 1))
    assert abs(est.value - 12.0**-0.5) <= 3.0 * est.stderr
    assert est.method == "monte-carlo" and est.samples == 10**6 and est.seed == 1


def test_mc_star_origin_identity():
    est = mc_lp(pset([[0.0]]), McConfig("star", 2.0, 10**6, 2))
    assert abs(est.value - 3.0**-0.5) <= 3.0 * est.stderr


def test_mc_matches_exact_p3():
    p = prefix(VanDerCorput(2), 64)
    exact = exact_lp_1d(p, "extreme", 3.0)
    est = mc_lp(p, McConfig("extreme", 3.0, 10**6, 3))
    assert abs(est.value - exact) <= 3.0 * est.stderr


def test_mc_bitwise_reproducible():
    p = random_point_set(16, 2, 5)
    a = mc_lp(p, McConfig("periodic", 1.5, 50_000, 77))
    b = mc_lp(p, McConfig("periodic", 1.5, 50_000, 77))
    assert (a.value, a.stderr) == (b.value, b.stderr)


def test_mc_independent_of_thread_count():
    p = random_point_set(16, 3, 6)
    one = mc_lp(p, McConfig("extreme", 2.0, 200_000, 9, threads=1))
    four = mc_lp(p, McConfig("extreme", 2.0, 200_000, 9, threads=4))
    assert (one.value, one.stderr) == (four.value, four.stderr)


def test_mc_stderr_halves_when_samples_double():
    # stochastic regression: one miss out of eight doublings is tolerated
    p = random_point_set(8, 1, 30)
    base = 2000
    ses = [
        mc_lp(p, McConfig("star", 2.0, base << k, 123)).stderr for k in range(9)
    ]
    misses = sum(not (0.62 <= ses[k + 1] / ses[k] <= 0.80) for k in range(8))
    assert misses <= 1, f"se ratios {[ses[k + 1] / ses[k] for k in range(8)]}"


def test_mc_rejects_infinite_p():
    with pytest.raises(ValueError):
        McConfig("star", math.inf, 100, 1)
    with pytest.raises(ValueError):
        McConfig("star", 0.5, 100, 1)
    with pytest.raises(ValueError):
        McConfig("nope", 2.0, 100, 1)


# ---------------------------------------------------------------------------
# exact one-dimensional L_p
# ---------------------------------------------------------------------------


def test_exact_lp_1d_center_singleton():
    p = pset([[0.5]])
    assert exact_lp_1d(p, "star", 2.0) == pytest.approx(12.0**-0.5, rel=1e-14)
    assert exact_lp_1d(p, "extreme", 2.0) == pytest.approx(12.0**-0.5, rel=1e-13)


def test_exact_lp_1d_star_p1_matches_mc():
    p = pset([[0.0], [0.5]])
    exact = exact_lp_1d(p, "star", 1.0)
    est = mc_lp(p, McConfig("star", 1.0, 10**6, 8))
    assert abs(est.value - exact) <= 3.0 * est.stderr


def _grid_star(x, p, m=200_000):
    """Midpoint-rule quadrature of the defining integral."""
    x = np.sort(np.asarray(x))
    t = (np.arange(m) + 0.5) / m
    counts = np.searchsorted(x, t, side="left")
    return float(np.mean(np.abs(counts - x.size * t) ** p)) ** (1.0 / p)


def _grid_extreme(x, p, m=3000):
    x = np.sort(np.asarray(x))
    t = (np.arange(m) + 0.5) / m
    disc = np.searchsorted(x, t, side="left") - x.size * t
    iu, iv = np.triu_indices(m, k=1)
    return float(np.abs(disc[iv] - disc[iu]) ** p @ np.ones(iu.size) / (m * m)) ** (1.0 / p)


@pytest.mark.parametrize("p", [1.0, 1.5, 2.0, 3.0])
def test_exact_lp_1d_agrees_with_quadrature(p):
    pts = prefix(VanDerCorput(2), 7)
    x = pts.coords[:, 0]
    assert exact_lp_1d(pts, "star", p) == pytest.approx(_grid_star(x, p), rel=2e-4)
    assert exact_lp_1d(pts, "extreme", p) == pytest.approx(_grid_extreme(x, p), rel=2e-3)


def test_exact_lp_1d_p2_matches_closed_forms():
    p = PointSet(uniform01(17, 0, 23).reshape(-1, 1))
    assert exact_lp_1d(p, "star", 2.0) == pytest.approx(star_l2(p), rel=1e-12)
    assert exact_lp_1d(p, "extreme", 2.0) == pytest.approx(extreme_l2(p), rel=1e-12)


def test_exact_lp_1d_handles_duplicates():
    p = pset([[0.25], [0.25], [0.75]])
    assert exact_lp_1d(p, "star", 2.0) == pytest.approx(star_l2(p), rel=1e-12)
    assert exact_lp_1d(p, "extreme", 2.0) == pytest.approx(extreme_l2(p), rel=1e-12)


def test_jensen_relations_1d():
    p = PointSet(uniform01(19, 0, 12).reshape(-1, 1))
    # anchored boxes form a probability measure: L1 <= L2 literally
    assert exact_lp_1d(p, "star", 1.0) <= exact_lp_1d(p, "star", 2.0) + 1e-12
    # the two-corner region has mass 1/2: only the normalized moments compare
    l1, l2 = exact_lp_1d(p, "extreme", 1.0), exact_lp_1d(p, "extreme", 2.0)
    assert 2.0 * l1 <= math.sqrt(2.0) * l2 + 1e-12


def test_exact_lp_1d_guards():
    from disclab import DimensionMismatchError

    with pytest.raises(DimensionMismatchError):
        exact_lp_1d(random_point_set(4, 2, 0), "star", 2.0)
    with pytest.raises(ValueError):
        exact_lp_1d(pset([[0.5]]), "star", math.inf)
    with pytest.raises(ValueError):
        exact_lp_1d(pset([[0.5]]), "anchored", 2.0)


# ---------------------------------------------------------------------------
# exact suprema
# ---------------------------------------------------------------------------


def test_linf_star_1d_examples():
    grid4 = pset([[(2 * i + 1) / 8] for i in range(4)])
    assert linf_star_1d(grid4) == pytest.approx(0.5, abs=1e-15)
    assert linf_star_1d(pset([[0.0]])) == pytest.approx(1.0)
    assert linf_star_1d(pset([[0.0], [0.5]])) == pytest.approx(1.0)


def test_linf_extreme_1d_examples():
    assert linf_extreme_1d(pset([[0.5]])) == pytest.approx(1.0)
    assert linf_extreme_1d(pset([[0.0], [0.5]])) == pytest.approx(1.0)


@given(st.integers(0, 2**31), st.integers(1, 24))
@settings(max_examples=80, deadline=None)
def test_linf_sandwich_1d(seed, n):
    p = random_point_set(n, 1, seed)
    s, e = linf_star_1d(p), linf_extreme_1d(p)
    assert s <= e + 1e-12
    assert e <= 2.0 * s + 1e-12


@given(st.integers(0, 2**31), st.integers(1, 16))
@settings(max_examples=50, deadline=None)
def test_linf_small_agrees_with_1d_scans(seed, n):
    p = random_point_set(n, 1, seed)
    assert linf_exact_small(p, "star") == pytest.approx(linf_star_1d(p), abs=1e-12)
    assert linf_exact_small(p, "extreme") == pytest.approx(linf_extreme_1d(p), abs=1e-12)


def _random_box_search(pts, kind, samples, seed):
    """Definition-level lower bound on the supremum by random boxes."""
    x = pts.coords
    n, d = x.shape
    u = uniform01(seed, 0, samples * 2 * d).reshape(samples, 2 * d)
    if kind == "star":
        t = u[:, :d]
        inside = np.ones((samples, n), dtype=bool)
        for j in range(d):
            inside &= x[:, j][None, :] < t[:, j][:, None]
        return float(np.max(np.abs(inside.sum(1) - n * t.prod(1))))
    a, b = u[:, :d], u[:, d:]
    lo, hi = np.minimum(a, b), np.maximum(a, b)
    inside = np.ones((samples, n), dtype=bool)
    for j in range(d):
        xj = x[:, j][None, :]
        inside &= (xj >= lo[:, j][:, None]) & (xj < hi[:, j][:, None])
    return float(np.max(np.abs(inside.sum(1) - n * (hi - lo).prod(1))))


def test_linf_small_center_singleton_d2():
    # sup is 0.75: closing the box around the point as t -> (0.5, 0.5)+ gives
    # 1 - 0.25; pushing t to (1,1) puts the point inside, so the deficit side
    # peaks at volume 0.5 with the point excluded
    p = pset([[0.5, 0.5]])
    value = linf_exact_small(p, "star")
    assert value == pytest.approx(0.75, abs=1e-15)
    search = _random_box_search(p, "star", 200_000, 12)
    assert search <= value + 1e-12
    assert search >= value - 5e-3


def test_linf_small_d2_matches_random_search():
    p = random_point_set(12, 2, 77)
    for kind in ("star", "extreme"):
        value = linf_exact_small(p, kind)
        search = _random_box_search(p, kind, 300_000, 13)
        assert search <= value + 1e-12
        assert search >= value - 0.15 * value


def test_linf_small_sandwich_d2():
    p = random_point_set(8, 2, 5)
    s = linf_exact_small(p, "star")
    e = linf_exact_small(p, "extreme")
    assert s <= e + 1e-12 <= 4.0 * s + 1e-12


def test_linf_small_guards():
    with pytest.raises(GuardError):
        linf_exact_small(random_point_set(65, 2, 0), "star")
    with pytest.raises(GuardError):
        linf_exact_small(random_point_set(8, 3, 0), "star")
