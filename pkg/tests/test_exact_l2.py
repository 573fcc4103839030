import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from disclab import (
    McConfig,
    PointSet,
    VanDerCorput,
    diaphony,
    diaphony_truncated,
    exact_lp_1d,
    extreme_l2,
    mc_lp,
    periodic_l2,
    prefix,
    random_point_set,
    star_l2,
)

inner_coord = st.integers(1, 2**20 - 1).map(lambda j: j / 2**20)


def pset(rows):
    return PointSet(np.atleast_2d(np.asarray(rows, dtype=float)))


# ---------------------------------------------------------------------------
# analytic single-point identities
# ---------------------------------------------------------------------------


def test_star_identities():
    assert star_l2(pset([[0.0]])) == pytest.approx(3.0**-0.5, rel=1e-14)
    assert star_l2(pset([[0.5]])) == pytest.approx(12.0**-0.5, rel=1e-14)


@given(inner_coord)
@settings(max_examples=80)
def test_single_point_identities_hold_for_any_x(x):
    p = pset([[x]])
    assert extreme_l2(p) == pytest.approx(12.0**-0.5, rel=1e-13)
    assert periodic_l2(p) == pytest.approx(6.0**-0.5, rel=1e-13)
    assert diaphony(p) == pytest.approx(math.pi / math.sqrt(3.0), rel=1e-13)


def test_two_point_worked_values():
    p = pset([[0.0], [0.5]])
    assert periodic_l2(p) ** 2 == pytest.approx(1.0 / 6.0, rel=1e-13)
    assert diaphony(p) == pytest.approx(math.pi / math.sqrt(12.0), rel=1e-13)
    assert star_l2(p) ** 2 == pytest.approx(1.0 / 3.0, rel=1e-13)


def test_star_equals_extreme_at_center_singleton():
    p = pset([[0.5]])
    assert star_l2(p) == pytest.approx(extreme_l2(p), rel=1e-15)


# ---------------------------------------------------------------------------
# cross-checks against independent evaluators
# ---------------------------------------------------------------------------


def test_star_matches_piecewise_oracle_on_vdc16():
    p = prefix(VanDerCorput(2), 16)
    assert star_l2(p) == pytest.approx(exact_lp_1d(p, "star", 2.0), rel=1e-12)


@pytest.mark.parametrize("n", [2, 3, 97, 255])
def test_closed_forms_match_piecewise_oracle(n):
    p = prefix(VanDerCorput(2), n)
    assert star_l2(p) == pytest.approx(exact_lp_1d(p, "star", 2.0), rel=1e-12)
    assert extreme_l2(p) == pytest.approx(exact_lp_1d(p, "extreme", 2.0), rel=1e-12)


def test_extreme_matches_mc_oracle_d2():
    p = random_point_set(32, 2, 2024)
    est = mc_lp(p, McConfig("extreme", 2.0, 10**6, 99))
    assert abs(est.value - extreme_l2(p)) <= 3.0 * est.stderr


def test_periodic_matches_mc_oracle_d2():
    p = random_point_set(32, 2, 2025)
    est = mc_lp(p, McConfig("periodic", 2.0, 10**6, 98))
    assert abs(est.value - periodic_l2(p)) <= 3.0 * est.stderr


def test_diaphony_matches_truncated_series_d2():
    p = random_point_set(8, 2, 7)
    value, bound = diaphony_truncated(p, 2000)
    f2 = diaphony(p) ** 2
    assert value**2 <= f2 + 1e-12
    assert f2 <= value**2 + bound


# ---------------------------------------------------------------------------
# precision: the pair sums cancel by orders of magnitude and must still agree
# with the independent piecewise integration
# ---------------------------------------------------------------------------


def test_high_cancellation_precision_n4096():
    p = prefix(VanDerCorput(2), 4096)
    assert star_l2(p) == pytest.approx(exact_lp_1d(p, "star", 2.0), rel=1e-10)
    assert extreme_l2(p) == pytest.approx(exact_lp_1d(p, "extreme", 2.0), rel=1e-10)


@pytest.mark.slow
def test_high_cancellation_precision_n16384_extreme():
    p = prefix(VanDerCorput(2), 1 << 14)
    assert extreme_l2(p) == pytest.approx(exact_lp_1d(p, "extreme", 2.0), rel=1e-10)


@pytest.mark.slow
def test_high_cancellation_precision_n65536_star():
    p = prefix(VanDerCorput(2), 1 << 16)
    assert star_l2(p) == pytest.approx(exact_lp_1d(p, "star", 2.0), rel=1e-10)


# ---------------------------------------------------------------------------
# symmetry properties
# ---------------------------------------------------------------------------

small_set = st.lists(
    st.tuples(inner_coord, inner_coord), min_size=1, max_size=16
).map(lambda rows: np.asarray(rows, dtype=float))


@given(small_set, st.integers(0, 1))
@settings(max_examples=60, deadline=None)
def test_extreme_invariant_under_coordinate_reflection(rows, axis):
    p = PointSet(rows)
    reflected = rows.copy()
    reflected[:, axis] = 1.0 - reflected[:, axis]
    q = PointSet(reflected)
    assert extreme_l2(p) == pytest.approx(extreme_l2(q), rel=1e-11)


def test_star_changes_under_reflection_witness():
    # reflecting one axis moves the anchored corner: in d >= 2 the star value
    # genuinely changes while the extreme value cannot
    rows = np.array([[0.2, 0.3], [0.6, 0.7]])
    refl = rows.copy()
    refl[:, 0] = 1.0 - refl[:, 0]
    p, q = PointSet(rows), PointSet(refl)
    assert abs(star_l2(p) - star_l2(q)) > 1e-3
    assert extreme_l2(p) == pytest.approx(extreme_l2(q), rel=1e-13)


@given(small_set, inner_coord)
@settings(max_examples=60, deadline=None)
def test_periodic_and_diaphony_translation_invariant(rows, shift):
    p = PointSet(rows)
    moved = rows.copy()
    moved[:, 0] = np.mod(moved[:, 0] + shift, 1.0)
    q = PointSet(moved)
    assert periodic_l2(p) == pytest.approx(periodic_l2(q), rel=1e-11)
    assert diaphony(p) == pytest.approx(diaphony(q), rel=1e-11)


@given(small_set, st.randoms(use_true_random=False))
@settings(max_examples=40, deadline=None)
def test_permutation_invariance(rows, rnd):
    p = PointSet(rows)
    order = list(range(rows.shape[0]))
    rnd.shuffle(order)
    q = PointSet(rows[order])
    swapped = PointSet(rows[:, ::-1].copy())
    for fn in (star_l2, extreme_l2, periodic_l2, diaphony):
        assert fn(p) == pytest.approx(fn(q), rel=1e-11)
        assert fn(p) == pytest.approx(fn(swapped), rel=1e-11)


@given(st.integers(0, 2**31), st.integers(1, 32), st.integers(1, 3))
@settings(max_examples=60, deadline=None)
def test_dominations_on_random_sets(seed, n, d):
    p = random_point_set(n, d, seed)
    e, s, per = extreme_l2(p), star_l2(p), periodic_l2(p)
    tol = 1e-12 * max(1.0, s, per)
    assert e <= s + tol
    assert e <= per + tol


# ---------------------------------------------------------------------------
# truncated diaphony
# ---------------------------------------------------------------------------


def test_truncated_diaphony_origin_point():
    value, bound = diaphony_truncated(pset([[0.0]]), 1)
    assert value == pytest.approx(math.sqrt(2.0), rel=1e-14)
    assert bound == pytest.approx(math.pi**2 / 3.0 - 2.0, rel=1e-12)


def test_truncated_diaphony_monotone_in_cutoff():
    p = random_point_set(6, 1, 11)
    prev = 0.0
    for h in (1, 2, 4, 16, 64):
        value, _ = diaphony_truncated(p, h)
        assert value >= prev - 1e-15
        prev = value


def test_truncated_diaphony_brackets_closed_form():
    p = pset([[0.0], [0.5]])
    value, bound = diaphony_truncated(p, 10**4)
    f2 = (math.pi / math.sqrt(12.0)) ** 2
    assert value**2 <= f2 <= value**2 + bound


def test_truncated_diaphony_cutoff_guard():
    with pytest.raises(ValueError):
        diaphony_truncated(pset([[0.1]]), 0)
