import io

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from disclab import (
    Box,
    CoordinateError,
    DimensionMismatchError,
    EmptyPointSetError,
    PeriodicBox,
    PointSet,
    count_points,
    local_discrepancy,
    read_points,
    star_l2,
    write_points,
)

# dyadic coordinates are exactly representable, which keeps expected values exact
coord = st.integers(0, 2**20 - 1).map(lambda j: j / 2**20)


def pts(*rows):
    return PointSet(np.atleast_2d(np.asarray(rows, dtype=float)))


def test_count_half_open_boundary():
    assert count_points(pts([0.5]), Box(np.array([0.0]), np.array([0.5]))) == 0


def test_count_full_box():
    assert count_points(pts([0.0], [0.5]), Box(np.array([0.0]), np.array([1.0]))) == 2


def test_count_vdc_prefix_window():
    p = pts([0.0], [0.5], [0.25], [0.75])
    assert count_points(p, Box(np.array([0.25]), np.array([0.75]))) == 2


def test_local_discrepancy_trivial_cases():
    assert local_discrepancy(pts([0.5]), Box(np.array([0.0]), np.array([1.0]))) == 0.0
    assert local_discrepancy(pts([0.0], [0.5]), Box(np.array([0.0]), np.array([0.5]))) == 0.0


def test_periodic_wraparound_membership_and_volume():
    box = PeriodicBox(np.array([0.75]), np.array([0.25]))
    assert box.volume() == pytest.approx(0.5)
    assert count_points(pts([0.25]), box) == 0
    assert local_discrepancy(pts([0.25]), box) == pytest.approx(-0.5)
    assert count_points(pts([0.1]), box) == 1
    assert count_points(pts([0.8]), box) == 1


def test_periodic_full_cube_is_full():
    box = PeriodicBox(np.array([0.0, 0.0]), np.array([1.0, 1.0]))
    assert box.volume() == pytest.approx(1.0)
    assert count_points(pts([0.3, 0.9]), box) == 1


def test_periodic_degenerate_is_empty():
    box = PeriodicBox(np.array([0.4]), np.array([0.4]))
    assert box.volume() == 0.0
    assert count_points(pts([0.4]), box) == 0


def test_dimension_mismatch_raises():
    with pytest.raises(DimensionMismatchError):
        count_points(pts([0.1, 0.2]), Box(np.array([0.0]), np.array([1.0])))


def test_empty_set_rejected_by_discrepancy():
    empty = PointSet(np.empty((0, 1)))
    with pytest.raises(EmptyPointSetError):
        star_l2(empty)


def test_coordinate_validation():
    with pytest.raises(CoordinateError):
        PointSet(np.array([[1.0]]))
    with pytest.raises(CoordinateError):
        PointSet(np.array([[-0.1]]))
    with pytest.raises(CoordinateError):
        Box(np.array([0.5]), np.array([0.4]))


def test_coords_frozen():
    p = pts([0.25])
    with pytest.raises(ValueError):
        p.coords[0, 0] = 0.5


@given(
    st.lists(st.tuples(coord, coord), min_size=1, max_size=20),
    st.tuples(coord, coord),
    st.tuples(coord, coord),
)
@settings(max_examples=150)
def test_local_discrepancy_is_count_minus_volume(rows, a, b):
    p = pts(*[list(r) for r in rows])
    u = np.minimum(a, b).astype(float)
    v = np.maximum(a, b).astype(float)
    box = Box(u, v)
    assert local_discrepancy(p, box) == count_points(p, box) - p.n * box.volume()
    assert -p.n <= local_discrepancy(p, box) <= p.n


@given(
    st.lists(st.tuples(coord, coord), min_size=1, max_size=20),
    st.tuples(coord, coord),
    st.tuples(coord, coord),
    st.tuples(coord, coord),
)
@settings(max_examples=150)
def test_count_monotone_under_box_inclusion(rows, a, b, c):
    p = pts(*[list(r) for r in rows])
    lo = np.minimum.reduce([np.asarray(a), np.asarray(b), np.asarray(c)])
    hi = np.maximum.reduce([np.asarray(a), np.asarray(b), np.asarray(c)])
    mid_lo = np.minimum(np.maximum(np.asarray(a), lo), hi)
    mid_hi = np.maximum(np.minimum(np.asarray(b), hi), mid_lo)
    inner = Box(mid_lo.astype(float), mid_hi.astype(float))
    outer = Box(lo.astype(float), hi.astype(float))
    assert count_points(p, inner) <= count_points(p, outer)


def test_empty_box_at_point_coordinate():
    # u == v with no point exactly on u: empty half-open box, zero discrepancy
    p = pts([0.25])
    box = Box(np.array([0.5]), np.array([0.5]))
    assert local_discrepancy(p, box) == 0.0


def test_csv_round_trip():
    p = pts([0.0, 0.5], [0.25, 0.75])
    buf = io.StringIO()
    write_points(p, buf)
    back = read_points(io.StringIO(buf.getvalue()))
    assert back.d == 2 and back.n == 2
    np.testing.assert_array_equal(back.coords, p.coords)


def test_csv_rejects_out_of_range():
    with pytest.raises(CoordinateError, match="row 2"):
        read_points(io.StringIO("0.5\n1.0\n"))


def test_csv_rejects_garbage():
    with pytest.raises(CoordinateError, match="row 1"):
        read_points(io.StringIO("abc\n"))


def test_csv_header_mismatch():
    with pytest.raises(CoordinateError, match="header"):
        read_points(io.StringIO("# d=3 n=1\n0.5,0.5\n"))


def test_csv_empty_with_header():
    p = read_points(io.StringIO("# d=4 n=0\n"))
    assert p.n == 0 and p.d == 4


def test_periodic_box_corner_validation():
    with pytest.raises(CoordinateError):
        PeriodicBox(np.array([-0.1]), np.array([0.5]))
    with pytest.raises(CoordinateError):
        PeriodicBox(np.array([0.1]), np.array([1.5]))
    PeriodicBox(np.array([0.9]), np.array([0.1]))  # unordered corners are fine


def test_estimate_stderr_tied_to_method():
    from disclab import Estimate

    with pytest.raises(ValueError):
        Estimate("star", 2.0, 0.5, "exact-closed-form", 1, 1, stderr=0.01)
    with pytest.raises(ValueError):
        Estimate("star", 2.0, 0.5, "monte-carlo", 1, 1, stderr=None)
    with pytest.raises(ValueError):
        Estimate("star", 2.0, -0.5, "exact-closed-form", 1, 1)
    Estimate("star", 2.0, 0.5, "monte-carlo", 1, 1, stderr=0.01, samples=1000, seed=3)
