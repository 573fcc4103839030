"""Point sets in [0,1)^d, axis-parallel test boxes, counting and local
discrepancy, and the CSV point format.

Conventions used everywhere in the package:

* boxes are half open, [u, v) per coordinate; a point with x_j == v_j is
  outside, x_j == u_j is inside;
* the local discrepancy is unnormalized: count minus N * volume;
* periodic boxes wrap per coordinate: the test set is [u_j, v_j) when
  u_j <= v_j and [0, v_j) union [u_j, 1) otherwise, so u == (0,...,0),
  v == (1,...,1) is the full cube, not the empty one.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import IO, Iterable, Sequence

import numpy as np

from .errors import (
    CoordinateError,
    DimensionMismatchError,
    EmptyPointSetError,
)

__all__ = [
    "PointSet",
    "Box",
    "PeriodicBox",
    "Estimate",
    "count_points",
    "local_discrepancy",
    "read_points",
    "write_points",
]


@dataclass(frozen=True)
class PointSet:
    """Ordered multiset of points in [0,1)^d.

    The coordinate array is (n, d), float64, and frozen after construction.
    Order is preserved: prefix extraction and the lifting construction rely
    on it. n == 0 is allowed for construction and IO but rejected by every
    discrepancy evaluation.
    """

    coords: np.ndarray

    def __post_init__(self) -> None:
        a = np.asarray(self.coords, dtype=np.float64)
        if a.ndim != 2:
            raise CoordinateError(f"expected an (n, d) array, got shape {a.shape}")
        if a.shape[1] < 1:
            raise CoordinateError("dimension must be >= 1")
        if a.size and (not np.all(np.isfinite(a)) or a.min() < 0.0 or a.max() >= 1.0):
            raise CoordinateError("coordinates must be finite and lie in [0, 1)")
        a = np.ascontiguousarray(a)
        a.flags.writeable = False
        object.__setattr__(self, "coords", a)

    @classmethod
    def from_rows(cls, rows: Iterable[Sequence[float]], d: int | None = None) -> "PointSet":
        rows = [list(map(float, r)) for r in rows]
        if not rows:
            if d is None:
                raise CoordinateError("cannot infer dimension of an empty point set")
            return cls(np.empty((0, d)))
        return cls(np.asarray(rows, dtype=np.float64))

    @property
    def n(self) -> int:
        return self.coords.shape[0]

    @property
    def d(self) -> int:
        return self.coords.shape[1]

    def prefix(self, n: int) -> "PointSet":
        if not 0 <= n <= self.n:
            raise ValueError(f"prefix length {n} out of range 0..{self.n}")
        return PointSet(self.coords[:n])

    def require_nonempty(self) -> None:
        if self.n == 0:
            raise EmptyPointSetError("operation requires at least one point")

    def require_dim(self, d: int) -> None:
        if self.d != d:
            raise DimensionMismatchError(f"point set has d={self.d}, expected d={d}")


@dataclass(frozen=True)
class Box:
    """Half-open axis-parallel box [u, v) with u <= v componentwise."""

    u: np.ndarray
    v: np.ndarray

    def __post_init__(self) -> None:
        u = np.atleast_1d(np.asarray(self.u, dtype=np.float64))
        v = np.atleast_1d(np.asarray(self.v, dtype=np.float64))
        if u.shape != v.shape or u.ndim != 1:
            raise CoordinateError("box corners must be 1-d arrays of equal length")
        if u.size and (u.min() < 0.0 or v.max() > 1.0 or np.any(u > v)):
            raise CoordinateError("box requires 0 <= u <= v <= 1 componentwise")
        u.flags.writeable = False
        v.flags.writeable = False
        object.__setattr__(self, "u", u)
        object.__setattr__(self, "v", v)

    @property
    def d(self) -> int:
        return self.u.size

    def volume(self) -> float:
        return float(np.prod(self.v - self.u))


@dataclass(frozen=True)
class PeriodicBox:
    """Axis-parallel box modulo one; corners need not be ordered.

    Per coordinate the test set is [u_j, v_j) when u_j <= v_j and the wrapped
    pair [0, v_j) union [u_j, 1) otherwise. Its length is v_j - u_j plus one
    on wrapped coordinates.
    """

    u: np.ndarray
    v: np.ndarray

    def __post_init__(self) -> None:
        u = np.atleast_1d(np.asarray(self.u, dtype=np.float64))
        v = np.atleast_1d(np.asarray(self.v, dtype=np.float64))
        if u.shape != v.shape or u.ndim != 1:
            raise CoordinateError("box corners must be 1-d arrays of equal length")
        if u.size and (min(u.min(), v.min()) < 0.0 or max(u.max(), v.max()) > 1.0):
            raise CoordinateError("periodic box corners must lie in [0, 1]")
        u.flags.writeable = False
        v.flags.writeable = False
        object.__setattr__(self, "u", u)
        object.__setattr__(self, "v", v)

    @property
    def d(self) -> int:
        return self.u.size

    def volume(self) -> float:
        wrap = self.u > self.v
        return float(np.prod(self.v - self.u + wrap))


METHOD_CLOSED_FORM = "exact-closed-form"
METHOD_PIECEWISE = "exact-piecewise"
METHOD_MONTE_CARLO = "monte-carlo"
METHOD_GRID_ENUM = "grid-enum"


@dataclass(frozen=True)
class Estimate:
    """A computed discrepancy value plus provenance.

    `stderr`, `samples`, `seed` and `rng` are populated exactly when the
    method is Monte Carlo.
    """

    kind: str
    p: float
    value: float
    method: str
    n: int
    d: int
    stderr: float | None = None
    samples: int | None = None
    seed: int | None = None
    rng: str | None = field(default=None, repr=False)

    def __post_init__(self) -> None:
        if self.value < 0.0:
            raise ValueError("discrepancy values are nonnegative")
        if (self.method == METHOD_MONTE_CARLO) != (self.stderr is not None):
            raise ValueError("stderr must be present exactly for monte-carlo estimates")


def count_points(points: PointSet, box: Box | PeriodicBox) -> int:
    """Number of points inside the box, with exact half-open boundaries."""
    if points.d != box.d:
        raise DimensionMismatchError(
            f"point set has d={points.d}, box has d={box.d}"
        )
    x = points.coords
    if points.n == 0:
        return 0
    if isinstance(box, PeriodicBox):
        wrap = box.u > box.v
        inside = (x >= box.u) ^ (x >= box.v) ^ wrap
    else:
        inside = (x >= box.u) & (x < box.v)
    return int(np.sum(np.all(inside, axis=1)))


def local_discrepancy(points: PointSet, box: Box | PeriodicBox) -> float:
    """Signed deviation of the box count from its expectation:
    count - n * volume. Lies in [-n, n]."""
    return count_points(points, box) - points.n * box.volume()


# ---------------------------------------------------------------------------
# CSV point format: one row per point, d comma-separated reals in [0,1),
# optionally preceded by a header comment of the form "# d=<d> n=<n>".
# ---------------------------------------------------------------------------


def read_points(source: str | IO[str]) -> PointSet:
    """Parse the CSV point format. Rejects out-of-range coordinates with the
    offending row number in the message."""
    close = False
    if isinstance(source, str):
        fh = open(source, "r", encoding="utf-8")
        close = True
    else:
        fh = source
    declared_d: int | None = None
    rows: list[list[float]] = []
    try:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line:
                continue
            if line.startswith("#"):
                declared_d = _parse_header_dim(line, declared_d)
                continue
            parts = line.split(",")
            try:
                vals = [float(p) for p in parts]
            except ValueError as exc:
                raise CoordinateError(f"row {lineno}: unparseable value ({exc})") from None
            for c in vals:
                if not math.isfinite(c) or c < 0.0 or c >= 1.0:
                    raise CoordinateError(
                        f"row {lineno}: coordinate {c!r} outside [0, 1)"
                    )
            if rows and len(vals) != len(rows[0]):
                raise CoordinateError(
                    f"row {lineno}: expected {len(rows[0])} columns, got {len(vals)}"
                )
            rows.append(vals)
    finally:
        if close:
            fh.close()
    if declared_d is not None and rows and len(rows[0]) != declared_d:
        raise CoordinateError(
            f"header declares d={declared_d} but rows have {len(rows[0])} columns"
        )
    if not rows:
        if declared_d is None:
            raise CoordinateError("no points and no '# d=...' header to fix the dimension")
        return PointSet(np.empty((0, declared_d)))
    return PointSet(np.asarray(rows, dtype=np.float64))


def _parse_header_dim(line: str, current: int | None) -> int | None:
    for tok in line.lstrip("#").split():
        if tok.startswith("d="):
            try:
                return int(tok[2:])
            except ValueError:
                raise CoordinateError(f"bad header token {tok!r}") from None
    return current


def write_points(points: PointSet, dest: IO[str]) -> None:
    """Emit the CSV point format with a '# d=.. n=..' header and 17
    significant digits per coordinate."""
    dest.write(f"# d={points.d} n={points.n}\n")
    for row in points.coords:
        dest.write(",".join(f"{c:.17g}" for c in row) + "\n")
