"""Deterministic low-discrepancy sequence generators and the lifting map.

`VanDerCorput` and `Halton` are stateless: the k-th term is a pure function
of k, so prefixes are reproducible and terms can be queried concurrently.
`lift` appends the equispaced coordinate k/n to the first n terms, producing
a (d+1)-dimensional point set whose last coordinates are exactly
{0, 1/n, ..., (n-1)/n}.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import CoordinateError
from .pointsets import PointSet

__all__ = ["radical_inverse", "VanDerCorput", "Halton", "prefix", "lift"]

# Digit extraction is exact only while the index fits a double.
MAX_INDEX = 1 << 53


def radical_inverse(k: int, base: int) -> float:
    """Reflect the base-b digits of k about the radix point.

    k = sum a_i b^i maps to sum a_i b^(-i-1), always in [0, 1). Exact in
    float64 whenever the base is a power of two and k < 2^53.
    """
    if base < 2:
        raise ValueError(f"base must be >= 2, got {base}")
    if not 0 <= k < MAX_INDEX:
        raise ValueError(f"index must lie in [0, 2^53), got {k}")
    inv = 1.0 / base
    r, scale = 0.0, inv
    while k:
        k, digit = divmod(k, base)
        r += digit * scale
        scale *= inv
    return r


@dataclass(frozen=True)
class VanDerCorput:
    """One-dimensional radical-inverse sequence in a fixed base (default 2)."""

    base: int = 2

    def __post_init__(self) -> None:
        if self.base < 2:
            raise ValueError(f"base must be >= 2, got {self.base}")

    @property
    def d(self) -> int:
        return 1

    @property
    def name(self) -> str:
        return f"vdc(base={self.base})"

    def term(self, k: int) -> tuple[float, ...]:
        return (radical_inverse(k, self.base),)


@dataclass(frozen=True)
class Halton:
    """Componentwise radical inverses in pairwise coprime bases."""

    bases: tuple[int, ...]

    def __post_init__(self) -> None:
        bases = tuple(int(b) for b in self.bases)
        if len(bases) < 1:
            raise ValueError("need at least one base")
        for b in bases:
            if b < 2:
                raise ValueError(f"bases must be >= 2, got {b}")
        for i in range(len(bases)):
            for j in range(i + 1, len(bases)):
                if math.gcd(bases[i], bases[j]) != 1:
                    raise ValueError(
                        f"bases must be pairwise coprime; gcd({bases[i]}, {bases[j]}) > 1"
                    )
        object.__setattr__(self, "bases", bases)

    @property
    def d(self) -> int:
        return len(self.bases)

    @property
    def name(self) -> str:
        return "halton(" + ",".join(map(str, self.bases)) + ")"

    def term(self, k: int) -> tuple[float, ...]:
        return tuple(radical_inverse(k, b) for b in self.bases)


SequenceGen = VanDerCorput | Halton


def prefix(gen: SequenceGen, n: int) -> PointSet:
    """Point set of the first n terms, in generator order."""
    if n < 1:
        raise ValueError(f"prefix length must be >= 1, got {n}")
    rows = np.array([gen.term(k) for k in range(n)], dtype=np.float64)
    return PointSet(rows.reshape(n, gen.d))


def lift(source: SequenceGen | PointSet, n: int) -> PointSet:
    """First n terms with k/n appended: the set {(y_k, k/n) : k < n} in
    dimension d+1."""
    if n < 1:
        raise ValueError(f"lift length must be >= 1, got {n}")
    if isinstance(source, PointSet):
        if source.n < n:
            raise CoordinateError(f"need at least {n} points, have {source.n}")
        base = source.coords[:n]
    else:
        base = prefix(source, n).coords
    last = (np.arange(n, dtype=np.float64) / n).reshape(n, 1)
    return PointSet(np.hstack([base, last]))
