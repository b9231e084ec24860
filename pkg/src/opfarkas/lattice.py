"""Finite model of the ambient structures: the lattice Q^m and its base.

The Kantorovich space is realized as ``Q^m`` with the componentwise order.
Its base of band projections is the powerset of coordinate indices, an
orthomorphism is a diagonal multiplier, and every ``m x n`` rational matrix
is a (dominated) operator.  In finite dimension the universal completion of
``Q^m`` is ``Q^m`` itself, so orthomorphisms of the completion are again just
diagonal multipliers; nothing in the code needs to distinguish the two.

Scalars are :class:`fractions.Fraction` throughout.  Points are plain tuples
of fractions.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational
from typing import Iterable, Sequence

Point = tuple  # tuple[Fraction, ...]

ZERO = Fraction(0)
ONE = Fraction(1)


class DimensionError(ValueError):
    """Raised when operands do not have compatible shapes."""


class BudgetExceeded(RuntimeError):
    """Raised when an enumeration would exceed its configured size limit."""


def to_fraction(value) -> Fraction:
    """Convert ``value`` to an exact Fraction.

    Accepts ints, Fractions and strings such as ``"3/4"`` or ``"-2"``.
    Binary floats are rejected since they cannot be carried losslessly.
    """
    if isinstance(value, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(value, float):
        raise TypeError(f"refusing binary float {value!r}; pass a string or Fraction")
    if isinstance(value, (int, Rational)):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value.strip())
    raise TypeError(f"cannot interpret {value!r} as a rational")


def as_point(values: Iterable) -> Point:
    return tuple(to_fraction(v) for v in values)


def zeros(m: int) -> Point:
    return (ZERO,) * m


def dot(a: Sequence[Fraction], b: Sequence[Fraction]) -> Fraction:
    if len(a) != len(b):
        raise DimensionError(f"length mismatch: {len(a)} vs {len(b)}")
    return sum((x * y for x, y in zip(a, b)), ZERO)


def add(a: Point, b: Point) -> Point:
    _same_dim(a, b)
    return tuple(x + y for x, y in zip(a, b))


def sub(a: Point, b: Point) -> Point:
    _same_dim(a, b)
    return tuple(x - y for x, y in zip(a, b))


def scale(lam, a: Point) -> Point:
    lam = to_fraction(lam)
    return tuple(lam * x for x in a)


def leq(a: Point, b: Point) -> bool:
    """Componentwise order of Q^m."""
    _same_dim(a, b)
    return all(x <= y for x, y in zip(a, b))


def _same_dim(a, b) -> None:
    if len(a) != len(b):
        raise DimensionError(f"dimension mismatch: {len(a)} vs {len(b)}")


def pos_neg_parts(y: Point) -> tuple[Point, Point]:
    """Return ``(y+, y-)`` with ``y = y+ - y-`` and ``inf(y+, y-) = 0``."""
    plus = tuple(c if c > 0 else ZERO for c in y)
    minus = tuple(-c if c < 0 else ZERO for c in y)
    return plus, minus


def modulus(y: Point) -> Point:
    return tuple(abs(c) for c in y)


# --------------------------------------------------------------------------
# Bands


@dataclass(frozen=True)
class Band:
    """A band projection of Q^m, stored as the set of coordinates it keeps."""

    ambient_dim: int
    members: frozenset = frozenset()

    def __post_init__(self):
        if self.ambient_dim < 0:
            raise ValueError("ambient_dim must be nonnegative")
        members = frozenset(int(i) for i in self.members)
        bad = [i for i in members if not 0 <= i < self.ambient_dim]
        if bad:
            raise ValueError(f"band members {sorted(bad)} outside 0..{self.ambient_dim - 1}")
        object.__setattr__(self, "members", members)

    @classmethod
    def full(cls, m: int) -> Band:
        return cls(m, frozenset(range(m)))

    @classmethod
    def empty(cls, m: int) -> Band:
        return cls(m, frozenset())

    @classmethod
    def atom(cls, m: int, i: int) -> Band:
        return cls(m, frozenset((i,)))

    def sorted_members(self) -> list[int]:
        return sorted(self.members)

    def __contains__(self, i) -> bool:
        return i in self.members

    def __len__(self) -> int:
        return len(self.members)

    def __repr__(self) -> str:
        return f"Band({self.ambient_dim}, {self.sorted_members()})"


def _check_bands(b1: Band, b2: Band) -> None:
    if b1.ambient_dim != b2.ambient_dim:
        raise DimensionError(
            f"bands live in different spaces: {b1.ambient_dim} vs {b2.ambient_dim}"
        )


def meet(b1: Band, b2: Band) -> Band:
    _check_bands(b1, b2)
    return Band(b1.ambient_dim, b1.members & b2.members)


def join(b1: Band, b2: Band) -> Band:
    _check_bands(b1, b2)
    return Band(b1.ambient_dim, b1.members | b2.members)


def complement(b: Band) -> Band:
    return Band(b.ambient_dim, frozenset(range(b.ambient_dim)) - b.members)


def band_leq(b1: Band, b2: Band) -> bool:
    _check_bands(b1, b2)
    return b1.members <= b2.members


_BAND_OPS = {"meet": meet, "join": join, "leq": band_leq}


def band_algebra(op: str, b1: Band, b2: Band | None = None):
    """Dispatch a Boolean-algebra operation by name.

    ``op`` is one of ``meet``, ``join``, ``complement`` or ``leq``.
    """
    if op == "complement":
        if b2 is not None:
            raise TypeError("complement takes a single band")
        return complement(b1)
    try:
        fn = _BAND_OPS[op]
    except KeyError:
        raise ValueError(f"unknown band operation {op!r}") from None
    if b2 is None:
        raise TypeError(f"{op} needs two bands")
    return fn(b1, b2)


def apply_band(b: Band, y: Point) -> Point:
    if b.ambient_dim != len(y):
        raise DimensionError(f"band of dim {b.ambient_dim} applied to point of dim {len(y)}")
    return tuple(c if i in b.members else ZERO for i, c in enumerate(y))


_RELATIONS = {
    "<=": lambda a, b: a <= b,
    "=": lambda a, b: a == b,
    ">=": lambda a, b: a >= b,
}


def truth_value(rel: str, y: Point, z: Point) -> Band:
    """Coordinates on which ``y rel z`` holds.

    This is the finite shadow of a Boolean truth value: the relation holds
    outright exactly when the returned band is the full band.
    """
    _same_dim(y, z)
    try:
        test = _RELATIONS[rel]
    except KeyError:
        raise ValueError(f"relation must be one of {sorted(_RELATIONS)}, got {rel!r}") from None
    return Band(len(y), frozenset(i for i, (a, b) in enumerate(zip(y, z)) if test(a, b)))


# --------------------------------------------------------------------------
# Mixing


@dataclass(frozen=True)
class PartitionOfUnity:
    ambient_dim: int
    parts: tuple

    def __post_init__(self):
        parts = tuple(self.parts)
        object.__setattr__(self, "parts", parts)
        seen: set[int] = set()
        for p in parts:
            if p.ambient_dim != self.ambient_dim:
                raise DimensionError("partition part has wrong ambient dimension")
            if seen & p.members:
                raise ValueError("partition parts must be pairwise disjoint")
            seen |= p.members
        if seen != set(range(self.ambient_dim)):
            raise ValueError("partition parts must cover every coordinate")


def mix(p: PartitionOfUnity, ys: Sequence[Point]) -> Point:
    """Assemble a point that agrees with ``ys[j]`` on ``p.parts[j]``."""
    if len(ys) != len(p.parts):
        raise DimensionError(f"{len(p.parts)} parts but {len(ys)} points")
    out = [ZERO] * p.ambient_dim
    for part, y in zip(p.parts, ys):
        if len(y) != p.ambient_dim:
            raise DimensionError("mixed point has wrong dimension")
        for i in part.members:
            out[i] = y[i]
    return tuple(out)


# --------------------------------------------------------------------------
# Operators and orthomorphisms


@dataclass(frozen=True)
class Operator:
    """An exact ``rows x cols`` rational matrix, i.e. a linear map Q^cols -> Q^rows."""

    rows: int
    cols: int
    entries: tuple

    def __post_init__(self):
        grid = tuple(tuple(to_fraction(v) for v in row) for row in self.entries)
        if len(grid) != self.rows or any(len(r) != self.cols for r in grid):
            raise DimensionError(f"grid does not have shape ({self.rows}, {self.cols})")
        object.__setattr__(self, "entries", grid)

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence], cols: int | None = None) -> Operator:
        rows = [list(r) for r in rows]
        if cols is None:
            if not rows:
                raise DimensionError("cannot infer column count of an empty matrix")
            cols = len(rows[0])
        return cls(len(rows), cols, rows)

    @classmethod
    def zero(cls, rows: int, cols: int) -> Operator:
        return cls(rows, cols, [[ZERO] * cols for _ in range(rows)])

    @classmethod
    def identity(cls, n: int) -> Operator:
        return cls(n, n, [[ONE if i == j else ZERO for j in range(n)] for i in range(n)])

    @property
    def shape(self) -> tuple[int, int]:
        return self.rows, self.cols

    def row(self, i: int) -> Point:
        return self.entries[i]

    def column(self, j: int) -> Point:
        return tuple(r[j] for r in self.entries)

    def apply(self, x: Sequence) -> Point:
        if len(x) != self.cols:
            raise DimensionError(f"operator with {self.cols} columns applied to vector of length {len(x)}")
        return tuple(dot(r, x) for r in self.entries)

    def __matmul__(self, other: Operator) -> Operator:
        if self.cols != other.rows:
            raise DimensionError(f"cannot compose {self.shape} with {other.shape}")
        cols = [other.column(j) for j in range(other.cols)]
        return Operator(self.rows, other.cols, [[dot(r, c) for c in cols] for r in self.entries])

    def __add__(self, other: Operator) -> Operator:
        _same_shape(self, other)
        return Operator(self.rows, self.cols,
                        [add(a, b) for a, b in zip(self.entries, other.entries)])

    def __sub__(self, other: Operator) -> Operator:
        _same_shape(self, other)
        return Operator(self.rows, self.cols,
                        [sub(a, b) for a, b in zip(self.entries, other.entries)])

    def __neg__(self) -> Operator:
        return Operator(self.rows, self.cols, [[-v for v in r] for r in self.entries])

    def scaled(self, lam) -> Operator:
        return Operator(self.rows, self.cols, [scale(lam, r) for r in self.entries])

    def transpose(self) -> Operator:
        return Operator(self.cols, self.rows, [self.column(j) for j in range(self.cols)])

    def is_zero(self) -> bool:
        return all(v == 0 for r in self.entries for v in r)

    def is_nonnegative(self) -> bool:
        return all(v >= 0 for r in self.entries for v in r)

    def entrywise_leq(self, other: Operator) -> bool:
        _same_shape(self, other)
        return all(leq(a, b) for a, b in zip(self.entries, other.entries))


def _same_shape(a: Operator, b: Operator) -> None:
    if a.shape != b.shape:
        raise DimensionError(f"shape mismatch: {a.shape} vs {b.shape}")


def check_same_shape(ops: Iterable[Operator]) -> tuple[int, int] | None:
    shape = None
    for op in ops:
        if shape is None:
            shape = op.shape
        elif op.shape != shape:
            raise DimensionError(f"shape mismatch: {shape} vs {op.shape}")
    return shape


@dataclass(frozen=True)
class DiagonalOrthomorphism:
    """Coordinatewise multiplier ``y -> diag * y`` of Q^m."""

    diag: tuple

    def __post_init__(self):
        object.__setattr__(self, "diag", as_point(self.diag))

    @property
    def dim(self) -> int:
        return len(self.diag)

    def is_positive(self) -> bool:
        return all(d >= 0 for d in self.diag)

    def apply(self, y: Point) -> Point:
        _same_dim(self.diag, y)
        return tuple(d * c for d, c in zip(self.diag, y))

    def compose(self, op: Operator) -> Operator:
        """The operator ``diag(self) @ op``."""
        if op.rows != self.dim:
            raise DimensionError(f"orthomorphism of dim {self.dim} composed with {op.shape}")
        return Operator(op.rows, op.cols, [scale(d, r) for d, r in zip(self.diag, op.entries)])


def combine(alphas: Sequence[DiagonalOrthomorphism], ops: Sequence[Operator],
            shape: tuple[int, int]) -> Operator:
    """``sum_k diag(alphas[k]) @ ops[k]``; ``shape`` fixes the result when empty."""
    if len(alphas) != len(ops):
        raise DimensionError(f"{len(alphas)} multipliers for {len(ops)} operators")
    total = Operator.zero(*shape)
    for a, op in zip(alphas, ops):
        total = total + a.compose(op)
    return total
