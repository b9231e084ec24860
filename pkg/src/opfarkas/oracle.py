"""Brute-force cross-checks for the LP-based decisions at desk scale.

Cones ``{x : M x <= 0}`` in at most four dimensions are described by their
lineality space and the extreme rays of the pointed part, found by plain
subset enumeration.  This module deliberately imports nothing from the
simplex code.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Sequence

from .lattice import ZERO, BudgetExceeded, DimensionError, as_point, dot
from .linalg import nullspace, primitive, rank

MAX_DIM = 4


@dataclass(frozen=True)
class ConeGenerators:
    rays: tuple
    lineality_basis: tuple


@dataclass(frozen=True)
class Holds:
    pass


@dataclass(frozen=True)
class CounterexampleDirection:
    direction: tuple


@dataclass(frozen=True)
class Counterexample:
    x: tuple


@dataclass(frozen=True)
class NotFound:
    trials: int


def _prepare(M: Sequence[Sequence], n: int | None):
    rows = [as_point(r) for r in M]
    if n is None:
        if not rows:
            raise DimensionError("cannot infer dimension of an empty matrix; pass n")
        n = len(rows[0])
    if any(len(r) != n for r in rows):
        raise DimensionError("ragged constraint matrix")
    if n > MAX_DIM:
        raise BudgetExceeded(f"oracle handles n <= {MAX_DIM}, got {n}")
    return rows, n


def extreme_rays(M: Sequence[Sequence], n: int | None = None) -> ConeGenerators:
    """Generators of ``{x : M x <= 0}``: lineality basis plus extreme rays.

    The lineality space is ``ker M``.  Rays of the pointed part live in its
    orthogonal complement, where each is cut out by a set of rows that,
    together with the lineality basis, has rank ``n - 1``.
    """
    rows, n = _prepare(M, n)
    lin = nullspace(rows, n)
    rays: list[tuple] = []
    seen = set()
    # a rank n-1 active set always contains one of at most n-1 rows giving the same direction
    for size in range(0, min(len(rows), max(n - 1, 0)) + 1):
        for subset in combinations(range(len(rows)), size):
            active = [rows[i] for i in subset] + list(lin)
            if rank(active, n) != n - 1:
                continue
            (d,) = nullspace(active, n)
            for cand in (d, tuple(-c for c in d)):
                if all(dot(r, cand) <= 0 for r in rows):
                    key = primitive(cand)
                    if key not in seen:
                        seen.add(key)
                        rays.append(key)
    return ConeGenerators(tuple(rays), tuple(primitive(d) for d in lin))


def inclusion_oracle(M: Sequence[Sequence], c: Sequence, n: int | None = None):
    """Does ``c . x <= 0`` hold on all of ``{x : M x <= 0}``?

    Checked on generators: every ray must pair nonpositively with ``c`` and
    every lineality vector must be orthogonal to it.
    """
    c = as_point(c)
    if n is None:
        n = len(c)
    gens = extreme_rays(M, n)
    if len(c) != n:
        raise DimensionError("functional length differs from dimension")
    for r in gens.rays:
        if dot(c, r) > 0:
            return CounterexampleDirection(r)
    for d in gens.lineality_basis:
        s = dot(c, d)
        if s > 0:
            return CounterexampleDirection(d)
        if s < 0:
            return CounterexampleDirection(tuple(-v for v in d))
    return Holds()


def falsify_by_sampling(M: Sequence[Sequence], c: Sequence, trials: int = 1000, seed: int = 0,
                        n: int | None = None, spread: int = 10):
    """Random search for ``x`` with ``M x <= 0`` and ``c . x > 0``.

    Coordinates are drawn as ``p/q`` with ``|p| <= spread`` and
    ``1 <= q <= spread`` from a generator seeded with ``seed``.  A
    :class:`NotFound` result proves nothing.
    """
    if trials < 1:
        raise ValueError("trials must be at least 1")
    c = as_point(c)
    rows = [as_point(r) for r in M]
    n = len(c) if n is None else n
    if any(len(r) != n for r in rows) or len(c) != n:
        raise DimensionError("dimension mismatch")
    rng = random.Random(seed)
    for _ in range(trials):
        x = tuple(Fraction(rng.randint(-spread, spread), rng.randint(1, spread)) for _ in range(n))
        if dot(c, x) > 0 and all(dot(r, x) <= 0 for r in rows):
            return Counterexample(x)
    return NotFound(trials)


def verify_generators(M: Sequence[Sequence], gens: ConeGenerators) -> bool:
    rows = [as_point(r) for r in M]
    ok_rays = all(all(dot(r, d) <= 0 for r in rows) for d in gens.rays)
    ok_lin = all(all(dot(r, d) == ZERO for r in rows) for d in gens.lineality_basis)
    return ok_rays and ok_lin
