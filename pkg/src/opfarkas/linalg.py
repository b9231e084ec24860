"""Exact Gaussian elimination over the rationals.

Nothing here touches the simplex code; the brute-force oracle relies on that.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd, lcm
from typing import Sequence

from .lattice import ZERO, ONE, DimensionError


def rref(rows: Sequence[Sequence[Fraction]], ncols: int | None = None):
    """Reduced row echelon form.

    Returns ``(matrix, pivot_columns)`` where ``matrix`` is a fresh list of
    lists holding the nonzero rows only.
    """
    m = [list(map(Fraction, r)) for r in rows]
    if ncols is None:
        ncols = len(m[0]) if m else 0
    if any(len(r) != ncols for r in m):
        raise DimensionError("ragged matrix")
    pivots = []
    r = 0
    for c in range(ncols):
        pr = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if pr is None:
            continue
        m[r], m[pr] = m[pr], m[r]
        piv = m[r][c]
        if piv != 1:
            m[r] = [v / piv for v in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m[:r], pivots


def rank(rows, ncols: int | None = None) -> int:
    return len(rref(rows, ncols)[1])


def nullspace(rows, ncols: int) -> list[tuple]:
    """Basis of ``{x : rows @ x = 0}``, one vector per free column."""
    red, pivots = rref(rows, ncols)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        v = [ZERO] * ncols
        v[f] = ONE
        for r, pc in enumerate(pivots):
            v[pc] = -red[r][f]
        basis.append(tuple(v))
    return basis


def solve_combination(rows: Sequence[Sequence[Fraction]], target: Sequence[Fraction]):
    """Find ``c`` with ``sum_q c[q] * rows[q] == target``, or ``None``.

    Works on the augmented transpose, so any solution in the row space is
    found; free coefficients are set to zero.
    """
    p = len(rows)
    n = len(target)
    if any(len(r) != n for r in rows):
        raise DimensionError("rows and target differ in length")
    # system: for each column j, sum_q c_q rows[q][j] = target[j]
    aug = [[rows[q][j] for q in range(p)] + [target[j]] for j in range(n)]
    red, pivots = rref(aug, p + 1)
    if p in pivots:
        return None
    c = [ZERO] * p
    for r, pc in enumerate(pivots):
        c[pc] = red[r][p]
    return tuple(c)


def primitive(v: Sequence[Fraction]) -> tuple:
    """Positive rescaling of ``v`` to a primitive integer vector (zero stays zero)."""
    den = 1
    for x in v:
        den = lcm(den, Fraction(x).denominator)
    ints = [int(Fraction(x) * den) for x in v]
    g = 0
    for x in ints:
        g = gcd(g, abs(x))
    if g == 0:
        return tuple(Fraction(0) for _ in v)
    return tuple(Fraction(x // g) for x in ints)
