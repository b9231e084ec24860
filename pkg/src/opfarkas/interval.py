"""Interval operators, their support maps, and weak interval solutions.

An interval operator is an entrywise order interval ``[lower, upper]`` of
rational matrices.  Its support map

    P(x) = upper @ x+  -  lower @ x-

is sublinear and positively homogeneous, and on each closed orthant it is the
linear map whose column ``j`` is taken from ``upper`` when ``x_j >= 0`` and
from ``lower`` when ``x_j <= 0``.  That orthant-wise linearity is what lets
the inclusion test below run as a finite family of LPs.

In finite dimension the width ``upper - lower`` is always a finite sum of
pairwise disjoint single-entry matrices, so every interval operator is
adapted; :func:`adapted_decomposition` just writes that sum out.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Sequence

from .lattice import (
    ZERO,
    Band,
    BudgetExceeded,
    DiagonalOrthomorphism,
    Operator,
    as_point,
    check_same_shape,
    combine,
    pos_neg_parts,
    sub,
)
from .farkas import NoSolution, map_strata
from .lp import Constraint, Feasible, LinearProgram, solve

DEFAULT_ORTHANT_BUDGET = 12


@dataclass(frozen=True)
class IntervalOperator:
    lower: Operator
    upper: Operator

    def __post_init__(self):
        check_same_shape((self.lower, self.upper))
        if not self.lower.entrywise_leq(self.upper):
            raise ValueError("interval operator needs lower <= upper entrywise")

    @classmethod
    def degenerate(cls, T: Operator) -> IntervalOperator:
        return cls(T, T)

    @property
    def shape(self):
        return self.lower.shape

    def contains(self, T: Operator) -> bool:
        return self.lower.entrywise_leq(T) and T.entrywise_leq(self.upper)

    def midpoint(self) -> Operator:
        return (self.lower + self.upper).scaled(Fraction(1, 2))


@dataclass(frozen=True)
class WeakSolution:
    alphas: tuple
    A_selections: tuple
    B_selection: Operator


@dataclass(frozen=True)
class Holds:
    pass


@dataclass(frozen=True)
class Violation:
    x: tuple
    b: Band


def sublinear_apply(T: IntervalOperator, x: Sequence) -> tuple:
    x = as_point(x)
    plus, minus = pos_neg_parts(x)
    return sub(T.upper.apply(plus), T.lower.apply(minus))


def adapted_decomposition(T: IntervalOperator) -> list[Operator]:
    """Single-entry matrices summing to ``upper - lower``, in row-major order."""
    width = T.upper - T.lower
    rows, cols = width.shape
    parts = []
    for i in range(rows):
        for j in range(cols):
            w = width.entries[i][j]
            if w != 0:
                grid = [[ZERO] * cols for _ in range(rows)]
                grid[i][j] = w
                parts.append(Operator(rows, cols, grid))
    return parts


def _check(A_intervals, B_interval) -> tuple[int, int]:
    shape = check_same_shape([T.lower for T in A_intervals] + [B_interval.lower])
    return shape


def find_weak_solution(A_intervals: Sequence[IntervalOperator], B_interval: IntervalOperator,
                       parallel: bool = False):
    """Look for ``alpha_k >= 0`` and selections ``A_k``, ``B`` with ``B = sum alpha_k A_k``.

    The bilinear condition is linearized per stratum with ``c_k = alpha_k *
    row_i(A_k)``: scaling an interval row by ``alpha_k >= 0`` scales its
    bounds, so ``alpha_k lower <= c_k <= alpha_k upper`` describes exactly
    the reachable ``c_k``.
    """
    A_intervals = tuple(A_intervals)
    m, n = _check(A_intervals, B_interval)
    N = len(A_intervals)
    nv = N + N * n + n

    def cvar(k, j):
        return N + k * n + j

    def bvar(j):
        return N + N * n + j

    def stratum(i):
        cons = []
        for k, T in enumerate(A_intervals):
            lo, hi = T.lower.row(i), T.upper.row(i)
            for j in range(n):
                row = [ZERO] * nv
                row[k], row[cvar(k, j)] = lo[j], -1
                cons.append(Constraint(row, "<=", 0))
                row = [ZERO] * nv
                row[k], row[cvar(k, j)] = -hi[j], 1
                cons.append(Constraint(row, "<=", 0))
        lo, hi = B_interval.lower.row(i), B_interval.upper.row(i)
        for j in range(n):
            row = [ZERO] * nv
            row[bvar(j)] = 1
            cons.append(Constraint(row, ">=", lo[j]))
            cons.append(Constraint(row, "<=", hi[j]))
            row = [ZERO] * nv
            for k in range(N):
                row[cvar(k, j)] = 1
            row[bvar(j)] = -1
            cons.append(Constraint(row, "=", 0))
        if not cons:
            return (ZERO,) * N, ((),) * N, ()
        flags = (True,) * N + (False,) * (N * n + n)
        out = solve(LinearProgram(nv, cons, nonneg=flags))
        if not isinstance(out, Feasible):
            return None
        z = out.point
        alphas = z[:N]
        sel = []
        for k, T in enumerate(A_intervals):
            if alphas[k] == 0:
                sel.append(T.lower.row(i))
            else:
                sel.append(tuple(z[cvar(k, j)] / alphas[k] for j in range(n)))
        return alphas, tuple(sel), tuple(z[bvar(j)] for j in range(n))

    per = []
    for i, res in enumerate(map_strata(stratum, m, parallel)):
        if res is None:
            return NoSolution("no weak interval solution on this stratum", i)
        per.append(res)
    alphas = tuple(DiagonalOrthomorphism(tuple(per[i][0][k] for i in range(m))) for k in range(N))
    A_sel = tuple(Operator(m, n, [per[i][1][k] for i in range(m)]) for k in range(N))
    B_sel = Operator(m, n, [per[i][2] for i in range(m)])
    return WeakSolution(alphas, A_sel, B_sel)


def verify_weak_solution(A_intervals, B_interval, sol: WeakSolution) -> bool:
    if len(sol.alphas) != len(A_intervals) or len(sol.A_selections) != len(A_intervals):
        return False
    if any(not a.is_positive() or a.dim != B_interval.shape[0] for a in sol.alphas):
        return False
    if not all(T.contains(S) for T, S in zip(A_intervals, sol.A_selections)):
        return False
    if not B_interval.contains(sol.B_selection):
        return False
    return combine(sol.alphas, sol.A_selections, B_interval.shape) == sol.B_selection


def _orthant_forms(T: IntervalOperator, i: int, sign: Sequence[int], upper_on_plus: bool):
    """Row ``i`` of the linear piece of the support map on orthant ``sign``.

    With ``upper_on_plus`` the piece for ``P_T(x)``; otherwise the piece of
    ``x -> P_T(-x)``, whose coefficients are negated and use the opposite
    bound on each coordinate.
    """
    lo, hi = T.lower.row(i), T.upper.row(i)
    if upper_on_plus:
        return tuple(hi[j] if s > 0 else lo[j] for j, s in enumerate(sign))
    return tuple(-(lo[j] if s > 0 else hi[j]) for j, s in enumerate(sign))


def check_interval_inclusion(A_intervals: Sequence[IntervalOperator], B_interval: IntervalOperator,
                             orthant_budget: int = DEFAULT_ORTHANT_BUDGET, parallel: bool = False):
    """Test ``{b P_B >= 0}`` contains ``{b P_Ak(-.) <= 0 for all k}`` for every band ``b``.

    Per stratum and per closed orthant, one LP asks for ``x`` in the orthant
    with ``P_Ak(-x)_i <= 0`` for all ``k`` and ``P_B(x)_i <= -1``; by positive
    homogeneity that is equivalent to ``P_B(x)_i < 0``.  Orthants are visited
    in lexicographic order with ``+`` before ``-``.
    """
    A_intervals = tuple(A_intervals)
    m, n = _check(A_intervals, B_interval)
    if n > orthant_budget:
        raise BudgetExceeded(f"n = {n} exceeds the orthant budget {orthant_budget}")
    signs = list(product((1, -1), repeat=n))

    def stratum(i):
        for sign in signs:
            cons = []
            for T in A_intervals:
                f = _orthant_forms(T, i, sign, upper_on_plus=False)
                cons.append(Constraint(tuple(c * s for c, s in zip(f, sign)), "<=", 0))
            g = _orthant_forms(B_interval, i, sign, upper_on_plus=True)
            cons.append(Constraint(tuple(c * s for c, s in zip(g, sign)), "<=", -1))
            out = solve(LinearProgram(n, cons))
            if isinstance(out, Feasible):
                return tuple(s * z for s, z in zip(sign, out.point))
        return None

    for i, x in enumerate(map_strata(stratum, m, parallel)):
        if x is not None:
            return Violation(x, Band.atom(m, i))
    return Holds()


def verify_violation(A_intervals, B_interval, v: Violation) -> bool:
    """Direct evaluation of the support maps at ``v.x`` on band ``v.b``."""
    if not v.b.members or len(v.x) != B_interval.shape[1]:
        return False
    neg = tuple(-c for c in v.x)
    for T in A_intervals:
        vals = sublinear_apply(T, neg)
        if any(vals[i] > 0 for i in v.b.members):
            return False
    vals = sublinear_apply(B_interval, v.x)
    return any(vals[i] < 0 for i in v.b.members)
