"""Exact rational linear programming.

A dense two-phase tableau simplex over :class:`~fractions.Fraction` with
Bland's rule for both the entering and the leaving variable.  Every outcome
carries enough data to be re-checked by plain arithmetic:

* ``Feasible`` / ``Optimal`` carry a point (``Optimal`` also carries dual
  multipliers proving that no feasible point does better);
* ``Infeasible`` carries Farkas multipliers, one per constraint;
* ``Unbounded`` carries a feasible point and an improving recession ray.

Multiplier sign conventions (``y`` indexed like ``lp.constraints``):

``Infeasible``
    ``y_i >= 0`` on ``<=`` rows, ``y_i <= 0`` on ``>=`` rows, free on ``=``
    rows; the aggregated row ``sum_i y_i a_i`` is ``>= 0`` on nonnegative
    variables and ``== 0`` on free ones, and ``sum_i y_i b_i < 0``.

``Optimal`` (for ``min``; negate everything for ``max``)
    ``y_i <= 0`` on ``<=`` rows, ``y_i >= 0`` on ``>=`` rows, and
    ``c - sum_i y_i a_i`` is ``>= 0`` on nonnegative variables and ``== 0``
    on free ones, with ``sum_i y_i b_i`` equal to the optimal value.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import comb
from typing import Sequence

from .lattice import ZERO, ONE, DimensionError, as_point, dot, to_fraction
from .linalg import primitive

RELATIONS = ("<=", "=", ">=")


class CyclingError(RuntimeError):
    """Pivot count exceeded the number of bases; Bland's rule forbids this."""


@dataclass(frozen=True)
class Constraint:
    coeffs: tuple
    rel: str
    rhs: Fraction

    def __post_init__(self):
        if self.rel not in RELATIONS:
            raise ValueError(f"relation must be one of {RELATIONS}, got {self.rel!r}")
        object.__setattr__(self, "coeffs", as_point(self.coeffs))
        object.__setattr__(self, "rhs", to_fraction(self.rhs))


@dataclass(frozen=True)
class Objective:
    coeffs: tuple
    sense: str = "min"

    def __post_init__(self):
        if self.sense not in ("min", "max"):
            raise ValueError(f"sense must be 'min' or 'max', got {self.sense!r}")
        object.__setattr__(self, "coeffs", as_point(self.coeffs))


@dataclass(frozen=True)
class LinearProgram:
    num_vars: int
    constraints: tuple = ()
    objective: Objective | None = None
    nonneg: tuple | None = None

    def __post_init__(self):
        cons = tuple(c if isinstance(c, Constraint) else Constraint(*c) for c in self.constraints)
        object.__setattr__(self, "constraints", cons)
        for c in cons:
            if len(c.coeffs) != self.num_vars:
                raise DimensionError(
                    f"constraint has {len(c.coeffs)} coefficients, expected {self.num_vars}")
        if self.objective is not None and len(self.objective.coeffs) != self.num_vars:
            raise DimensionError("objective length differs from num_vars")
        nonneg = (True,) * self.num_vars if self.nonneg is None else tuple(bool(f) for f in self.nonneg)
        if len(nonneg) != self.num_vars:
            raise DimensionError("nonneg flags length differs from num_vars")
        object.__setattr__(self, "nonneg", nonneg)
        if not cons and self.objective is None:
            raise ValueError("a linear program needs a constraint or an objective")


@dataclass(frozen=True)
class Feasible:
    point: tuple
    pivots: int = field(default=0, compare=False)


@dataclass(frozen=True)
class Optimal:
    point: tuple
    value: Fraction
    duals: tuple
    pivots: int = field(default=0, compare=False)


@dataclass(frozen=True)
class Infeasible:
    multipliers: tuple
    pivots: int = field(default=0, compare=False)


@dataclass(frozen=True)
class Unbounded:
    point: tuple
    ray: tuple
    pivots: int = field(default=0, compare=False)


LPOutcome = Feasible | Optimal | Infeasible | Unbounded


class _Tableau:
    """Dense simplex tableau with one artificial column per row."""

    def __init__(self, lp: LinearProgram):
        self.lp = lp
        # column layout: structural columns, then slack/surplus, then artificials
        self.var_cols: list[tuple[int, int | None]] = []
        ncol = 0
        for flag in lp.nonneg:
            if flag:
                self.var_cols.append((ncol, None))
                ncol += 1
            else:
                self.var_cols.append((ncol, ncol + 1))
                ncol += 2
        self.n_struct = ncol
        slack_of = {}
        for i, c in enumerate(lp.constraints):
            if c.rel != "=":
                slack_of[i] = ncol
                ncol += 1
        self.n_nonart = ncol
        nrows = len(lp.constraints)
        self.art = list(range(ncol, ncol + nrows))
        ncol += nrows
        self.ncols = ncol
        self.signs = []
        self.rows = []
        for i, c in enumerate(lp.constraints):
            row = [ZERO] * (ncol + 1)
            for j, (p, q) in enumerate(self.var_cols):
                row[p] = c.coeffs[j]
                if q is not None:
                    row[q] = -c.coeffs[j]
            if c.rel == "<=":
                row[slack_of[i]] = ONE
            elif c.rel == ">=":
                row[slack_of[i]] = -ONE
            row[-1] = c.rhs
            s = -1 if c.rhs < 0 else 1
            if s < 0:
                row = [-v for v in row]
            row[self.art[i]] = ONE
            self.signs.append(s)
            self.rows.append(row)
        self.basis = list(self.art)
        self.obj: list[Fraction] = []
        self.pivots = 0
        self._limit = comb(self.ncols, nrows) + 1

    def set_costs(self, cost: Sequence[Fraction]) -> None:
        d = list(cost) + [ZERO]
        for i, b in enumerate(self.basis):
            cb = cost[b]
            if cb:
                d = [a - cb * v for a, v in zip(d, self.rows[i])]
        self.obj = d

    def pivot(self, r: int, j: int) -> None:
        row = self.rows[r]
        pv = row[j]
        if pv != 1:
            row = [v / pv for v in row]
            self.rows[r] = row
        for i, other in enumerate(self.rows):
            if i != r and other[j]:
                f = other[j]
                self.rows[i] = [a - f * b for a, b in zip(other, row)]
        if self.obj[j]:
            f = self.obj[j]
            self.obj = [a - f * b for a, b in zip(self.obj, row)]
        self.basis[r] = j
        self.pivots += 1

    def run(self, limit_cols: int) -> int | None:
        """Bland-rule simplex on columns ``< limit_cols``.

        Returns ``None`` at optimality, else the entering column along which
        the objective is unbounded below.
        """
        start = self.pivots
        while True:
            j = next((c for c in range(limit_cols) if self.obj[c] < 0), None)
            if j is None:
                return None
            best = None
            for i, row in enumerate(self.rows):
                if row[j] > 0:
                    key = (row[-1] / row[j], self.basis[i])
                    if best is None or key < best[0]:
                        best = (key, i)
            if best is None:
                return j
            self.pivot(best[1], j)
            if self.pivots - start > self._limit:
                raise CyclingError(f"more than {self._limit} pivots in one phase")

    def std_point(self) -> list[Fraction]:
        x = [ZERO] * self.ncols
        for i, b in enumerate(self.basis):
            x[b] = self.rows[i][-1]
        return x

    def to_original(self, xs: Sequence[Fraction]) -> tuple:
        out = []
        for p, q in self.var_cols:
            out.append(xs[p] if q is None else xs[p] - xs[q])
        return tuple(out)


def solve(lp: LinearProgram) -> LPOutcome:
    """Solve ``lp`` exactly; see the module docstring for the outcome contract."""
    t = _Tableau(lp)

    # phase one: minimise the sum of artificials
    phase1 = [ZERO] * t.ncols
    for a in t.art:
        phase1[a] = ONE
    t.set_costs(phase1)
    t.run(t.n_nonart)
    if -t.obj[-1] > 0:
        y = tuple(s * (t.obj[a] - ONE) for s, a in zip(t.signs, t.art))
        return Infeasible(y, pivots=t.pivots)

    # push zero-level artificials out of the basis where possible
    for i in range(len(t.rows)):
        if t.basis[i] in t.art:
            j = next((c for c in range(t.n_nonart) if t.rows[i][c] != 0), None)
            if j is not None:
                t.pivot(i, j)

    if lp.objective is None:
        return Feasible(t.to_original(t.std_point()), pivots=t.pivots)

    flip = -1 if lp.objective.sense == "max" else 1
    cost = [ZERO] * t.ncols
    for j, (p, q) in enumerate(t.var_cols):
        cj = flip * lp.objective.coeffs[j]
        cost[p] = cj
        if q is not None:
            cost[q] = -cj
    t.set_costs(cost)
    entering = t.run(t.n_nonart)
    point = t.to_original(t.std_point())
    if entering is not None:
        d = [ZERO] * t.ncols
        d[entering] = ONE
        for i, b in enumerate(t.basis):
            d[b] = -t.rows[i][entering]
        return Unbounded(point, t.to_original(d), pivots=t.pivots)
    duals = tuple(-flip * s * t.obj[a] for s, a in zip(t.signs, t.art))
    value = dot(lp.objective.coeffs, point)
    return Optimal(point, value, duals, pivots=t.pivots)


def pivot_bound(lp: LinearProgram) -> int:
    """Upper bound on the total pivots Bland's rule can make on ``lp``."""
    t = _Tableau(lp)
    return 2 * t._limit + len(lp.constraints)


# --------------------------------------------------------------------------
# Independent re-verification


def canonical_form(lp: LinearProgram):
    """Rewrite the constraints as ``M x <= r``.

    Returns ``(M, r, origin)`` where ``origin[k] = (i, sign)`` records that
    canonical row ``k`` is ``sign`` times original row ``i``.
    """
    M, r, origin = [], [], []
    for i, c in enumerate(lp.constraints):
        if c.rel in ("<=", "="):
            M.append(c.coeffs)
            r.append(c.rhs)
            origin.append((i, 1))
        if c.rel in (">=", "="):
            M.append(tuple(-v for v in c.coeffs))
            r.append(-c.rhs)
            origin.append((i, -1))
    return M, r, origin


def canonical_multipliers(lp: LinearProgram, y: Sequence[Fraction]) -> tuple:
    """Map per-constraint Farkas multipliers onto the rows of :func:`canonical_form`."""
    _, _, origin = canonical_form(lp)
    out = []
    for i, sign in origin:
        v = sign * y[i]
        out.append(v if v > 0 else ZERO)
    return tuple(out)


def is_feasible_point(lp: LinearProgram, x: Sequence[Fraction]) -> bool:
    if len(x) != lp.num_vars:
        return False
    if any(flag and v < 0 for flag, v in zip(lp.nonneg, x)):
        return False
    for c in lp.constraints:
        lhs = dot(c.coeffs, x)
        if c.rel == "<=" and not lhs <= c.rhs:
            return False
        if c.rel == ">=" and not lhs >= c.rhs:
            return False
        if c.rel == "=" and lhs != c.rhs:
            return False
    return True


def is_recession_ray(lp: LinearProgram, d: Sequence[Fraction]) -> bool:
    if len(d) != lp.num_vars:
        return False
    if any(flag and v < 0 for flag, v in zip(lp.nonneg, d)):
        return False
    for c in lp.constraints:
        lhs = dot(c.coeffs, d)
        if (c.rel == "<=" and lhs > 0) or (c.rel == ">=" and lhs < 0) or (c.rel == "=" and lhs != 0):
            return False
    return True


def is_farkas_certificate(lp: LinearProgram, y: Sequence[Fraction]) -> bool:
    """Check ``y`` proves infeasibility, via the canonical ``M x <= r`` form."""
    if len(y) != len(lp.constraints):
        return False
    M, r, origin = canonical_form(lp)
    yc = canonical_multipliers(lp, y)
    # the canonical multipliers must reproduce y exactly
    back = [ZERO] * len(lp.constraints)
    for (i, sign), v in zip(origin, yc):
        back[i] += sign * v
    if tuple(back) != tuple(y):
        return False
    agg = [sum((yc[k] * M[k][j] for k in range(len(M))), ZERO) for j in range(lp.num_vars)]
    for flag, a in zip(lp.nonneg, agg):
        if (flag and a < 0) or (not flag and a != 0):
            return False
    return dot(yc, r) < 0


def is_optimality_certificate(lp: LinearProgram, x, value, duals) -> bool:
    obj = lp.objective
    if obj is None or len(duals) != len(lp.constraints):
        return False
    if not is_feasible_point(lp, x) or dot(obj.coeffs, x) != value:
        return False
    flip = -1 if obj.sense == "max" else 1
    # work with the min form: y' = flip * y, c' = flip * c
    for c, y in zip(lp.constraints, duals):
        yy = flip * y
        if (c.rel == "<=" and yy > 0) or (c.rel == ">=" and yy < 0):
            return False
    for j, flag in enumerate(lp.nonneg):
        red = flip * obj.coeffs[j] - sum((flip * y * c.coeffs[j] for c, y in zip(lp.constraints, duals)), ZERO)
        if (flag and red < 0) or (not flag and red != 0):
            return False
    bound = sum((y * c.rhs for c, y in zip(lp.constraints, duals)), ZERO)
    return bound == value


def verify_outcome(lp: LinearProgram, outcome: LPOutcome) -> bool:
    """Re-check ``outcome`` against ``lp`` by exact arithmetic only."""
    if isinstance(outcome, Feasible):
        return is_feasible_point(lp, outcome.point)
    if isinstance(outcome, Optimal):
        return is_optimality_certificate(lp, outcome.point, outcome.value, outcome.duals)
    if isinstance(outcome, Infeasible):
        return is_farkas_certificate(lp, outcome.multipliers)
    if isinstance(outcome, Unbounded):
        obj = lp.objective
        if obj is None or not is_feasible_point(lp, outcome.point):
            return False
        if not is_recession_ray(lp, outcome.ray):
            return False
        gain = dot(obj.coeffs, outcome.ray)
        return gain > 0 if obj.sense == "max" else gain < 0
    return False


# --------------------------------------------------------------------------
# Conic membership (scalar Farkas lemma)


@dataclass(frozen=True)
class Multipliers:
    """Nonnegative weights with ``sum_k alphas[k] * generators[k] == target``."""

    alphas: tuple


@dataclass(frozen=True)
class SeparatingVector:
    """``y`` with ``generators[k] . y <= 0`` for all ``k`` and ``target . y > 0``."""

    y: tuple


def separates(generators, target, y) -> bool:
    return all(dot(g, y) <= 0 for g in generators) and dot(target, y) > 0


def _tidy_separator(generators, target, y) -> tuple:
    """Zero out coordinates greedily while ``y`` still separates, then make it primitive."""
    y = list(y)
    for j in range(len(y)):
        if y[j] != 0:
            trial = y[:j] + [ZERO] + y[j + 1:]
            if separates(generators, target, trial):
                y = trial
    return primitive(y)


def conic_membership(generators: Sequence[Sequence], target: Sequence):
    """Decide whether ``target`` lies in the cone spanned by ``generators``.

    Returns :class:`Multipliers` or :class:`SeparatingVector`; exactly one of
    them exists for every input.
    """
    target = as_point(target)
    gens = [as_point(g) for g in generators]
    n = len(target)
    for g in gens:
        if len(g) != n:
            raise DimensionError(f"generator of length {len(g)}, target of length {n}")
    if not gens:
        if all(v == 0 for v in target):
            return Multipliers(())
        return SeparatingVector(_tidy_separator(gens, target, target))
    if n == 0:
        return Multipliers((ZERO,) * len(gens))
    rows = [Constraint(tuple(g[j] for g in gens), "=", target[j]) for j in range(n)]
    out = solve(LinearProgram(len(gens), rows))
    if isinstance(out, Feasible):
        return Multipliers(out.point)
    assert isinstance(out, Infeasible)
    y = tuple(-v for v in out.multipliers)
    return SeparatingVector(_tidy_separator(gens, target, y))
