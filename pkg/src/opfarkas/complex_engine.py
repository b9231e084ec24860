"""Certificates with complex multipliers over the complexification of Q^m.

Moduli of Gaussian rationals are usually irrational, so every comparison that
involves ``|c|`` goes through rational enclosures ``lower <= |c| <= upper``
that are refined until the comparison is settled.  The search side replaces
the disk ``|c| <= t`` by a circumscribed polygon whose edge normals are exact
rational points of the unit circle; this is a relaxation, so a candidate is
only returned after it passes the exact verifier.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from fractions import Fraction
from math import isqrt
from typing import Sequence

from .lattice import ZERO, ONE, DimensionError, Operator, as_point, to_fraction
from .lp import Constraint, LinearProgram, Objective, Optimal, Feasible, solve

DEFAULT_REFINEMENTS = 48


@dataclass(frozen=True)
class GaussianRational:
    re: Fraction = ZERO
    im: Fraction = ZERO

    def __post_init__(self):
        object.__setattr__(self, "re", to_fraction(self.re))
        object.__setattr__(self, "im", to_fraction(self.im))

    @classmethod
    def of(cls, value) -> GaussianRational:
        """Coerce a rational, a ``[re, im]`` pair or a GaussianRational."""
        if isinstance(value, GaussianRational):
            return value
        if isinstance(value, (list, tuple)):
            if len(value) != 2:
                raise ValueError(f"complex value must be [re, im], got {value!r}")
            return cls(value[0], value[1])
        return cls(value, ZERO)

    def __add__(self, other):
        other = GaussianRational.of(other)
        return GaussianRational(self.re + other.re, self.im + other.im)

    __radd__ = __add__

    def __sub__(self, other):
        other = GaussianRational.of(other)
        return GaussianRational(self.re - other.re, self.im - other.im)

    def __neg__(self):
        return GaussianRational(-self.re, -self.im)

    def __mul__(self, other):
        other = GaussianRational.of(other)
        return GaussianRational(self.re * other.re - self.im * other.im,
                                self.re * other.im + self.im * other.re)

    __rmul__ = __mul__

    def conjugate(self) -> GaussianRational:
        return GaussianRational(self.re, -self.im)

    def norm2(self) -> Fraction:
        """``re^2 + im^2``, the exact square of the modulus."""
        return self.re * self.re + self.im * self.im

    def is_real(self) -> bool:
        return self.im == 0

    def __repr__(self) -> str:
        return f"({self.re}{'+' if self.im >= 0 else '-'}{abs(self.im)}i)"


CZERO = GaussianRational()


@dataclass(frozen=True)
class ComplexOperator:
    rows: int
    cols: int
    entries: tuple

    def __post_init__(self):
        grid = tuple(tuple(GaussianRational.of(v) for v in r) for r in self.entries)
        if len(grid) != self.rows or any(len(r) != self.cols for r in grid):
            raise DimensionError(f"grid does not have shape ({self.rows}, {self.cols})")
        object.__setattr__(self, "entries", grid)

    @classmethod
    def from_rows(cls, rows, cols: int | None = None) -> ComplexOperator:
        rows = [list(r) for r in rows]
        if cols is None:
            cols = len(rows[0]) if rows else 0
        return cls(len(rows), cols, rows)

    @classmethod
    def from_real(cls, op: Operator) -> ComplexOperator:
        return cls(op.rows, op.cols, op.entries)

    @property
    def shape(self):
        return self.rows, self.cols

    def row(self, i):
        return self.entries[i]

    def is_real(self) -> bool:
        return all(v.is_real() for r in self.entries for v in r)

    def apply(self, x: Sequence) -> tuple:
        x = [GaussianRational.of(v) for v in x]
        if len(x) != self.cols:
            raise DimensionError("vector length differs from column count")
        return tuple(sum((a * b for a, b in zip(r, x)), CZERO) for r in self.entries)


@dataclass(frozen=True)
class ComplexDiagonalOrthomorphism:
    diag: tuple

    def __post_init__(self):
        object.__setattr__(self, "diag", tuple(GaussianRational.of(v) for v in self.diag))

    @property
    def dim(self) -> int:
        return len(self.diag)

    def compose(self, op: ComplexOperator) -> ComplexOperator:
        if op.rows != self.dim:
            raise DimensionError("orthomorphism and operator disagree on m")
        return ComplexOperator(op.rows, op.cols,
                               [[d * v for v in r] for d, r in zip(self.diag, op.entries)])


@dataclass(frozen=True)
class ModulusEnclosure:
    lower: Fraction
    upper: Fraction

    @property
    def exact(self) -> bool:
        return self.lower == self.upper


def _rational_sqrt(q: Fraction) -> Fraction | None:
    """Exact square root of ``q >= 0`` when it is rational."""
    a, b = q.numerator, q.denominator
    ra, rb = isqrt(a), isqrt(b)
    if ra * ra == a and rb * rb == b:
        return Fraction(ra, rb)
    return None


def modulus_enclosure(z, precision=Fraction(1, 1000)) -> ModulusEnclosure:
    """Rational bounds on ``|z|`` at most ``precision`` apart.

    With ``k = ceil(1/precision)`` the bounds are ``s/k`` and ``(s+1)/k`` where
    ``s = isqrt(floor(|z|^2 k^2))``; perfect rational squares are returned
    exactly.
    """
    z = GaussianRational.of(z)
    precision = to_fraction(precision)
    if precision <= 0:
        raise ValueError("precision must be positive")
    r2 = z.norm2()
    root = _rational_sqrt(r2)
    if root is not None:
        return ModulusEnclosure(root, root)
    k = -((-precision.denominator) // precision.numerator)  # ceil(1/precision)
    s = isqrt((r2 * k * k).__floor__())
    return ModulusEnclosure(Fraction(s, k), Fraction(s + 1, k))


# --------------------------------------------------------------------------
# Verification


@dataclass(frozen=True)
class ComplexVerdict:
    status: str  # "valid" | "invalid" | "undecided"
    stratum: int | None = None
    reason: str = ""


def _compare_modulus_sum(coeffs: Sequence[GaussianRational], weights: Sequence[Fraction],
                         bound: Fraction, refinements: int) -> str:
    """Decide ``sum |coeffs[k]| * weights[k] <= bound`` for ``weights >= 0``."""
    for step in range(refinements + 1):
        prec = Fraction(1, 16 ** step)
        lo = hi = ZERO
        for c, w in zip(coeffs, weights):
            if w == 0:
                continue
            e = modulus_enclosure(c, prec)
            lo += e.lower * w
            hi += e.upper * w
        if hi <= bound:
            return "valid"
        if lo > bound:
            return "invalid"
    return "undecided"


def _check_bounds(u_list, v, m):
    if len(v) != m or any(len(u) != m for u in u_list):
        raise DimensionError("bound vectors must have length m")
    if any(c < 0 for u in u_list for c in u):
        raise ValueError("modulus bounds u_k must be nonnegative")


def verify_complex_certificate(c_list, A_list, B: ComplexOperator, u_list, v,
                               budget: int = DEFAULT_REFINEMENTS) -> ComplexVerdict:
    """Check ``B = sum_k c_k A_k`` exactly and ``sum_k |c_k| u_k <= v`` by enclosures.

    Any stratum that fails makes the verdict invalid; otherwise a stratum
    that cannot be settled within ``budget`` refinements makes it undecided.
    """
    A_list = tuple(A_list)
    c_list = tuple(c if isinstance(c, ComplexDiagonalOrthomorphism)
                   else ComplexDiagonalOrthomorphism(c) for c in c_list)
    u_list = tuple(as_point(u) for u in u_list)
    v = as_point(v)
    m, n = B.shape
    if any(A.shape != B.shape for A in A_list):
        raise DimensionError("operators differ in shape")
    if len(c_list) != len(A_list) or len(u_list) != len(A_list):
        raise DimensionError("need one multiplier and one bound per operator")
    if any(c.dim != m for c in c_list):
        raise DimensionError("multipliers must have length m")
    _check_bounds(u_list, v, m)

    for i in range(m):
        for j in range(n):
            acc = sum((c.diag[i] * A.entries[i][j] for c, A in zip(c_list, A_list)), CZERO)
            if acc != B.entries[i][j]:
                return ComplexVerdict("invalid", i, f"identity fails at entry ({i}, {j})")
    undecided = None
    for i in range(m):
        status = _compare_modulus_sum([c.diag[i] for c in c_list], [u[i] for u in u_list],
                                      v[i], budget)
        if status == "invalid":
            return ComplexVerdict("invalid", i, "weighted modulus sum exceeds v")
        if status == "undecided" and undecided is None:
            undecided = i
    if undecided is not None:
        return ComplexVerdict("undecided", undecided, "refinement budget exhausted")
    return ComplexVerdict("valid")


# --------------------------------------------------------------------------
# Polygonal search


@dataclass(frozen=True)
class NotFound:
    reason: str
    stratum: int | None = None


def _pi(terms: int = 14) -> Fraction:
    """Machin's formula with truncated arctangent series (error below 1e-18)."""

    def atan_inv(x: int) -> Fraction:
        total, sign = ZERO, 1
        for k in range(terms):
            total += Fraction(sign, (2 * k + 1) * x ** (2 * k + 1))
            sign = -sign
        return total

    return (16 * atan_inv(5) - 4 * atan_inv(239)).limit_denominator(10 ** 20)


def _tan(x: Fraction, terms: int = 20) -> Fraction:
    s = c = ZERO
    term = ONE  # x^k / k!
    for k in range(2 * terms):
        if k % 4 == 0:
            c += term
        elif k % 4 == 1:
            s += term
        elif k % 4 == 2:
            c -= term
        else:
            s -= term
        term = (term * x / (k + 1)).limit_denominator(10 ** 30)
    return s / c


def _circle_point(s: Fraction) -> tuple[Fraction, Fraction]:
    """Rational point of the unit circle with stereographic parameter ``s``."""
    d = 1 + s * s
    return (1 - s * s) / d, 2 * s / d


@lru_cache(maxsize=None)
def polygon_normals(sides: int) -> tuple:
    """Unit normals near the angles ``2 pi j / sides``, exact rational points.

    The polygon ``{z : n . z <= 1 for every normal n}`` contains the unit
    disk, since each edge line is tangent to the circle.  The second half of
    the list negates the first, so the polygon is centrally symmetric.
    """
    if sides < 4 or sides % 2:
        raise ValueError("sides must be an even integer >= 4")
    pi = _pi()
    half = []
    for j in range(sides // 2):
        s = _tan(pi * j / sides).limit_denominator(1000)
        half.append(_circle_point(s))
    return tuple(half) + tuple((-a, -b) for a, b in half)


def _direction_of(c: GaussianRational) -> tuple[Fraction, Fraction]:
    """A rational unit vector close to ``c / |c|``."""
    r = modulus_enclosure(c, Fraction(1, 10 ** 6)).lower
    p, q = c.re, c.im
    if p >= 0:
        s = q / (r + p) if r + p != 0 else ZERO
    elif q != 0:
        s = (r - p) / q
    else:
        return -ONE, ZERO
    return _circle_point(Fraction(s).limit_denominator(10 ** 6))


def search_complex_certificate(A_list, B: ComplexOperator, u_list, v, sides: int = 8,
                               max_rounds: int = 24, budget: int = DEFAULT_REFINEMENTS):
    """Look for complex multipliers with ``B = sum c_k A_k`` and ``sum |c_k| u_k <= v``.

    Each stratum solves an LP in the real and imaginary parts of ``c_k``,
    bounding ``|c_k|`` from below by a ``sides``-gon norm.  Candidates whose
    true moduli overshoot get a tangent cut in their direction and the LP is
    re-solved, up to ``max_rounds`` times.  When all data are real the
    imaginary parts are pinned to zero, which loses nothing: the real part of
    any certificate is again a certificate.

    Returns a list of :class:`ComplexDiagonalOrthomorphism` that passed
    :func:`verify_complex_certificate`, or :class:`NotFound`.  ``NotFound``
    does not refute the inclusion.
    """
    A_list = tuple(A_list)
    u_list = tuple(as_point(u) for u in u_list)
    v = as_point(v)
    m, n = B.shape
    N = len(A_list)
    if any(A.shape != B.shape for A in A_list) or len(u_list) != N:
        raise DimensionError("operators and bounds disagree in shape")
    _check_bounds(u_list, v, m)
    base_normals = polygon_normals(sides)
    real = B.is_real() and all(A.is_real() for A in A_list)
    nv = 3 * N  # p_k, q_k, t_k

    per_stratum = []
    for i in range(m):
        cons = []
        for j in range(n):
            re_row, im_row = [ZERO] * nv, [ZERO] * nv
            for k, A in enumerate(A_list):
                a = A.entries[i][j]
                re_row[k], re_row[N + k] = a.re, -a.im
                im_row[k], im_row[N + k] = a.im, a.re
            cons.append(Constraint(re_row, "=", B.entries[i][j].re))
            cons.append(Constraint(im_row, "=", B.entries[i][j].im))
        if real:
            for k in range(N):
                row = [ZERO] * nv
                row[N + k] = ONE
                cons.append(Constraint(row, "=", 0))
        row = [ZERO] * nv
        for k in range(N):
            row[2 * N + k] = u_list[k][i]
        cons.append(Constraint(row, "<=", v[i]))
        cuts = [list(base_normals) for _ in range(N)]
        weights = [u[i] for u in u_list]
        objective = Objective([ZERO] * (2 * N) + [w + 1 for w in weights], "min")
        flags = (False,) * (2 * N) + (True,) * N

        found = None
        for _ in range(max_rounds):
            norm_rows = []
            for k in range(N):
                for nx, ny in cuts[k]:
                    row = [ZERO] * nv
                    row[k], row[N + k], row[2 * N + k] = nx, ny, -ONE
                    norm_rows.append(Constraint(row, "<=", 0))
            out = solve(LinearProgram(nv, cons + norm_rows, objective, flags))
            if not isinstance(out, (Optimal, Feasible)):
                return NotFound("polygonal relaxation is infeasible", i)
            cand = [GaussianRational(out.point[k], out.point[N + k]) for k in range(N)]
            if _compare_modulus_sum(cand, weights, v[i], budget) == "valid":
                found = cand
                break
            for k, c in enumerate(cand):
                if c != CZERO:
                    cuts[k].append(_direction_of(c))
        if found is None:
            return NotFound(f"no verified candidate after {max_rounds} rounds", i)
        per_stratum.append(found)

    c_list = [ComplexDiagonalOrthomorphism(tuple(per_stratum[i][k] for i in range(m)))
              for k in range(N)]
    verdict = verify_complex_certificate(c_list, A_list, B, u_list, v, budget)
    if verdict.status != "valid":
        return NotFound(f"candidate failed verification: {verdict.reason}", verdict.stratum)
    return c_list
