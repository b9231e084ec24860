"""Operator Farkas alternatives over Q^m, decided stratum by stratum.

Every band of Q^m is a set of coordinates, and a band inequality
``b T x <= 0`` holds exactly when it holds on each coordinate of ``b``.  So a
statement quantified over all bands holds iff it holds on every singleton
band (stratum).  Concretely, if for each stratum ``i`` the implication

    (A_k x)_i <= 0 for all k   ==>   (B x)_i <= 0

holds, then for any band ``b`` and any ``x`` with ``b A_k x <= 0`` we have
``(A_k x)_i <= 0`` for every ``i`` in ``b``, hence ``(B x)_i <= 0`` there,
i.e. ``b B x <= 0``; the converse is the special case ``b = {i}``.  Each
stratum is then an ordinary scalar Farkas problem over rows, and stratum
certificates glue together coordinatewise into diagonal multipliers.

The same reduction drives the inhomogeneous and the matrix forms.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Sequence

from .lattice import (
    ZERO,
    Band,
    DiagonalOrthomorphism,
    DimensionError,
    Operator,
    apply_band,
    as_point,
    check_same_shape,
    combine,
    dot,
    scale,
    sub,
)
from .linalg import nullspace, solve_combination
from .lp import (
    Constraint,
    Feasible,
    Infeasible,
    LinearProgram,
    Multipliers,
    Objective,
    Optimal,
    Unbounded,
    conic_membership,
    solve,
)


def map_strata(fn: Callable, count: int, parallel: bool = False):
    """Lazily map ``fn`` over ``range(count)``, or eagerly on a thread pool.

    Results always come back in index order, so callers that stop at the
    first failing stratum see the same answer either way.
    """
    if not parallel or count < 2:
        return map(fn, range(count))
    with ThreadPoolExecutor() as pool:
        return iter(list(pool.map(fn, range(count))))


# --------------------------------------------------------------------------
# Instances and outcome types


@dataclass(frozen=True)
class HomogeneousInstance:
    A: tuple
    B: Operator

    def __post_init__(self):
        object.__setattr__(self, "A", tuple(self.A))
        check_same_shape((*self.A, self.B))

    @property
    def m(self) -> int:
        return self.B.rows

    @property
    def n(self) -> int:
        return self.B.cols


@dataclass(frozen=True)
class DominanceCertificate:
    """Positive diagonal multipliers with ``B = sum_k diag(alphas[k]) A_k``."""

    alphas: tuple


@dataclass(frozen=True)
class AlternativeWitness:
    x: tuple
    b: Band
    b_prime: Band


@dataclass(frozen=True)
class InhomogeneousInstance:
    A: tuple
    B: Operator
    u: tuple
    v: tuple

    def __post_init__(self):
        object.__setattr__(self, "A", tuple(self.A))
        object.__setattr__(self, "u", tuple(as_point(p) for p in self.u))
        object.__setattr__(self, "v", as_point(self.v))
        check_same_shape((*self.A, self.B))
        if len(self.u) != len(self.A):
            raise DimensionError(f"{len(self.A)} operators but {len(self.u)} bounds")
        if any(len(p) != self.m for p in self.u) or len(self.v) != self.m:
            raise DimensionError("bound vectors must have length m")

    @property
    def m(self) -> int:
        return self.B.rows

    @property
    def n(self) -> int:
        return self.B.cols


@dataclass(frozen=True)
class Witness:
    """A point ``x`` violating the implication on band ``b``."""

    x: tuple
    b: Band


@dataclass(frozen=True)
class InconsistentStratum:
    """The hypotheses are contradictory on ``band``.

    ``multipliers[k] >= 0`` combine the stratum rows of the ``A_k`` to zero
    while combining the bounds to a negative number.
    """

    band: Band
    multipliers: tuple


@dataclass(frozen=True)
class ReconstructionResult:
    alpha: DiagonalOrthomorphism
    kappa: Band


@dataclass(frozen=True)
class NoSolution:
    reason: str
    stratum: int | None = None
    kernel_vector: tuple | None = None


@dataclass(frozen=True)
class MatrixInstance:
    """Data for ``B = X A`` with ``X u <= v``.

    ``A`` holds ``t`` blocks and ``B`` holds ``s`` blocks, all ``m x n``;
    ``u`` has ``t`` points and ``v`` has ``s`` points of Q^m.  So ``A`` maps
    into ``Y^t``, ``B`` into ``Y^s``, and ``X`` is an ``s x t`` grid of
    positive diagonal multipliers acting ``Y^t -> Y^s``.
    """

    A: tuple
    B: tuple
    u: tuple
    v: tuple

    def __post_init__(self):
        object.__setattr__(self, "A", tuple(self.A))
        object.__setattr__(self, "B", tuple(self.B))
        object.__setattr__(self, "u", tuple(as_point(p) for p in self.u))
        object.__setattr__(self, "v", tuple(as_point(p) for p in self.v))
        if not self.A or not self.B:
            raise DimensionError("s and t must be positive")
        check_same_shape((*self.A, *self.B))
        if len(self.u) != self.t or len(self.v) != self.s:
            raise DimensionError("need t bound points for A and s for B")
        if any(len(p) != self.m for p in (*self.u, *self.v)):
            raise DimensionError("bound vectors must have length m")

    @property
    def s(self) -> int:
        return len(self.B)

    @property
    def t(self) -> int:
        return len(self.A)

    @property
    def m(self) -> int:
        return self.A[0].rows

    @property
    def n(self) -> int:
        return self.A[0].cols


@dataclass(frozen=True)
class MatrixCertificate:
    X: tuple  # s rows of t DiagonalOrthomorphisms


@dataclass(frozen=True)
class MatrixWitness:
    x: tuple
    b: Band
    block: int


@dataclass(frozen=True)
class PointWitness:
    x: tuple
    row: int | None = None


def _gather(per_stratum: Sequence[Sequence[Fraction]], count: int) -> tuple:
    """Turn per-stratum coefficient lists into ``count`` diagonal multipliers."""
    return tuple(
        DiagonalOrthomorphism(tuple(col[k] for col in per_stratum)) for k in range(count)
    )


# --------------------------------------------------------------------------
# Homogeneous dominance and the alternative


def decide_dominance(inst: HomogeneousInstance, parallel: bool = False):
    """Return a :class:`DominanceCertificate` or an :class:`AlternativeWitness`.

    Exactly one of the two exists.  Witnesses are always singleton-band:
    ``b = b_prime = {i}`` with ``(A_k x)_i <= 0`` and ``(B x)_i > 0``.
    """
    m, N = inst.m, len(inst.A)

    def stratum(i):
        return conic_membership([A.row(i) for A in inst.A], inst.B.row(i))

    cols = []
    for i, res in enumerate(map_strata(stratum, m, parallel)):
        if not isinstance(res, Multipliers):
            band = Band.atom(m, i)
            return AlternativeWitness(res.y, band, band)
        cols.append(res.alphas)
    return DominanceCertificate(_gather(cols, N))


def verify_dominance_certificate(inst: HomogeneousInstance, cert: DominanceCertificate) -> bool:
    if len(cert.alphas) != len(inst.A):
        return False
    if any(a.dim != inst.m or not a.is_positive() for a in cert.alphas):
        return False
    return combine(cert.alphas, inst.A, inst.B.shape) == inst.B


def verify_alternative_witness(inst: HomogeneousInstance, w: AlternativeWitness) -> bool:
    """Check ``b' <= b``, ``b A_k x <= 0`` and ``b' B x >= 0`` with ``b' B x != 0``."""
    if len(w.x) != inst.n or w.b.ambient_dim != inst.m or w.b_prime.ambient_dim != inst.m:
        return False
    if not w.b_prime.members <= w.b.members:
        return False
    for A in inst.A:
        if any(c > 0 for c in apply_band(w.b, A.apply(w.x))):
            return False
    bx = apply_band(w.b_prime, inst.B.apply(w.x))
    return all(c >= 0 for c in bx) and any(c > 0 for c in bx)


# --------------------------------------------------------------------------
# Inhomogeneous systems


def _stratum_consistency(rows: Sequence[tuple], bounds: Sequence[Fraction], n: int):
    """Farkas multipliers proving ``rows @ x <= bounds`` infeasible, or None."""
    if not rows:
        return None
    lp = LinearProgram(n, [Constraint(r, "<=", u) for r, u in zip(rows, bounds)],
                       nonneg=(False,) * n)
    out = solve(lp)
    return out.multipliers if isinstance(out, Infeasible) else None


def _stratum_search(rows, bounds, target_row, bound):
    """Nonnegative ``alpha`` with ``alpha @ rows == target_row`` and ``alpha . bounds <= bound``."""
    N = len(rows)
    n = len(target_row)
    cons = [Constraint(tuple(r[j] for r in rows), "=", target_row[j]) for j in range(n)]
    cons.append(Constraint(tuple(bounds), "<=", bound))
    out = solve(LinearProgram(N, cons))
    return out.point if isinstance(out, Feasible) else None


def _stratum_violation(rows, bounds, target_row, bound) -> tuple:
    """A point of ``{rows @ x <= bounds}`` with ``target_row . x > bound``.

    Only called when the stratum is consistent and no certificate exists,
    which by LP duality means the supremum of ``target_row . x`` exceeds
    ``bound`` (or is infinite).
    """
    n = len(target_row)
    lp = LinearProgram(n, [Constraint(r, "<=", u) for r, u in zip(rows, bounds)],
                       Objective(target_row, "max"), nonneg=(False,) * n)
    out = solve(lp)
    if isinstance(out, Optimal):
        if out.value <= bound:
            raise AssertionError("duality violated: bounded maximum below the bound")
        return out.point
    assert isinstance(out, Unbounded)
    p, d = out.point, out.ray
    at_p, gain = dot(target_row, p), dot(target_row, d)
    if at_p > bound:
        return p
    step = (bound - at_p) / gain + 1
    return tuple(a + step * b for a, b in zip(p, d))


def decide_inhomogeneous(inst: InhomogeneousInstance, parallel: bool = False):
    """Return a certificate, a :class:`Witness`, or :class:`InconsistentStratum`.

    Strata are examined in index order and the first one that is not
    certified determines the outcome.  A stratum whose hypotheses have no
    solution is reported rather than treated as vacuously true.
    """
    m, n, N = inst.m, inst.n, len(inst.A)

    def stratum(i):
        rows = [A.row(i) for A in inst.A]
        bounds = [u[i] for u in inst.u]
        bad = _stratum_consistency(rows, bounds, n)
        if bad is not None:
            return "inconsistent", bad
        alphas = _stratum_search(rows, bounds, inst.B.row(i), inst.v[i])
        if alphas is not None:
            return "certificate", alphas
        return "witness", _stratum_violation(rows, bounds, inst.B.row(i), inst.v[i])

    cols = []
    for i, (tag, data) in enumerate(map_strata(stratum, m, parallel)):
        if tag == "inconsistent":
            return InconsistentStratum(Band.atom(m, i), data)
        if tag == "witness":
            return Witness(data, Band.atom(m, i))
        cols.append(data)
    return DominanceCertificate(_gather(cols, N))


def verify_inhomogeneous_certificate(inst: InhomogeneousInstance, cert: DominanceCertificate) -> bool:
    if len(cert.alphas) != len(inst.A):
        return False
    if any(a.dim != inst.m or not a.is_positive() for a in cert.alphas):
        return False
    if combine(cert.alphas, inst.A, inst.B.shape) != inst.B:
        return False
    for i in range(inst.m):
        if sum((a.diag[i] * u[i] for a, u in zip(cert.alphas, inst.u)), ZERO) > inst.v[i]:
            return False
    return True


def verify_inhomogeneous_witness(inst: InhomogeneousInstance, w: Witness) -> bool:
    """``b A_k x <= b u_k`` for all ``k`` but ``b B x <= b v`` fails."""
    if len(w.x) != inst.n or w.b.ambient_dim != inst.m or not w.b.members:
        return False
    for A, u in zip(inst.A, inst.u):
        if any(c > 0 for c in apply_band(w.b, sub(A.apply(w.x), u))):
            return False
    return any(c > 0 for c in apply_band(w.b, sub(inst.B.apply(w.x), inst.v)))


def _verify_inconsistency(rows, bounds, y) -> bool:
    if len(y) != len(rows) or any(c < 0 for c in y) or not rows:
        return False
    n = len(rows[0])
    agg = [sum((c * r[j] for c, r in zip(y, rows)), ZERO) for j in range(n)]
    return all(a == 0 for a in agg) and dot(y, bounds) < 0


def verify_inconsistent_stratum(inst, report: InconsistentStratum) -> bool:
    """Works for both inhomogeneous and matrix instances."""
    (i,) = report.band.members
    rows = [A.row(i) for A in inst.A]
    bounds = [u[i] for u in inst.u]
    return _verify_inconsistency(rows, bounds, report.multipliers)


# --------------------------------------------------------------------------
# Matrix form


def decide_matrix_dominance(inst: MatrixInstance, parallel: bool = False):
    """Search ``X >= 0`` (an ``s x t`` grid of diagonals) with ``B = X A`` and ``X u <= v``.

    Each stratum checks consistency of ``{row_i(A_l) x <= u_{l,i}}`` first,
    exactly like :func:`decide_inhomogeneous`, then solves one small LP per
    output block.
    """
    m, n, s, t = inst.m, inst.n, inst.s, inst.t

    def stratum(i):
        rows = [A.row(i) for A in inst.A]
        bounds = [u[i] for u in inst.u]
        bad = _stratum_consistency(rows, bounds, n)
        if bad is not None:
            return "inconsistent", bad
        per_block = []
        for j in range(s):
            chi = _stratum_search(rows, bounds, inst.B[j].row(i), inst.v[j][i])
            if chi is None:
                x = _stratum_violation(rows, bounds, inst.B[j].row(i), inst.v[j][i])
                return "witness", (x, j)
            per_block.append(chi)
        return "certificate", per_block

    per_stratum = []
    for i, (tag, data) in enumerate(map_strata(stratum, m, parallel)):
        if tag == "inconsistent":
            return InconsistentStratum(Band.atom(m, i), data)
        if tag == "witness":
            return MatrixWitness(data[0], Band.atom(m, i), data[1])
        per_stratum.append(data)
    grid = tuple(
        tuple(DiagonalOrthomorphism(tuple(per_stratum[i][j][l] for i in range(m))) for l in range(t))
        for j in range(s)
    )
    return MatrixCertificate(grid)


def verify_matrix_certificate(inst: MatrixInstance, cert: MatrixCertificate) -> bool:
    if len(cert.X) != inst.s or any(len(r) != inst.t for r in cert.X):
        return False
    for j, row in enumerate(cert.X):
        if any(x.dim != inst.m or not x.is_positive() for x in row):
            return False
        if combine(row, inst.A, inst.B[j].shape) != inst.B[j]:
            return False
        for i in range(inst.m):
            if sum((x.diag[i] * u[i] for x, u in zip(row, inst.u)), ZERO) > inst.v[j][i]:
                return False
    return True


def verify_matrix_witness(inst: MatrixInstance, w: MatrixWitness) -> bool:
    if len(w.x) != inst.n or not 0 <= w.block < inst.s or not w.b.members:
        return False
    for A, u in zip(inst.A, inst.u):
        if any(c > 0 for c in apply_band(w.b, sub(A.apply(w.x), u))):
            return False
    Bj, vj = inst.B[w.block], inst.v[w.block]
    return any(c > 0 for c in apply_band(w.b, sub(Bj.apply(w.x), vj)))


# --------------------------------------------------------------------------
# Signed reconstruction


def reconstruct(A: Operator, B: Operator):
    """Find a (signed) diagonal ``alpha`` with ``B = diag(alpha) A``.

    ``kappa`` is the band where ``alpha >= 0``; off ``kappa`` the multiplier is
    negative.  When both rows of a stratum vanish the multiplier is set to 0.
    """
    check_same_shape((A, B))
    alpha = []
    for i in range(A.rows):
        a, b = A.row(i), B.row(i)
        pivot = next((j for j, c in enumerate(a) if c != 0), None)
        if pivot is None:
            if any(c != 0 for c in b):
                return NoSolution("zero row of A cannot produce a nonzero row of B", i)
            alpha.append(ZERO)
            continue
        ratio = b[pivot] / a[pivot]
        if scale(ratio, a) != b:
            return NoSolution("rows are not proportional", i)
        alpha.append(ratio)
    kappa = Band(A.rows, frozenset(i for i, c in enumerate(alpha) if c >= 0))
    return ReconstructionResult(DiagonalOrthomorphism(tuple(alpha)), kappa)


def verify_reconstruction(A: Operator, B: Operator, res: ReconstructionResult) -> bool:
    alpha, kappa = res.alpha, res.kappa
    if alpha.dim != A.rows or kappa.ambient_dim != A.rows:
        return False
    if alpha.compose(A) != B:
        return False
    return all((c >= 0) if i in kappa else (c <= 0) for i, c in enumerate(alpha.diag))


def verify_no_reconstruction(A: Operator, B: Operator, res: NoSolution) -> bool:
    """Re-derive that stratum ``res.stratum`` admits no scalar ``c`` with ``B_i = c A_i``."""
    i = res.stratum
    if i is None or not 0 <= i < A.rows:
        return False
    a, b = A.row(i), B.row(i)
    # b = c a for some c  iff  all 2x2 minors vanish and (a = 0 implies b = 0)
    if all(c == 0 for c in a):
        return any(c != 0 for c in b)
    return any(a[p] * b[q] != a[q] * b[p] for p in range(len(a)) for q in range(len(a)))


# --------------------------------------------------------------------------
# Single inequality and factorization


def scalar_single(f: Sequence, g: Sequence):
    """Either ``alpha >= 0`` with ``g = alpha f`` or ``x`` with ``f.x <= 0 < g.x``."""
    f, g = as_point(f), as_point(g)
    if len(f) != len(g):
        raise DimensionError("f and g differ in length")
    pivot = next((j for j, c in enumerate(f) if c != 0), None)
    if pivot is None:
        if all(c == 0 for c in g):
            return ZERO
        return PointWitness(g)
    alpha = g[pivot] / f[pivot]
    if scale(alpha, f) == g:
        if alpha >= 0:
            return alpha
        # g = alpha f with alpha < 0: x = -f gives f.x < 0 < g.x
        return PointWitness(tuple(-c for c in f))
    # g has a component orthogonal to f; by Cauchy-Schwarz it pairs positively with g
    ff = dot(f, f)
    return PointWitness(sub(g, scale(dot(f, g) / ff, f)))


def factor_through(A: Operator, B: Operator):
    """Solve ``X A = B`` exactly, or exhibit ``z`` in ``ker A`` with ``B z != 0``."""
    if A.cols != B.cols:
        raise DimensionError(f"A has {A.cols} columns, B has {B.cols}")
    X = []
    for j in range(B.rows):
        c = solve_combination(A.entries, B.row(j))
        if c is None:
            for z in nullspace(A.entries, A.cols):
                if any(v != 0 for v in B.apply(z)):
                    return NoSolution("ker(A) is not contained in ker(B)", j, z)
            raise AssertionError("row outside the row space but no kernel witness")
        X.append(c)
    return Operator(B.rows, A.rows, X)


def factor_positive(A: Operator, B: Operator):
    """Find ``X >= 0`` with ``X A = B`` or ``x`` with ``A x <= 0`` and ``(B x)_j > 0``."""
    if A.cols != B.cols:
        raise DimensionError(f"A has {A.cols} columns, B has {B.cols}")
    X = []
    for j in range(B.rows):
        res = conic_membership(A.entries, B.row(j))
        if not isinstance(res, Multipliers):
            return PointWitness(res.y, j)
        X.append(res.alphas)
    return Operator(B.rows, A.rows, X)


def verify_factor(A: Operator, B: Operator, X: Operator, positive: bool = False) -> bool:
    if X.shape != (B.rows, A.rows):
        return False
    if positive and not X.is_nonnegative():
        return False
    if A.rows == 0:
        return B.is_zero()
    return X @ A == B


def verify_kernel_witness(A: Operator, B: Operator, res: NoSolution) -> bool:
    z = res.kernel_vector
    if z is None or len(z) != A.cols:
        return False
    return all(c == 0 for c in A.apply(z)) and any(c != 0 for c in B.apply(z))


def verify_positive_witness(A: Operator, B: Operator, w: PointWitness) -> bool:
    if w.row is None or not 0 <= w.row < B.rows or len(w.x) != A.cols:
        return False
    return all(c <= 0 for c in A.apply(w.x)) and B.apply(w.x)[w.row] > 0
