"""Acceptance criteria 1-10, each run at its stated size with a fixed seed.

A PASS/FAIL line per criterion is printed in the terminal summary.
"""

import json
import random
import subprocess
import sys
import time
from fractions import Fraction
from pathlib import Path

from opfarkas import farkas as fk
from opfarkas import interval as iv
from opfarkas import lp
from opfarkas import oracle as orc
from opfarkas.complex_engine import (
    ComplexDiagonalOrthomorphism,
    ComplexOperator,
    GaussianRational,
    NotFound,
    search_complex_certificate,
    verify_complex_certificate,
)
from opfarkas.lattice import Band, DiagonalOrthomorphism, Operator, apply_band

import instances as gen

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"


def test_criterion_01_dichotomy():
    rng = random.Random(1)
    start = time.perf_counter()
    counts = {"certificate": 0, "witness": 0}
    for _ in range(1000):
        inst = gen.homogeneous(rng)
        out = fk.decide_dominance(inst)
        if isinstance(out, fk.DominanceCertificate):
            counts["certificate"] += 1
            assert fk.verify_dominance_certificate(inst, out)
            assert all(a.is_positive() for a in out.alphas)
        else:
            assert isinstance(out, fk.AlternativeWitness)
            counts["witness"] += 1
            assert out.b == out.b_prime and len(out.b) == 1
            (i,) = out.b.members
            for A in inst.A:
                assert all(c <= 0 for c in apply_band(out.b, A.apply(out.x)))
            assert inst.B.apply(out.x)[i] > 0
            assert fk.verify_alternative_witness(inst, out)
    elapsed = time.perf_counter() - start
    assert elapsed < 60, f"took {elapsed:.1f}s"
    assert counts["certificate"] > 100 and counts["witness"] > 100


def test_criterion_02_oracle_agreement():
    rng = random.Random(2)
    for _ in range(300):
        n = rng.randint(1, 4)
        gens_ = [gen.vec(rng, n) for _ in range(rng.randint(0, 4))]
        if gens_ and rng.random() < 0.5:
            target = tuple(sum((gen.nonneg_rational(rng) * g[j] for g in gens_), Fraction(0))
                           for j in range(n))
        else:
            target = gen.vec(rng, n)
        scalar = lp.conic_membership(gens_, target)
        oracle = orc.inclusion_oracle(gens_, target, n)
        assert isinstance(scalar, lp.Multipliers) == isinstance(oracle, orc.Holds)
        if isinstance(oracle, orc.CounterexampleDirection):
            d = oracle.direction
            assert all(sum(a * b for a, b in zip(g, d)) <= 0 for g in gens_)
            assert sum(a * b for a, b in zip(target, d)) > 0


def test_criterion_03_reconstruction_round_trip():
    rng = random.Random(3)
    for _ in range(500):
        m, n = rng.randint(1, 4), rng.randint(1, 4)
        A = gen.op(rng, m, n)
        alpha = DiagonalOrthomorphism(gen.vec(rng, m))
        B = alpha.compose(A)
        res = fk.reconstruct(A, B)
        assert isinstance(res, fk.ReconstructionResult)
        assert res.alpha.compose(A) == B
        for i, a in enumerate(res.alpha.diag):
            assert a >= 0 if i in res.kappa else a <= 0
        assert fk.verify_reconstruction(A, B, res)


def _minimum_certified_sum(inst, i):
    """Smallest sum_k alpha_k u_ki over all stratum-i certificates, by LP."""
    N = len(inst.A)
    cons = [lp.Constraint(tuple(A.entries[i][j] for A in inst.A), "=", inst.B.entries[i][j])
            for j in range(inst.n)]
    obj = lp.Objective(tuple(u[i] for u in inst.u), "min")
    out = lp.solve(lp.LinearProgram(N, cons, obj))
    assert isinstance(out, lp.Optimal) and lp.verify_outcome(lp.LinearProgram(N, cons, obj), out)
    return out.value


def test_criterion_04_inhomogeneous_round_trip():
    rng = random.Random(4)
    for _ in range(500):
        inst, _alphas = gen.inhomogeneous_from_certificate(rng)
        out = fk.decide_inhomogeneous(inst)
        assert isinstance(out, fk.DominanceCertificate)
        assert fk.verify_inhomogeneous_certificate(inst, out)

        i = rng.randrange(inst.m)
        floor = _minimum_certified_sum(inst, i)
        v = list(inst.v)
        v[i] = floor - Fraction(rng.randint(1, 6), rng.randint(1, 3))
        lowered = fk.InhomogeneousInstance(inst.A, inst.B, inst.u, tuple(v))
        out = fk.decide_inhomogeneous(lowered)
        assert not isinstance(out, fk.DominanceCertificate)
        if isinstance(out, fk.Witness):
            assert out.b == Band.atom(inst.m, i)
            assert fk.verify_inhomogeneous_witness(lowered, out)
        else:
            assert fk.verify_inconsistent_stratum(lowered, out)


def test_criterion_05_matrix_reduction():
    rng = random.Random(5)
    for _ in range(200):
        inst = gen.inhomogeneous_random(rng, N=1)
        mat = fk.MatrixInstance(inst.A, (inst.B,), inst.u, (inst.v,))
        a = fk.decide_inhomogeneous(inst)
        b = fk.decide_matrix_dominance(mat)
        if isinstance(a, fk.DominanceCertificate):
            assert isinstance(b, fk.MatrixCertificate)
            assert b.X[0][0] == a.alphas[0]
            assert fk.verify_matrix_certificate(mat, b)
        elif isinstance(a, fk.Witness):
            assert isinstance(b, fk.MatrixWitness)
            assert (b.x, b.b, b.block) == (a.x, a.b, 0)
            assert fk.verify_matrix_witness(mat, b)
        else:
            assert b == a


def test_criterion_06_interval_equivalence():
    rng = random.Random(6)
    seen = set()
    for _ in range(200):
        A, B = gen.interval_instance(rng)
        weak = iv.find_weak_solution(A, B)
        incl = iv.check_interval_inclusion(A, B)
        ok = isinstance(weak, iv.WeakSolution)
        seen.add(ok)
        assert ok == isinstance(incl, iv.Holds)
        if ok:
            assert iv.verify_weak_solution(A, B, weak)
        else:
            assert iv.verify_violation(A, B, incl)
    assert seen == {True, False}

    for _ in range(200):
        inst = gen.homogeneous(rng, m=rng.randint(1, 2), n=rng.randint(1, 3), N=rng.randint(1, 2))
        A = [iv.IntervalOperator.degenerate(T) for T in inst.A]
        B = iv.IntervalOperator.degenerate(inst.B)
        dom = fk.decide_dominance(inst)
        weak = iv.find_weak_solution(A, B)
        incl = iv.check_interval_inclusion(A, B)
        cert = isinstance(dom, fk.DominanceCertificate)
        assert cert == isinstance(weak, iv.WeakSolution) == isinstance(incl, iv.Holds)
        if not cert:
            # P_T(-x) = -Tx turns an inclusion violation into a dominance witness
            flipped = fk.AlternativeWitness(tuple(-c for c in incl.x), incl.b, incl.b)
            assert fk.verify_alternative_witness(inst, flipped)


def test_criterion_07_support_map_laws():
    rng = random.Random(7)
    for _ in range(1000):
        m, n = rng.randint(1, 3), rng.randint(1, 4)
        T = gen.interval(rng, m, n)
        x = gen.vec(rng, n)
        lam = gen.nonneg_rational(rng)
        assert iv.sublinear_apply(T, tuple(lam * c for c in x)) == \
            tuple(lam * c for c in iv.sublinear_apply(T, x))
        D = iv.IntervalOperator.degenerate(T.lower)
        assert iv.sublinear_apply(D, x) == T.lower.apply(x)
        parts = iv.adapted_decomposition(T)
        total = Operator.zero(m, n)
        for P in parts:
            total = total + P
        assert total == T.upper - T.lower
        for p, P in enumerate(parts):
            for Q in parts[p + 1:]:
                assert all(a * b == 0 for ra, rb in zip(P.entries, Q.entries)
                           for a, b in zip(ra, rb))


def test_criterion_08_complex_soundness():
    rng = random.Random(8)
    for _ in range(100):
        m, n, N = rng.randint(1, 2), rng.randint(1, 3), rng.randint(1, 2)
        A = [gen.complex_op(rng, m, n) for _ in range(N)]
        cs, mods = [], []
        for _k in range(N):
            pairs = [gen.pythagorean_scalar(rng) for _ in range(m)]
            cs.append(ComplexDiagonalOrthomorphism([z for z, _ in pairs]))
            mods.append([r for _, r in pairs])
        B = _complex_combination(cs, A, m, n)
        u = [gen.vec(rng, m, gen.nonneg_rational) for _ in range(N)]
        total = [sum((mods[k][i] * u[k][i] for k in range(N)), Fraction(0)) for i in range(m)]
        slack = rng.choice((0, 1))
        v = tuple(t + slack * gen.nonneg_rational(rng) for t in total)
        assert verify_complex_certificate(cs, A, B, u, v).status == "valid"
        i = rng.randrange(m)
        lowered = list(v)
        lowered[i] = total[i] - Fraction(1, rng.randint(1, 1000))
        verdict = verify_complex_certificate(cs, A, B, u, tuple(lowered))
        assert verdict.status == "invalid" and verdict.stratum == i

    for _ in range(100):
        m, n, N = rng.randint(1, 2), rng.randint(1, 3), rng.randint(1, 2)
        A = [ComplexOperator.from_real(gen.op(rng, m, n)) for _ in range(N)]
        cs = [ComplexDiagonalOrthomorphism([GaussianRational(gen.small_rational(rng))
                                            for _ in range(m)]) for _ in range(N)]
        B = _complex_combination(cs, A, m, n)
        u = [gen.vec(rng, m, gen.nonneg_rational) for _ in range(N)]
        v = tuple(sum((abs(cs[k].diag[i].re) * u[k][i] for k in range(N)), Fraction(0))
                  + gen.nonneg_rational(rng) for i in range(m))
        found = search_complex_certificate(A, B, u, v, sides=8)
        assert not isinstance(found, NotFound), found
        assert verify_complex_certificate(found, A, B, u, v).status == "valid"


def _complex_combination(cs, A, m, n):
    zero = GaussianRational(Fraction(0))
    grid = [[sum((c.diag[i] * Ak.entries[i][j] for c, Ak in zip(cs, A)), zero)
             for j in range(n)] for i in range(m)]
    return ComplexOperator(m, n, grid)


def _random_lp(rng):
    nv = rng.randint(1, 4)
    cons = []
    for _ in range(rng.randint(1, 5)):
        coeffs = gen.vec(rng, nv)
        rel = rng.choice(lp.RELATIONS)
        cons.append(lp.Constraint(coeffs, rel, rng.choice((0, 0, gen.small_rational(rng)))))
        if rng.random() < 0.2:
            # duplicated and scaled rows make degenerate vertices
            cons.append(lp.Constraint(tuple(2 * c for c in coeffs), rel, 2 * cons[-1].rhs))
    objective = None
    if rng.random() < 0.7:
        objective = lp.Objective(gen.vec(rng, nv), rng.choice(("min", "max")))
    nonneg = tuple(rng.random() < 0.6 for _ in range(nv))
    return lp.LinearProgram(nv, cons, objective, nonneg)


def test_criterion_09_lp_totality():
    rng = random.Random(9)
    kinds = set()
    for _ in range(1000):
        prog = _random_lp(rng)
        out = lp.solve(prog)
        kinds.add(type(out).__name__)
        assert out.pivots <= lp.pivot_bound(prog)
        assert lp.verify_outcome(prog, out), (prog, out)
    assert {"Feasible", "Optimal", "Infeasible", "Unbounded"} <= kinds


def _run_cli(args):
    proc = subprocess.run([sys.executable, "-m", "opfarkas", *args],
                          capture_output=True, check=False)
    return proc.returncode, proc.stdout


def test_criterion_10_cli_determinism():
    manifest = json.loads((FIXTURES / "manifest.json").read_text())
    assert manifest
    for entry in manifest:
        args = [entry["subcommand"], str(FIXTURES / entry["file"]), *entry.get("flags", [])]
        first = _run_cli(args)
        second = _run_cli(args)
        assert first == second, entry["file"]
        code, out = first
        assert code == entry["exit"], (entry["file"], code)
        doc = json.loads(out)
        assert doc["result"] == entry["result"]
        if doc["result"] in ("certificate", "witness"):
            assert doc["verified"] is True
