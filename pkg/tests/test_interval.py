import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from opfarkas import interval as iv
from opfarkas.lattice import Band, BudgetExceeded, Operator, combine

import instances as gen

R = Operator.from_rows


def IV(lo, hi):
    return iv.IntervalOperator(R(lo), R(hi))


def test_interval_requires_ordered_bounds():
    with pytest.raises(ValueError):
        IV([[2]], [[1]])


@pytest.mark.parametrize("x, expected", [(5, 5), (-5, 0)])
def test_support_map_scalar(x, expected):
    assert iv.sublinear_apply(IV([[0]], [[1]]), (x,)) == (expected,)


def test_support_map_mixed_signs():
    T = IV([[1, -2]], [[3, 4]])
    # upper on the positive coordinate, lower on the negative one
    assert iv.sublinear_apply(T, (2, -1)) == (3 * 2 + (-2) * (-1),)


small = st.builds(Fraction, st.integers(-9, 9), st.integers(1, 4))


@settings(max_examples=200, deadline=None)
@given(st.integers(1, 3), st.integers(1, 3), st.randoms(use_true_random=False), small.map(abs))
def test_support_map_is_positively_homogeneous_and_subadditive(m, n, rng, lam):
    T = gen.interval(rng, m, n)
    x, y = gen.vec(rng, n), gen.vec(rng, n)
    P = lambda z: iv.sublinear_apply(T, z)  # noqa: E731
    assert P(tuple(lam * c for c in x)) == tuple(lam * c for c in P(x))
    xy = tuple(a + b for a, b in zip(x, y))
    assert all(s <= a + b for s, a, b in zip(P(xy), P(x), P(y)))


def test_adapted_decomposition():
    assert iv.adapted_decomposition(IV([[1, 2]], [[1, 2]])) == []
    assert len(iv.adapted_decomposition(IV([[0, 0], [0, 0]], [[1, 0], [0, 0]]))) == 1
    T = IV([[0, 0], [0, 0]], [[1, 2], [3, 4]])
    parts = iv.adapted_decomposition(T)
    assert len(parts) == 4
    total = Operator.zero(2, 2)
    for P in parts:
        total = total + P
    assert total == T.upper - T.lower


def test_weak_solution_hand_example():
    A, B = [IV([[1]], [[2]])], IV([[2]], [[4]])
    sol = iv.find_weak_solution(A, B)
    assert sol.alphas[0].diag == (2,)
    assert sol.A_selections[0] == R([[2]]) and sol.B_selection == R([[4]])
    assert iv.verify_weak_solution(A, B, sol)
    assert iv.check_interval_inclusion(A, B) == iv.Holds()


def test_sign_obstruction():
    A, B = [IV([[1]], [[2]])], IV([[-1]], [[-1]])
    assert isinstance(iv.find_weak_solution(A, B), iv.NoSolution)
    v = iv.check_interval_inclusion(A, B)
    assert isinstance(v, iv.Violation) and v.b == Band(1, {0})
    assert iv.verify_violation(A, B, v)


def test_zero_multiplier_selects_lower_row():
    A = [IV([[1, 1]], [[2, 2]]), IV([[5, -1]], [[6, 0]])]
    B = IV([[2, 2]], [[2, 2]])
    sol = iv.find_weak_solution(A, B)
    assert iv.verify_weak_solution(A, B, sol)
    for k, a in enumerate(sol.alphas):
        if a.diag[0] == 0:
            assert sol.A_selections[k] == A[k].lower


def test_midpoint_construction_is_recovered():
    rng = random.Random(31)
    for _ in range(50):
        m, n, N = rng.randint(1, 2), rng.randint(1, 3), rng.randint(1, 2)
        A = [gen.interval(rng, m, n) for _ in range(N)]
        core = combine([gen.diag(rng, m) for _ in range(N)], [T.midpoint() for T in A], (m, n))
        B = iv.IntervalOperator.degenerate(core)
        sol = iv.find_weak_solution(A, B)
        assert iv.verify_weak_solution(A, B, sol)


def test_orthant_budget():
    T = iv.IntervalOperator.degenerate(Operator.zero(1, 3))
    with pytest.raises(BudgetExceeded):
        iv.check_interval_inclusion([T], T, orthant_budget=2)


def test_parallel_matches_sequential():
    rng = random.Random(32)
    for _ in range(30):
        A, B = gen.interval_instance(rng)
        assert iv.check_interval_inclusion(A, B, parallel=True) == iv.check_interval_inclusion(A, B)
        assert iv.find_weak_solution(A, B, parallel=True) == iv.find_weak_solution(A, B)
