from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from opfarkas.lattice import (
    Band,
    DiagonalOrthomorphism,
    DimensionError,
    Operator,
    PartitionOfUnity,
    apply_band,
    band_algebra,
    combine,
    complement,
    join,
    meet,
    mix,
    modulus,
    pos_neg_parts,
    to_fraction,
    truth_value,
)

M = 4
rationals = st.builds(Fraction, st.integers(-20, 20), st.integers(1, 7))
points = st.lists(rationals, min_size=M, max_size=M).map(tuple)
bands = st.frozensets(st.integers(0, M - 1)).map(lambda s: Band(M, s))


def test_to_fraction_refuses_floats_and_bools():
    assert to_fraction("3/4") == Fraction(3, 4)
    assert to_fraction(2) == 2
    with pytest.raises(TypeError):
        to_fraction(0.5)
    with pytest.raises(TypeError):
        to_fraction(True)


@pytest.mark.parametrize("y, plus, minus", [
    ((5,), (5,), (0,)),
    ((0, 0), (0, 0), (0, 0)),
    ((3, -2), (3, 0), (0, 2)),
])
def test_pos_neg_parts(y, plus, minus):
    assert pos_neg_parts(tuple(map(Fraction, y))) == (plus, minus)


@given(points)
def test_riesz_decomposition(y):
    plus, minus = pos_neg_parts(y)
    assert tuple(a - b for a, b in zip(plus, minus)) == y
    assert all(min(a, b) == 0 for a, b in zip(plus, minus))
    assert modulus(y) == tuple(a + b for a, b in zip(plus, minus))


def test_band_algebra_examples():
    assert meet(Band(3, {0, 1}), Band(3, {1, 2})) == Band(3, {1})
    assert complement(Band.empty(3)) == Band.full(3)
    assert band_algebra("leq", Band(2, {0}), Band(2, {0, 1})) is True
    assert band_algebra("meet", Band(3, {0, 1}), Band(3, {1, 2})) == Band(3, {1})
    with pytest.raises(DimensionError):
        meet(Band(2, {0}), Band(3, {0}))
    with pytest.raises(ValueError):
        Band(2, {2})


@given(bands, bands, bands)
def test_boolean_algebra_axioms(a, b, c):
    assert meet(a, meet(b, c)) == meet(meet(a, b), c)
    assert join(a, join(b, c)) == join(join(a, b), c)
    assert meet(a, join(b, c)) == join(meet(a, b), meet(a, c))
    assert join(a, meet(b, c)) == meet(join(a, b), join(a, c))
    assert complement(meet(a, b)) == join(complement(a), complement(b))
    assert complement(join(a, b)) == meet(complement(a), complement(b))


def test_apply_band_examples():
    y = (Fraction(3), Fraction(4))
    assert apply_band(Band(2, {0}), y) == (3, 0)
    assert apply_band(Band.full(2), y) == y
    assert apply_band(Band.empty(2), y) == (0, 0)


@given(bands, points)
def test_band_projection_laws(b, y):
    p = apply_band(b, y)
    assert apply_band(b, p) == p
    q = apply_band(complement(b), y)
    assert tuple(s + t for s, t in zip(p, q)) == y


def test_truth_value_examples():
    z = (Fraction(0), Fraction(0))
    assert truth_value("<=", (Fraction(1), Fraction(-1)), z) == Band(2, {1})
    assert truth_value("=", z, z) == Band.full(2)
    assert truth_value("<=", (Fraction(2),), (Fraction(1),)) == Band.empty(1)


@given(points, points)
def test_truth_value_full_iff_ordered(y, z):
    assert (truth_value("<=", y, z) == Band.full(M)) == all(a <= b for a, b in zip(y, z))


def test_mix_examples():
    ys = ((Fraction(1), Fraction(1)), (Fraction(2), Fraction(2)))
    assert mix(PartitionOfUnity(2, (Band(2, {0}), Band(2, {1}))), ys) == (1, 2)
    assert mix(PartitionOfUnity(2, (Band(2, {1}), Band(2, {0}))), ys) == (2, 1)
    assert mix(PartitionOfUnity(2, (Band.full(2),)), ys[:1]) == ys[0]


def test_partition_must_be_disjoint_and_cover():
    with pytest.raises(ValueError):
        PartitionOfUnity(2, (Band(2, {0}), Band(2, {0, 1})))
    with pytest.raises(ValueError):
        PartitionOfUnity(2, (Band(2, {0}),))


@given(st.lists(points, min_size=1, max_size=3), st.lists(st.integers(0, 2), min_size=M, max_size=M))
def test_mix_agrees_on_each_part(ys, labels):
    k = len(ys)
    parts = tuple(Band(M, {i for i, lab in enumerate(labels) if lab % k == j}) for j in range(k))
    p = PartitionOfUnity(M, parts)
    out = mix(p, ys)
    for part, y in zip(parts, ys):
        assert apply_band(part, out) == apply_band(part, y)


def test_operator_arithmetic():
    A = Operator.from_rows([[1, 2], [3, 4]])
    I = Operator.identity(2)
    assert A @ I == A
    assert (A + A) == A.scaled(2)
    assert (A - A).is_zero()
    assert A.transpose().row(0) == (1, 3)
    assert A.apply((1, 1)) == (3, 7)
    with pytest.raises(DimensionError):
        A.apply((1,))
    with pytest.raises(DimensionError):
        Operator.from_rows([[1, 2], [3]])


def test_diagonal_compose_and_combine():
    A = Operator.from_rows([[1, 2], [3, 4]])
    d = DiagonalOrthomorphism((Fraction(2), Fraction(-1)))
    assert d.compose(A) == Operator.from_rows([[2, 4], [-3, -4]])
    assert not d.is_positive()
    e = DiagonalOrthomorphism((Fraction(1), Fraction(1)))
    assert combine([d, e], [A, A], (2, 2)) == Operator.from_rows([[3, 6], [0, 0]])
    assert combine([], [], (2, 2)).is_zero()
