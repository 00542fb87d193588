import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import mask1
from subtable_markov.basis import BasicMove
from subtable_markov.errors import InvalidInput, NegativeCell, ShapeMismatch
from subtable_markov.tables import (Marginals, MoveArray, Shape, SubtableMask, Table, apply_move,
                                    configuration_matrix, is_move, l1_distance, marginals)

SAMPLE = Table([[7, 5, 1], [5, 10, 6], [2, 6, 8]])


def test_example_marginals_first_mask():
    m = marginals(SAMPLE, mask1(3, 3, [(1, 1), (2, 1)]))
    assert m.row_sums == (13, 21, 16)
    assert m.col_sums == (14, 21, 15)
    assert m.subtable_sum == 12


def test_example_marginals_second_mask():
    assert marginals(SAMPLE, mask1(3, 3, [(1, 1), (2, 2)])).subtable_sum == 17


def test_zero_table_marginals():
    m = marginals(Table.zeros(Shape(2, 2)), mask1(2, 2, [(1, 2)]))
    assert m == Marginals((0, 0), (0, 0), 0)


def test_marginals_shape_mismatch():
    with pytest.raises(ShapeMismatch):
        marginals(SAMPLE, mask1(2, 3, [(1, 1)]))


def test_table_rejects_negative_and_bad_shape():
    with pytest.raises(NegativeCell):
        Table([[1, -1]])
    with pytest.raises(InvalidInput):
        Table([1, 2, 3])
    with pytest.raises(InvalidInput):
        Shape(0, 3)


def test_indispensable_move_is_a_move():
    B = MoveArray([[1, 1, -2], [-1, -1, 2]])
    assert is_move(B, mask1(2, 3, [(1, 1), (2, 2)]))


def test_zero_array_is_a_move():
    assert is_move(MoveArray(np.zeros((3, 4), int)), mask1(3, 4, [(2, 3)]))


def test_basic_move_breaking_subtable_sum():
    B = MoveArray([[1, -1], [-1, 1]])
    mask = mask1(2, 2, [(1, 1), (2, 2)])
    # oracle: indicator sum over S, by hand
    s_sum = sum(B.entries[i, j] for i, j in mask.members)
    assert s_sum == 2
    assert not is_move(B, mask)


def test_apply_move_fiber_transition():
    X = Table([[1, 1, 0], [0, 0, 2]])
    B = MoveArray([[-1, -1, 2], [1, 1, -2]])
    assert apply_move(X, B) == Table([[0, 0, 2], [1, 1, 0]])


def test_apply_zero_move_is_identity():
    assert apply_move(SAMPLE, MoveArray(np.zeros((3, 3), int))) == SAMPLE


def test_apply_move_twice_goes_negative():
    X = Table([[0, 1], [1, 0]])
    B = BasicMove(0, 1, 0, 1).to_array(Shape(2, 2))
    once = apply_move(X, B)
    assert once == Table([[1, 0], [0, 1]])
    with pytest.raises(NegativeCell):
        apply_move(once, B)


def test_l1_distance_examples():
    a, b = Table([[1, 1, 0], [0, 0, 2]]), Table([[0, 0, 2], [1, 1, 0]])
    assert l1_distance(a, b) == 8
    assert l1_distance(SAMPLE, SAMPLE) == 0
    B = BasicMove(0, 2, 1, 2).to_array(Shape(3, 3))
    assert l1_distance(SAMPLE, apply_move(SAMPLE, B)) == 4


def test_mask_helpers_roundtrip():
    m = mask1(3, 4, [(1, 2), (3, 4)])
    assert m.to_one_based() == [[1, 2], [3, 4]]
    assert m.row_bits == (0b10, 0, 0b1000)
    assert m.complement().complement() == m
    assert m.transpose().transpose() == m
    assert (3, 2) in m.transpose()


tables_3x3 = st.lists(st.integers(0, 9), min_size=9, max_size=9).map(
    lambda v: Table(np.array(v).reshape(3, 3)))
masks_3x3 = st.integers(0, 511).map(
    lambda c: SubtableMask(Shape(3, 3), [divmod(k, 3) for k in range(9) if c >> k & 1]))


@given(tables_3x3, masks_3x3)
def test_complement_sums_to_total(X, S):
    assert marginals(X, S).subtable_sum + marginals(X, S.complement()).subtable_sum == X.total


@given(tables_3x3, tables_3x3, masks_3x3)
def test_difference_within_fiber_is_move(X, Y, S):
    if marginals(X, S) == marginals(Y, S):
        assert is_move(X - Y, S)
    else:
        assert not is_move(X - Y, S)


@given(tables_3x3, tables_3x3, tables_3x3)
def test_l1_is_a_metric(X, Y, Z):
    assert l1_distance(X, Y) == l1_distance(Y, X)
    assert (l1_distance(X, Y) == 0) == (X == Y)
    assert l1_distance(X, Z) <= l1_distance(X, Y) + l1_distance(Y, Z)


@given(tables_3x3, st.integers(0, 8), st.integers(-2, 2))
def test_apply_move_never_returns_negative(X, k, sign):
    i, i2 = [(0, 1), (0, 2), (1, 2)][k % 3]
    j, j2 = [(0, 1), (0, 2), (1, 2)][k // 3]
    B = BasicMove(i, i2, j, j2).to_array(Shape(3, 3))
    try:
        out = apply_move(X, B, sign)
    except NegativeCell:
        assert (X.entries + sign * B.entries < 0).any()
    else:
        assert (out.entries >= 0).all()


def test_configuration_matrix_matches_marginals():
    rng = np.random.default_rng(11)
    for _ in range(100):
        R, C = rng.integers(1, 5, size=2)
        X = Table(rng.integers(0, 10, size=(R, C)))
        S = SubtableMask.from_array(rng.random((R, C)) < 0.4)
        A = configuration_matrix(S)
        assert A.shape == (R + C + 1, R * C)
        assert np.array_equal(A @ X.entries.ravel(), marginals(X, S).as_vector())


@settings(max_examples=50)
@given(st.lists(st.integers(0, 5), min_size=2, max_size=4),
       st.lists(st.integers(0, 5), min_size=2, max_size=4))
def test_marginals_consistency_flag(rows, cols):
    m = Marginals(rows, cols, 0)
    assert m.is_consistent() == (sum(rows) == sum(cols))
