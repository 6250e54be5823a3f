from fractions import Fraction

import pytest
import sympy

from linalg import (
    QMatrix,
    block_diagonal,
    coordinates,
    complement_indices,
    echelon_form,
    nullspace,
    rank,
    solve,
    to_fraction,
)


def test_to_fraction_accepts_exact_values_only():
    assert to_fraction("3/4") == Fraction(3, 4)
    assert to_fraction(2) == Fraction(2)
    with pytest.raises(TypeError):
        to_fraction(0.5)
    with pytest.raises(TypeError):
        to_fraction(True)


def test_matrix_product_and_shape_checks():
    a = QMatrix.from_rows([[1, 2], [3, 4]])
    b = QMatrix.from_rows([[0, 1], [1, 0]])
    assert (a @ b).tolist() == [[2, 1], [4, 3]]
    assert a.apply([1, -1]) == (Fraction(-1), Fraction(-1))
    with pytest.raises(ValueError):
        a @ QMatrix.zeros(3, 1)


def test_empty_shapes_compose():
    left = QMatrix.zeros(2, 0)
    right = QMatrix.zeros(0, 3)
    product = left @ right
    assert product.shape == (2, 3)
    assert product.is_zero()
    assert QMatrix.zeros(0, 2).transpose().shape == (2, 0)


def test_echelon_form_is_canonical():
    rows = [[2, 4, 6], [1, 1, 1]]
    reduced, pivots = echelon_form(rows, 3)
    again, _ = echelon_form(list(reversed(rows)) + [[3, 5, 7]], 3)
    assert reduced == again
    assert pivots == [0, 1]
    assert reduced == [
        (Fraction(1), Fraction(0), Fraction(-1)),
        (Fraction(0), Fraction(1), Fraction(2)),
    ]


def test_rank_matches_sympy():
    rows = [[1, 2, 3, 4], [2, 4, 6, 8], [0, 1, Fraction(1, 2), 0], [1, 3, Fraction(7, 2), 4]]
    assert rank(rows, 4) == sympy.Matrix(rows).rank() == 2


def test_nullspace_vectors_are_solutions():
    rows = [[1, 1, 0, -1], [0, 1, 1, 1]]
    basis = nullspace(rows, 4)
    assert len(basis) == 2
    matrix = QMatrix.from_rows(rows)
    for vector in basis:
        assert all(x == 0 for x in matrix.apply(vector))


def test_solve_and_coordinates():
    assert solve([[1, 1], [1, -1]], [3, 1], 2) == (Fraction(2), Fraction(1))
    assert solve([[1, 1], [1, 1]], [1, 2], 2) is None
    assert coordinates([(1, 0, 1), (0, 1, 1)], (2, 3, 5)) == (Fraction(2), Fraction(3))
    assert coordinates([(1, 0, 1)], (0, 1, 0)) is None
    assert coordinates([], (0, 0)) == ()


def test_complement_indices_complete_the_span():
    assert complement_indices([[1, 1, 0]], 3) == [1, 2]
    assert complement_indices([], 2) == [0, 1]


def test_block_diagonal():
    block = block_diagonal([QMatrix.identity(1), QMatrix.zeros(1, 0), QMatrix.from_rows([[2]])])
    assert block.shape == (3, 2)
    assert block.tolist() == [[1, 0], [0, 0], [0, 2]]
