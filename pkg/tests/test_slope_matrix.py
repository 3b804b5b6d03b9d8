import random

import pytest
from hypothesis import given, settings, strategies as st

from webcurv import QXY, FieldMatrix, SlopePolynomial, convolution_matrix, parse_expression
from webcurv.errors import DimensionMismatch, SingularMatrix
from webgen import random_quadratic


def poly(*coeffs):
    return SlopePolynomial([parse_expression(c) for c in coeffs], QXY)


int_lists = st.lists(st.integers(-5, 5), min_size=1, max_size=5)


@settings(max_examples=50, deadline=None)
@given(int_lists, int_lists, st.integers(0, 4))
def test_convolution_is_functorial(a, b, h):
    """M(a) M(b) = M(a b) on the right shapes: convolution matrices compose like products."""
    A = SlopePolynomial([QXY.from_int(v) for v in a], QXY)
    Bp = SlopePolynomial([QXY.from_int(v) for v in b], QXY)
    left = convolution_matrix(A, len(b) - 1 + h) @ convolution_matrix(Bp, h)
    assert left == convolution_matrix(A * Bp, h)


def test_convolution_matrix_shape_and_columns():
    f = poly("1", "x", "y")
    m = convolution_matrix(f, 3)
    assert m.shape == (6, 4)
    for c in range(4):
        col = m.column(c)
        assert col[c : c + 3] == [f[0], f[1], f[2]]
        assert all(v.is_zero() for i, v in enumerate(col) if not c <= i < c + 3)


def test_slope_polynomial_calculus():
    f = poly("y", "x", "0", "1")
    assert f.degree() == 3
    assert f.diff_p() == poly("x", "0", "3")
    assert f.diff("x") == poly("0", "1")
    assert f.shift() == poly("0", "y", "x", "0", "1")
    assert f.evaluate_p(parse_expression("2")) == parse_expression("y + 2*x + 8")


def test_inverse_and_determinant():
    rng = random.Random(5)
    A = FieldMatrix.from_function(3, 3, lambda i, j: parse_expression(random_quadratic(rng, 0.7)), QXY)
    if A.determinant().is_zero():
        pytest.skip("singular draw")
    assert A @ A.inverse() == FieldMatrix.identity(3, QXY)
    assert (A @ A).determinant() == A.determinant() * A.determinant()
    assert A.transpose().determinant() == A.determinant()


def test_rank_and_singularity():
    S = FieldMatrix(
        [[parse_expression("x"), parse_expression("y")], [parse_expression("x^2"), parse_expression("x*y")]], QXY
    )
    assert S.rank() == 1
    assert S.determinant().is_zero()
    with pytest.raises(SingularMatrix):
        S.inverse()


def test_structural_edits():
    A = FieldMatrix.from_ints([[1, 2], [3, 4], [5, 6]], QXY)
    assert A.delete_rows(1) == FieldMatrix.from_ints([[1, 2], [5, 6]], QXY)
    assert A.delete_rows(0, 2) == FieldMatrix.from_ints([[5, 6]], QXY)
    assert A.insert_zero_column(1) == FieldMatrix.from_ints([[1, 0, 2], [3, 0, 4], [5, 0, 6]], QXY)
    assert A.pad_rows(4).row(3) == (QXY.zero, QXY.zero)
    with pytest.raises(DimensionMismatch):
        A @ A
