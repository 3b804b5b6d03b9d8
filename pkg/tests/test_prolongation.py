import pytest

from webcurv import QXY, FieldMatrix, parse_expression
from webcurv.seed import compute_seed
from webcurv.prolongation import (
    assemble_cramer,
    cramer_matrix,
    index_maps,
    keep_first,
    keep_last,
    lower_identity,
    m_derivative,
    shift_matrix,
    tensor_tables,
    upper_identity,
)
from webcurv.selftest import D4_WEB


@pytest.mark.parametrize("d", [3, 4, 5, 6, 7])
def test_cramer_matrix_is_invertible_0_1(d):
    P = cramer_matrix(d, QXY)
    assert P.shape == ((d - 2) * (d - 1), (d - 1) * (d - 2))
    assert all(v.is_zero() or v == 1 for row in P for v in row)
    assert P @ P.inverse() == FieldMatrix.identity(P.rows, QXY)


@pytest.mark.parametrize("d", [3, 4, 5, 6, 7])
def test_shift_is_nilpotent_of_index_d_minus_2(d):
    K = shift_matrix(d, QXY)
    power = FieldMatrix.identity(d - 2, QXY)
    for k in range(d - 2):
        if k < d - 2:
            assert not power.is_zero()
        power = power @ K
    assert power.is_zero()


def test_selectors():
    d = 5
    I0, Iu, J0, oJ = (f(d, QXY) for f in (lower_identity, upper_identity, keep_first, keep_last))
    n = d - 2
    assert J0 @ I0 == FieldMatrix.identity(n, QXY)
    assert oJ @ Iu == FieldMatrix.identity(n, QXY)
    assert (I0 @ J0 + FieldMatrix.from_function(d - 1, d - 1, lambda i, j: QXY.one if i == j == n else QXY.zero, QXY)) == FieldMatrix.identity(d - 1, QXY)


@pytest.mark.parametrize("d", [3, 4, 5, 6])
def test_index_maps_are_bijections(d):
    maps = index_maps(d)
    assert maps.m == (d - 1) * (d - 2) // 2
    seen = []
    for h in range(d - 2):
        for j in range(d - 2 - h):
            a = maps.free(h, j)
            assert (maps.hh(a), maps.jj(a)) == (h, j)
            seen.append(a)
    assert sorted(seen) == list(range(1, maps.m + 1))
    for a in range(1, (d - 1) * (d - 2) + 1):
        assert maps.full(maps.hhh(a), maps.jjj(a)) == a


def test_index_map_errors():
    maps = index_maps(4)
    with pytest.raises(ValueError):
        maps.free(1, 1)
    with pytest.raises(ValueError):
        maps.hh(0)
    with pytest.raises(ValueError):
        index_maps(2)


def test_m_derivative():
    M = FieldMatrix.column_vector([parse_expression("x^3*y^2")], QXY)
    assert m_derivative(M, 2, 1)[0, 0] == parse_expression("12*x*y")


def test_tables_for_d4():
    _, elim = compute_seed(D4_WEB)
    tables = tensor_tables(elim.M, 4)
    d = 4
    # G[0,0,0] = M E[0,0,0] = M
    assert tables.G[0, 0, 0] == elim.M
    # first prolongation: E[0,1,0] = -J0 I^0 E[0,0,1] + J0 M = J0 M, E[1,1,0] = -J0 I^0
    assert tables.e(0, 1, 0) == keep_first(d, QXY) @ elim.M
    assert tables.e(1, 1, 0) == -(keep_first(d, QXY) @ upper_identity(d, QXY))
    cramer = assemble_cramer(tables)
    assert cramer.P @ cramer.U == cramer.Q
