import itertools

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from torsor.exactla import (
    LinearAlgebraError,
    Matrix,
    VectorFamily,
    basis_change_det,
    determinant,
    image_pivot_columns,
    kernel_basis,
    leibniz_determinant,
    rank,
    rref,
    solve,
)
from torsor.numfield import QQ, NumberField

K2 = NumberField([1, -1, 1])


def small_matrices(max_rows=4, max_cols=4, values=(-2, -1, 0, 1, 2)):
    return st.integers(1, max_rows).flatmap(
        lambda r: st.integers(1, max_cols).flatmap(
            lambda c: st.lists(
                st.lists(st.sampled_from(values), min_size=c, max_size=c), min_size=r, max_size=r
            )
        )
    )


def square_matrices(max_n=4):
    return st.integers(1, max_n).flatmap(
        lambda n: st.lists(st.lists(st.integers(-3, 3), min_size=n, max_size=n), min_size=n, max_size=n)
    )


def permutation_expansion(rows):
    """Plain sum over permutations with the inversion-count sign."""
    n = len(rows)
    total = 0
    for perm in itertools.permutations(range(n)):
        inv = sum(1 for i in range(n) for j in range(i + 1, n) if perm[i] > perm[j])
        term = (-1) ** inv
        for i in range(n):
            term *= rows[i][perm[i]]
        total += term
    return total


@settings(max_examples=60, deadline=None)
@given(square_matrices())
def test_determinant_matches_permutation_expansion(rows):
    m = Matrix.from_rows(QQ, rows)
    assert determinant(m) == permutation_expansion(rows)
    assert leibniz_determinant(m) == permutation_expansion(rows)


@settings(max_examples=30, deadline=None)
@given(square_matrices(3), square_matrices(3))
def test_determinant_over_quadratic_field_matches_expansion(a_rows, b_rows):
    n = min(len(a_rows), len(b_rows))
    w = K2.gen
    rows = [[K2(a_rows[i][j]) + K2(b_rows[i][j]) * w for j in range(n)] for i in range(n)]
    m = Matrix.from_rows(K2, rows)
    assert determinant(m) == leibniz_determinant(m)


@settings(max_examples=60, deadline=None)
@given(small_matrices())
def test_rank_and_kernel_against_sympy(rows):
    m = Matrix.from_rows(QQ, rows)
    s = sympy.Matrix(rows)
    assert rank(m) == s.rank()
    ker = kernel_basis(m)
    assert len(ker) == m.cols - s.rank()
    for v in ker:
        assert all(x == 0 for x in m.apply(v))


@settings(max_examples=40, deadline=None)
@given(small_matrices(3, 4, values=(-1, 0, 1)))
def test_kernel_contains_every_brute_force_solution(rows):
    m = Matrix.from_rows(QQ, rows)
    ker = kernel_basis(m)
    for x in itertools.product((-1, 0, 1), repeat=m.cols):
        if all(sum(r[j] * x[j] for j in range(m.cols)) == 0 for r in rows):
            cols = list(ker.vectors) + [tuple(QQ(v) for v in x)]
            assert rank(Matrix.from_columns(QQ, cols, m.cols)) == len(ker)


@settings(max_examples=40, deadline=None)
@given(small_matrices())
def test_rank_nullity_and_image(rows):
    m = Matrix.from_rows(QQ, rows)
    image, pre = image_pivot_columns(m)
    assert len(image) + len(kernel_basis(m)) == m.cols
    for col, x in zip(image, pre):
        assert m.apply(x) == tuple(col)


@settings(max_examples=40, deadline=None)
@given(small_matrices())
def test_rref_against_sympy(rows):
    red, pivots, rk = rref(Matrix.from_rows(QQ, rows))
    s_red, s_piv = sympy.Matrix(rows).rref()
    assert tuple(pivots) == tuple(s_piv) and rk == len(s_piv)
    for i in range(rk):
        assert [x.to_rational() for x in red.row(i)] == [sympy.Rational(v) for v in s_red.row(i)]


@settings(max_examples=40, deadline=None)
@given(square_matrices(), st.lists(st.integers(-5, 5), min_size=4, max_size=4))
def test_solve_reproduces_right_hand_side(rows, rhs):
    m = Matrix.from_rows(QQ, rows)
    b = tuple(QQ(v) for v in rhs[: m.rows])
    try:
        x = solve(m, VectorFamily(QQ, m.rows, [b]))[0]
    except LinearAlgebraError:
        assert sympy.Matrix(rows).rank() < sympy.Matrix(rows).row_join(sympy.Matrix(rhs[: m.rows])).rank()
        return
    assert m.apply(x) == b


def _family(rows_as_vectors):
    return VectorFamily(QQ, len(rows_as_vectors[0]), [[QQ(x) for x in v] for v in rows_as_vectors])


def invertible(n):
    return square_matrices(n).filter(lambda r: len(r) == n and sympy.Matrix(r).det() != 0)


@settings(max_examples=30, deadline=None)
@given(invertible(3), invertible(3), invertible(3))
def test_basis_change_cocycle(u, v, w):
    u, v, w = _family(u), _family(v), _family(w)
    assert basis_change_det(u, w) == basis_change_det(u, v) * basis_change_det(v, w)
    assert basis_change_det(u, u) == 1


def test_basis_change_examples():
    assert basis_change_det(_family([[2]]), _family([[1]])) == 2
    assert basis_change_det(_family([[1, 0], [2, 0]]), _family([[1, 0], [0, 1]])) == 0
    with pytest.raises(LinearAlgebraError):
        basis_change_det(_family([[1, 0]]), _family([[0, 1]]))
    with pytest.raises(LinearAlgebraError):
        basis_change_det(_family([[1, 0], [0, 1]]), _family([[1, 0], [2, 0]]))


def test_matrix_algebra():
    a = Matrix.from_rows(K2, [[1, "w"], [0, 1]])
    b = a.inverse()
    assert a @ b == Matrix.identity(K2, 2)
    assert (a + a).scale("1/2") == a
    assert a.transpose()[1, 0] == K2.gen
    with pytest.raises(ZeroDivisionError):
        Matrix.from_rows(QQ, [[1, 2], [2, 4]]).inverse()
    with pytest.raises(ValueError):
        Matrix.from_rows(QQ, [[1, 2], [3]])
