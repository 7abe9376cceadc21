"""Exact linear algebra: reduction, kernels, integer echelon, Smith form."""

from fractions import Fraction

from pfcalc.linalg import (integer_echelon, integer_rank, kernel_basis, rank,
                           rank_mod_p, row_reduce, smith_normal_form)
from pfcalc.rings import Fp, QQ


def F(x):
    return Fraction(x)


def test_row_reduce_identifies_pivots():
    rows = [[F(1), F(2), F(3)], [F(2), F(4), F(7)]]
    rref, pivots = row_reduce(rows, QQ)
    assert pivots == [0, 2]
    assert rref[0] == [F(1), F(2), F(0)]
    assert rref[1] == [F(0), F(0), F(1)]


def test_rank_over_fp():
    rows = [[1, 2], [2, 4]]
    assert rank(rows, Fp(5)) == 1
    assert rank(rows, Fp(2)) == 1
    assert rank([[1, 0], [0, 1]], Fp(2)) == 2


def test_kernel_basis_annihilates():
    rows = [[F(1), F(2), F(3)], [F(4), F(5), F(6)]]
    ker = kernel_basis(rows, QQ)
    assert len(ker) == 1
    v = ker[0]
    for row in rows:
        assert sum(a * b for a, b in zip(row, v)) == 0


def test_kernel_of_full_rank_map_is_trivial():
    assert kernel_basis([[F(1), F(0)], [F(0), F(1)]], QQ) == []


def test_integer_echelon_pivots():
    rows = [[2, 4], [1, 3]]
    ech, cols, pivots = integer_echelon(rows)
    assert cols == [0, 1]
    assert len(pivots) == 2
    assert integer_rank(rows) == 2


def test_rank_mod_p_drops():
    rows = [[2, 4]]
    assert integer_rank(rows) == 1
    assert rank_mod_p(rows, 2) == 0
    assert rank_mod_p(rows, 3) == 1


def test_smith_normal_form_divisibility():
    rows = [[2, 4, 4], [-6, 6, 12], [10, -4, -16]]
    divisors = smith_normal_form(rows)
    assert all(divisors[i] % divisors[i - 1] == 0
               for i in range(1, len(divisors)))
    # product of divisors = |det| for a square nonsingular matrix
    prod = 1
    for d in divisors:
        prod *= d
    assert prod == 144


def test_smith_normal_form_of_single_relation():
    assert smith_normal_form([[2, 4]]) == [2]
