"""Polynomial functor expressions: evaluation, laws, shifts, dimensions."""

from math import comb

import pytest

from pfcalc.fpmod import FPModule
from pfcalc.functors import (Compose, Const, DirectSum, Dual, Ext, Id, Shift,
                             Sym, Tensor, binomial_eval, dimension_function,
                             dual, evaluate, homogeneous_parts, parse_functor,
                             shift_decompose)
from pfcalc.rings import ZZ


def test_evaluation_ranks():
    assert evaluate(Id(), 4).module.ngens == 4
    assert evaluate(Sym(2), 3).module.ngens == comb(3 + 1, 2)
    assert evaluate(Ext(3), 5).module.ngens == comb(5, 3)
    assert evaluate(Ext(3), 2).module.ngens == 0
    assert evaluate(Tensor((Id(), Id())), 3).module.ngens == 9


def test_const_evaluation():
    c = Const(FPModule.from_ints(ZZ, 1, [[2]]))
    ev = evaluate(c, 7)
    assert ev.module.ngens == 1
    assert len(ev.module.relations) == 1


def test_degrees():
    assert Sym(4).degree() == 4
    assert Tensor((Id(), Id(), Id())).degree() == 3
    assert DirectSum((Sym(2), Ext(3))).degree() == 3
    assert Compose(Sym(2), Sym(3)).degree() == 6
    assert Const(FPModule.free(ZZ, 2)).degree() == 0
    assert Shift(1, Sym(2)).degree() == 2
    assert Dual(Sym(2)).degree() == 2


def test_law_functoriality_sym2():
    # law(g h) = law(g) law(h) for Sym(2) on random integer matrices
    ev = evaluate(Sym(2), 2)
    g = [[1, 2], [0, 1]]
    h = [[3, 1], [1, 1]]
    gh = [[sum(g[i][k] * h[k][j] for k in range(2)) for j in range(2)]
          for i in range(2)]
    lg, lh, lgh = ev.law_at(g), ev.law_at(h), ev.law_at(gh)
    size = ev.module.ngens
    prod = [[sum(lg[i][k] * lh[k][j] for k in range(size))
             for j in range(size)] for i in range(size)]
    assert prod == lgh


def test_law_of_identity_matrix_is_identity():
    for expr in (Sym(3), Ext(2), Tensor((Id(), Id()))):
        ev = evaluate(expr, 3)
        ident = [[1 if i == j else 0 for j in range(3)] for i in range(3)]
        law = ev.law_at(ident)
        size = ev.module.ngens
        assert law == [[1 if i == j else 0 for j in range(size)]
                       for i in range(size)]


def test_ext_law_is_determinantal():
    ev = evaluate(Ext(2), 2)
    law = ev.law_at([[1, 2], [3, 4]])
    assert law == [[-2]]


def test_dual_law_is_transpose_inverse_free():
    ev = dual(Sym(2), 2)
    base = evaluate(Sym(2), 2)
    g = [[2, 1], [1, 1]]
    gt = [[2, 1], [1, 1]]
    dual_law = ev.law_at(g)
    ref = base.law_at([[g[j][i] for j in range(2)] for i in range(2)])
    size = base.module.ngens
    assert dual_law == [[ref[j][i] for j in range(size)] for i in range(size)]


def test_homogeneous_parts_partition():
    parts = homogeneous_parts(DirectSum((Sym(2), Ext(3))), 3)
    assert sorted(parts) == [2, 3]
    assert len(parts[2]) == 6
    assert len(parts[3]) == 1


def test_shift_decompose_sizes():
    p_basis, q_basis = shift_decompose(Sym(2), 1, 2)
    total = evaluate(Sym(2), 3).module.ngens
    assert len(p_basis) + len(q_basis) == total
    assert len(p_basis) == evaluate(Sym(2), 2).module.ngens


def test_dimension_function_sym2():
    report = dimension_function(Sym(2), [2, 3], 5)
    assert report.table[0] == tuple(comb(n + 1, 2) for n in range(6))
    assert report.jumping_primes == ()
    for p, coeffs in report.coefficients.items():
        assert binomial_eval(coeffs, 4) == report.table[p][4]


def test_dimension_function_jumping_prime():
    expr = DirectSum((Const(FPModule.from_ints(ZZ, 1, [[2]])), Id()))
    report = dimension_function(expr, [2, 3, 5], 3)
    assert report.jumping_primes == (2,)
    assert report.table[2][0] == 1
    assert report.table[0][0] == 0


def test_dimension_function_window_validation():
    with pytest.raises(ValueError):
        dimension_function(Sym(2), [2], 1)


def test_parse_functor_round_trip():
    texts = ("Sym(2)", "Ext(3)", "Sym(2) (+) Ext(3)", "Tensor(Id, Id)",
             "Shift(1, Sym(2))", "Dual(Sym(2))", "Compose(Sym(2), Sym(2))")
    for t in texts:
        expr = parse_functor(t)
        assert parse_functor(str(expr)) == expr


def test_parse_functor_const():
    expr = parse_functor("Const(ZZ/2) (+) Id")
    assert isinstance(expr, DirectSum)
    assert expr.children[0].module.relations == ((2,),)


def test_parse_functor_rejects_garbage():
    with pytest.raises(ValueError):
        parse_functor("Sym(2) + + Ext(3)")
    with pytest.raises(ValueError):
        parse_functor("Frob(2)")
