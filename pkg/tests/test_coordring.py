"""Coordinate rings of modules: graded pieces, invariance, law calculus."""

from math import comb

import pytest

from pfcalc.coordring import (PolyLawRep, bihomogeneous_components,
                              compose_laws, direct_sum, generator_varset,
                              graded_piece, homogeneous_components,
                              is_translation_invariant, product_ring_check)
from pfcalc.fpmod import FPModule
from pfcalc.poly import MultiPoly, VarSet, parse_poly
from pfcalc.rings import Fp, QQ, ZZ, ring_from_tag


def test_free_module_gives_full_polynomial_ring():
    M = FPModule.free(QQ, 2)
    for d in range(5):
        assert graded_piece(M, d).dimension == comb(2 + d - 1, d)


def test_dual_numbers_quotient_module():
    # R = QQ[t]/(t^2), M = R/(t): dims 2,1,1,1,1,1,1
    R = ring_from_tag("QQ[t]/(t^2)")
    from pfcalc.rings import parse_quotient_payload
    t = parse_quotient_payload(R, "t")
    M = FPModule(R, 1, ((t,),))
    dims = [graded_piece(M, d).dimension for d in range(7)]
    assert dims == [2, 1, 1, 1, 1, 1, 1]


def test_char_two_quotient_module():
    R = ring_from_tag("Fp(2)[t]/(t^2)")
    from pfcalc.rings import parse_quotient_payload
    t = parse_quotient_payload(R, "t")
    M = FPModule(R, 1, ((t,),))
    dims = [graded_piece(M, d).dimension for d in range(7)]
    assert dims == [2, 1, 2, 1, 2, 1, 2]


def test_z_torsion_module_collapses():
    M = FPModule.from_ints(ZZ, 1, [[2]])
    assert graded_piece(M, 0).dimension == 1
    for d in range(1, 6):
        assert graded_piece(M, d).dimension == 0


def test_basis_elements_are_invariant():
    R = ring_from_tag("QQ[t]/(t^2)")
    from pfcalc.rings import parse_quotient_payload
    t = parse_quotient_payload(R, "t")
    M = FPModule(R, 1, ((t,),))
    piece = graded_piece(M, 3)
    for b in piece.basis:
        assert is_translation_invariant(M, b)


def test_non_invariant_polynomial_rejected():
    R = ring_from_tag("QQ[t]/(t^2)")
    from pfcalc.rings import parse_quotient_payload
    t = parse_quotient_payload(R, "t")
    M = FPModule(R, 1, ((t,),))
    vs = generator_varset(M)
    x = MultiPoly.variable(R, vs, "x1")
    assert not is_translation_invariant(M, x)


def test_invariance_over_prime_field_module():
    M = FPModule.from_ints(Fp(2), 1, [[0]])
    vs = generator_varset(M)
    f = parse_poly("x1", Fp(2), vs)
    assert is_translation_invariant(M, f)


def test_negative_degree_rejected():
    with pytest.raises(ValueError):
        graded_piece(FPModule.free(QQ, 1), -1)


def test_homogeneous_components_of_law():
    M = FPModule.free(QQ, 2)
    vs = generator_varset(M)
    law = PolyLawRep(M, (parse_poly("x1^2 + x2", QQ, vs),))
    parts = homogeneous_components(law)
    assert sorted(parts) == [1, 2]
    assert parts[2].bodies[0] == parse_poly("x1^2", QQ, vs)


def test_bihomogeneous_components():
    M = FPModule.free(QQ, 2)
    vs = generator_varset(M)
    law = PolyLawRep(M, (parse_poly("x1^2*x2 + x1*x2", QQ, vs),))
    parts = bihomogeneous_components(law, 1)
    assert set(parts) == {(2, 1), (1, 1)}


def test_compose_laws():
    M = FPModule.free(QQ, 1)
    vs = generator_varset(M)
    sq = PolyLawRep(M, (parse_poly("x1^2", QQ, vs),))
    shift = PolyLawRep(M, (parse_poly("x1 + 1", QQ, vs),))
    comp = compose_laws(sq, shift)
    assert comp.bodies[0] == parse_poly("x1^2 + 2*x1 + 1", QQ, vs)


def test_compose_rank_mismatch():
    M1 = FPModule.free(QQ, 1)
    M2 = FPModule.free(QQ, 2)
    law1 = PolyLawRep(M1, (MultiPoly.variable(QQ, generator_varset(M1), "x1"),))
    law2 = PolyLawRep(M2, tuple(
        MultiPoly.variable(QQ, generator_varset(M2), n) for n in ("x1", "x2")))
    with pytest.raises(ValueError):
        compose_laws(law2, law1)


def test_direct_sum_shapes():
    M = FPModule.from_ints(ZZ, 1, [[2]])
    N = FPModule.free(ZZ, 2)
    S = direct_sum(M, N)
    assert S.ngens == 3
    assert len(S.relations) == 1


def test_product_ring_multiplicativity_over_field():
    M = FPModule.free(QQ, 1)
    N = FPModule.free(QQ, 2)
    ok, direct, product = product_ring_check(M, N, 2, 1)
    assert ok
    assert direct == product == 2


def test_product_ring_multiplicativity_dual_numbers():
    R = ring_from_tag("QQ[t]/(t^2)")
    from pfcalc.rings import parse_quotient_payload
    t = parse_quotient_payload(R, "t")
    M = FPModule(R, 1, ((t,),))
    ok, direct, product = product_ring_check(M, M, 1, 1)
    assert ok
    assert direct == product == 1
