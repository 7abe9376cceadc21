"""Closed subsets at finite rank: image closures, specialization, symmetry."""

import random

import pytest

from pfcalc.geometry import (NoDependence, SizeGuardExceeded, SizeGuards,
                             cube_sum, dimension_per_prime, equivariance_check,
                             four_squares, good_primes, image_closure,
                             sum_of_powers, target_varset, taylor_directional,
                             vanishing_transfer)
from pfcalc.groebner import buchberger, ideal_dimension
from pfcalc.poly import Grevlex, MultiPoly, VarSet, parse_poly
from pfcalc.rings import Fp, QQ, ZZ


def test_cube_sum_dimensions_rank2():
    dims = dimension_per_prime(cube_sum, 2, (2, 3, 5))
    assert dims == {0: 4, 2: 4, 3: 2, 5: 4}


def test_cube_sum_closure_f3_is_proper():
    subset = image_closure(cube_sum, 2, Fp(3))
    assert subset.generators
    assert ideal_dimension(subset.gb) == 2


def test_four_squares_f2_linear_codimension_two():
    subset = image_closure(four_squares, 2, Fp(2))
    # ambient Sym(4) at rank 2 has 5 coordinates; the closure is linear of
    # codimension 2, cutting out the span of the three square monomials
    assert len(subset.varset) == 5
    gens = subset.generators
    assert len(gens) == 2
    for g in gens:
        assert g.total_degree() == 1
    assert ideal_dimension(subset.gb) == 3


def test_four_squares_dimension_per_prime():
    dims = dimension_per_prime(four_squares, 2, (2,))
    assert dims[0] == 5
    assert dims[2] == 3


def test_image_closure_requires_field():
    with pytest.raises(ValueError):
        image_closure(cube_sum, 2, ZZ)


def test_size_guard_refusal():
    guards = SizeGuards(max_variables=3)
    with pytest.raises(SizeGuardExceeded):
        image_closure(cube_sum, 2, QQ, guards)


def test_target_varset_weights_match_degree():
    vs = target_varset(cube_sum.target, 2)
    assert set(vs.weights) == {3}
    vs4 = target_varset(four_squares.target, 2)
    assert set(vs4.weights) == {4}


def test_image_closure_generators_weighted_homogeneous():
    for alpha, n, ring in ((cube_sum, 2, Fp(3)), (four_squares, 2, Fp(2)),
                           (sum_of_powers(1, 2), 2, QQ)):
        subset = image_closure(alpha, n, ring)
        for g in subset.generators:
            assert g.is_weighted_homogeneous()


def test_good_primes_3x():
    # <3x> in ZZ[x, y]: mod 3 the generator vanishes and V becomes the plane
    vs = VarSet(("x", "y"))
    report = good_primes([parse_poly("3*x", ZZ, vs)], (2, 3, 5, 7))
    assert report.r % 3 == 0
    flagged = [v.prime for v in report.verdicts if not v.good]
    assert flagged == [3]
    dims = {v.prime: v.dimension for v in report.verdicts}
    assert dims == {2: 1, 3: 2, 5: 1, 7: 1}
    assert report.generic_dimension == 1


def test_vanishing_transfer_3x():
    vs = VarSet(("x", "y"))
    gens = [parse_poly("3*x", ZZ, vs)]
    out = vanishing_transfer(parse_poly("x", ZZ, vs), gens, (2, 3, 5))
    assert out == {0: True, 2: True, 3: False, 5: True}


def test_good_primes_requires_integral_input():
    vs = VarSet(("x",))
    with pytest.raises(ValueError):
        good_primes([parse_poly("x", QQ, vs)], (2,))


def _random_integral_ideal(rng):
    nvars = rng.randrange(1, 4)
    vs = VarSet(tuple(f"x{i + 1}" for i in range(nvars)))
    gens = []
    for _ in range(rng.randrange(1, 4)):
        terms = {}
        for _ in range(rng.randrange(1, 4)):
            e = tuple(rng.randrange(4) for _ in range(nvars))
            if sum(e) > 3:
                continue
            terms[e] = rng.randrange(-6, 7) or 1
        if terms:
            gens.append(MultiPoly(ZZ, vs, terms))
    return vs, gens


def test_good_primes_random_ideals_verified_from_scratch():
    rng = random.Random(424242)
    order = Grevlex()
    checked = 0
    while checked < 20:
        vs, gens = _random_integral_ideal(rng)
        if not gens:
            continue
        report = good_primes(gens, (2, 3, 5, 7))
        for v in report.verdicts:
            if not v.good:
                continue
            ring_p = Fp(v.prime)
            gens_p = [g.map_coefficients(lambda c: c % v.prime, ring_p)
                      for g in gens]
            gens_p = [g for g in gens_p if not g.is_zero()]
            if gens_p:
                gb_p = buchberger(gens_p, order)
                stairs = gb_p.leading_monomials
                assert ideal_dimension(gb_p) == v.dimension
            else:
                stairs = frozenset()
                assert v.dimension == len(vs)
            generic_stairs = frozenset(
                f.leading(order)[0] for f in report.generic_basis)
            assert stairs == generic_stairs
        checked += 1


def test_vanishing_transfer():
    vs = VarSet(("x", "y"))
    gens = [parse_poly("x^2", ZZ, vs)]
    out = vanishing_transfer(parse_poly("x", ZZ, vs), gens, (2, 3))
    assert out == {0: True, 2: True, 3: True}
    out2 = vanishing_transfer(parse_poly("y", ZZ, vs), gens, (2,))
    assert out2 == {0: False, 2: False}


def test_vanishing_transfer_detects_modular_collapse():
    # 2x vanishes on V(x) over QQ and everywhere over F_2
    vs = VarSet(("x",))
    gens = [parse_poly("x", ZZ, vs)]
    out = vanishing_transfer(parse_poly("2*x", ZZ, vs), gens, (2, 3))
    assert out == {0: True, 2: True, 3: True}


def test_equivariance_of_image_closures():
    for ring in (QQ, Fp(3)):
        subset = image_closure(cube_sum, 2, ring)
        assert equivariance_check(subset)


def test_equivariance_detects_asymmetric_ideal():
    from pfcalc.geometry import closed_subset
    from pfcalc.functors import Sym
    vs = target_varset(Sym(3), 2)
    gens = [parse_poly("y1", QQ, vs)]
    subset = closed_subset(Sym(3), 2, QQ, gens)
    assert not equivariance_check(subset)


def test_taylor_char_zero_derivative():
    vs = VarSet(("x1", "x2"))
    f = parse_poly("x1^2*x2", QQ, vs)
    e, hs = taylor_directional(f, 2, 0)
    assert e == 0
    assert hs[0] == parse_poly("2*x1*x2", QQ, vs)
    assert hs[1] == parse_poly("x1^2", QQ, vs)


def test_taylor_frobenius_power():
    for p in (2, 3, 5):
        vs = VarSet(("x",))
        f = parse_poly(f"x^{p}", Fp(p), vs)
        e, hs = taylor_directional(f, 1, p)
        assert e == 1
        assert hs[0] == parse_poly("1", Fp(p), vs)


def test_taylor_random_char_zero(seed=99):
    rng = random.Random(seed)
    vs = VarSet(("x1", "x2", "x3"))
    for _ in range(50):
        d = rng.randrange(1, 4)
        terms = {}
        for _ in range(rng.randrange(1, 4)):
            cut1 = rng.randrange(d + 1)
            cut2 = rng.randrange(d - cut1 + 1)
            e = (cut1, cut2, d - cut1 - cut2)
            terms[e] = QQ.from_int(rng.randrange(1, 5))
        f = MultiPoly(QQ, vs, terms)
        try:
            e_exp, hs = taylor_directional(f, 2, 0)
        except NoDependence:
            assert not any(e[0] or e[1] for e in f.terms)
            continue
        assert e_exp == 0
        # h_i is the partial derivative with respect to variable i
        for i in range(2):
            expected = {}
            for e, c in f.terms.items():
                if e[i]:
                    e2 = list(e)
                    e2[i] -= 1
                    key = tuple(e2)
                    expected[key] = expected.get(key, 0) + c * e[i]
            expected = {k: v for k, v in expected.items() if v}
            assert hs[i].terms == expected


def test_taylor_rejects_inhomogeneous():
    vs = VarSet(("x",))
    with pytest.raises(ValueError):
        taylor_directional(parse_poly("x^2 + x", QQ, vs), 1, 0)


def test_taylor_no_dependence():
    vs = VarSet(("x", "y"))
    with pytest.raises(NoDependence):
        taylor_directional(parse_poly("y^2", QQ, vs), 1, 0)
