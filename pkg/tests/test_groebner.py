"""Groebner machinery against a brute-force oracle and hand-checked cases."""

import itertools
import random

import pytest

from pfcalc.groebner import (GroebnerBasis, NonFieldCoefficients, buchberger,
                             eliminate, ideal_dimension, normal_form,
                             radical_membership, s_polynomial,
                             verify_buchberger_criterion)
from pfcalc.poly import (Elimination, Grevlex, Lex, MultiPoly, VarSet,
                         parse_poly)
from pfcalc.rings import Fp, QQ, ZZ

VS = VarSet(("x", "y"))


def P(text, ring=QQ, vs=VS):
    return parse_poly(text, ring, vs)


def test_normal_form_single_divisor():
    f = P("x^2*y + x")
    g = P("x*y - 1")
    r = normal_form(f, [g], Grevlex())
    assert r == P("2*x")


def test_normal_form_is_idempotent():
    gens = [P("x^2 - y"), P("x*y - 1")]
    f = P("x^5 + y^3 - x")
    r = normal_form(f, gens, Grevlex())
    assert normal_form(r, gens, Grevlex()) == r


def test_normal_form_requires_field():
    with pytest.raises(NonFieldCoefficients):
        normal_form(parse_poly("2*x", ZZ, VS), [parse_poly("x", ZZ, VS)],
                    Grevlex())


def test_s_polynomial_cancels_leading_terms():
    f = P("x^2 + y")
    g = P("x*y + 1")
    s = s_polynomial(f, g, Grevlex())
    lcm_exp = (2, 1)
    assert lcm_exp not in s.terms


def test_buchberger_of_principal_ideal():
    gb = buchberger([P("2*x^2 - 2*y")], Grevlex())
    assert len(gb.generators) == 1
    assert gb.generators[0] == P("x^2 - y")


def test_buchberger_textbook_pair():
    gb = buchberger([P("x^2 - y"), P("x^3 - x")], Lex())
    # x^3 - x = x*(x^2 - y) + (x*y - x), so the basis picks up x*y - x
    assert gb.contains(P("x*y - x"))
    assert gb.contains(P("y^2 - y"))
    assert not gb.contains(P("y - 1"))


def test_buchberger_detects_unit_ideal():
    gb = buchberger([P("x"), P("x + 1")], Grevlex())
    assert gb.contains_one()
    assert ideal_dimension(gb) == -1


def test_buchberger_idempotent():
    gens = [P("x^2 + y^2 - 1"), P("x*y - 1")]
    gb = buchberger(gens, Grevlex())
    again = buchberger(list(gb.generators), Grevlex())
    assert gb.generators == again.generators


def test_reduced_basis_is_monic_and_self_reduced():
    gb = buchberger([P("3*x^2 + y"), P("2*y^2 - x")], Grevlex())
    for g in gb.generators:
        assert g.leading(Grevlex())[1] == 1
        others = [h for h in gb.generators if h is not g]
        if others:
            assert normal_form(g, others, Grevlex()) == g


def test_verify_buchberger_criterion():
    gb = buchberger([P("x^2 - y"), P("x*y - 1")], Grevlex())
    assert verify_buchberger_criterion(gb.generators, Grevlex())
    assert not verify_buchberger_criterion([P("x^2 - y"), P("x*y - 1")],
                                           Grevlex())


def test_ideal_dimension_cases():
    assert ideal_dimension(buchberger([P("x")], Grevlex())) == 1
    assert ideal_dimension(buchberger([P("x"), P("y")], Grevlex())) == 0
    vs3 = VarSet(("x", "y", "z"))
    gb = buchberger([parse_poly("x*y", QQ, vs3)], Grevlex())
    assert ideal_dimension(gb) == 2


def test_eliminate_circle_parameterization():
    # x = t^2, y = t^3 implies x^3 = y^2
    vs = VarSet(("t", "x", "y"))
    gens = [parse_poly("x - t^2", QQ, vs), parse_poly("y - t^3", QQ, vs)]
    out = eliminate(gens, {"t"})
    small = VarSet(("x", "y"))
    assert [str(g.varset.names) for g in out]
    gb = buchberger(out, Grevlex())
    assert gb.contains(parse_poly("x^3 - y^2", QQ, small))


def test_eliminate_rejects_unknown_variable():
    with pytest.raises(ValueError):
        eliminate([P("x")], {"w"})


def test_radical_membership():
    gens = [P("x^2")]
    assert radical_membership(P("x"), gens)
    assert not radical_membership(P("y"), gens)
    assert radical_membership(P("x*y"), gens)


def test_groebner_over_fp():
    F5 = Fp(5)
    gens = [parse_poly("x^2 + y", F5, VS), parse_poly("x*y + 3", F5, VS)]
    gb = buchberger(gens, Grevlex())
    assert verify_buchberger_criterion(gb.generators, Grevlex())
    for g in gens:
        assert gb.contains(g)


def test_denominator_logging_captures_input_content():
    log = []
    buchberger([parse_poly("3*x", QQ, VS)], Grevlex(), new_poly_log=log)
    lead_coeffs = [f.leading(Grevlex())[1] for f in log]
    assert any(c % 3 == 0 for c in lead_coeffs)


# ---------------------------------------------------------------------------
# Brute-force oracle: every ideal with <= 2 generators, <= 2 variables,
# degree <= 3 over F_5.  The oracle reduces with a naive repeated scan and
# completes the basis by unoptimized S-pair saturation.


def _oracle_normal_form(f, gens, order):
    ring = f.ring
    work = f
    changed = True
    while changed and not work.is_zero():
        changed = False
        exps = sorted(work.terms, key=order.key, reverse=True)
        for exp in exps:
            for g in gens:
                lm, lc = g.leading(order)
                if all(a <= b for a, b in zip(lm, exp)):
                    shift = tuple(b - a for a, b in zip(lm, exp))
                    c = ring.mul(work.terms[exp], ring.inv(lc))
                    work = work - g.term_mul(shift, c)
                    changed = True
                    break
            if changed:
                break
    return work


def _oracle_groebner(gens, order):
    basis = [g for g in gens if not g.is_zero()]
    while True:
        new = []
        for f, g in itertools.combinations(basis, 2):
            r = _oracle_normal_form(s_polynomial(f, g, order), basis, order)
            if not r.is_zero():
                new.append(r)
        if not new:
            return basis
        basis.append(new[0])


def _staircase(basis, order):
    lms = [g.leading(order)[0] for g in basis if not g.is_zero()]
    mins = []
    for lm in lms:
        if not any(m != lm and all(a <= b for a, b in zip(m, lm))
                   for m in lms):
            mins.append(lm)
    return frozenset(mins)


def _random_poly(rng, ring, vs, max_degree):
    terms = {}
    for _ in range(rng.randrange(1, 4)):
        e = tuple(rng.randrange(max_degree + 1) for _ in vs.names)
        if sum(e) > max_degree:
            continue
        c = ring.from_int(rng.randrange(1, 5))
        terms[e] = c
    return MultiPoly(ring, vs, terms)


def test_oracle_equivalence_f5():
    rng = random.Random(20240817)
    F5 = Fp(5)
    order = Grevlex()
    checked = 0
    while checked < 120:
        ngens = rng.randrange(1, 3)
        gens = [_random_poly(rng, F5, VS, 3) for _ in range(ngens)]
        gens = [g for g in gens if not g.is_zero()]
        if not gens:
            continue
        # normal form agreement on a random probe polynomial
        probe = _random_poly(rng, F5, VS, 3)
        assert normal_form(probe, gens, order) == \
            _oracle_normal_form(probe, gens, order)
        # identical staircases (the reduced basis is unique, the oracle's
        # basis is not reduced, so compare minimal leading monomials)
        gb = buchberger(gens, order)
        oracle = _oracle_groebner(list(gens), order)
        assert gb.leading_monomials == _staircase(oracle, order)
        for g in gens:
            assert gb.contains(g)
            assert _oracle_normal_form(g, oracle, order).is_zero()
        checked += 1


def test_elimination_order_agrees_with_lex_intersection():
    # intersection ideal computed two ways on a small example
    vs = VarSet(("t", "x"))
    gens = [parse_poly("x - t^2", QQ, vs)]
    out = eliminate(gens, {"t"})
    assert out == []  # no relation purely in x
