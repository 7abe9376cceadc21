"""Schur algebras: dimensions, associativity, evaluation maps, spinning."""

import random
from math import comb

import pytest

from pfcalc.functors import Sym, evaluate
from pfcalc.rings import Fp, QQ, ZZ
from pfcalc.schur import (SchurAlgebra, base_change_module, basis_indices,
                          module_of_functor, spin)


def test_basis_count():
    for n, d in ((1, 3), (2, 2), (2, 3)):
        algebra = SchurAlgebra(n, d, QQ)
        assert len(algebra.basis) == algebra.dimension() == comb(n * n + d, d)


def test_basis_indices_bound():
    for alpha in basis_indices(2, 2):
        assert sum(alpha) <= 2
        assert len(alpha) == 4


def test_identity_two_sided():
    algebra = SchurAlgebra(2, 2, QQ)
    e = algebra.identity_element()
    for alpha in algebra.basis:
        s = algebra.element({alpha: QQ.one()})
        assert e * s == s
        assert s * e == s


def test_full_associativity_n1():
    algebra = SchurAlgebra(1, 3, QQ)
    basis = [algebra.element({a: QQ.one()}) for a in algebra.basis]
    for x in basis:
        for y in basis:
            for z in basis:
                assert (x * y) * z == x * (y * z)


def test_random_associativity_n2():
    rng = random.Random(7)
    for d in (2, 3):
        algebra = SchurAlgebra(2, d, QQ)
        basis = algebra.basis
        for _ in range(60):
            x, y, z = (algebra.element({rng.choice(basis): QQ.from_int(
                rng.randrange(1, 5))}) for _ in range(3))
            assert (x * y) * z == x * (y * z)


def test_evaluation_embed_multiplicative():
    rng = random.Random(11)
    F5 = Fp(5)
    algebra = SchurAlgebra(2, 2, F5)
    for _ in range(25):
        phi = [[rng.randrange(5) for _ in range(2)] for _ in range(2)]
        psi = [[rng.randrange(5) for _ in range(2)] for _ in range(2)]
        prod = [[sum(phi[i][k] * psi[k][j] for k in range(2)) % 5
                 for j in range(2)] for i in range(2)]
        assert algebra.evaluation_embed(phi) * algebra.evaluation_embed(psi) \
            == algebra.evaluation_embed(prod)


def test_element_rejects_out_of_range_index():
    algebra = SchurAlgebra(1, 1, QQ)
    with pytest.raises(ValueError):
        algebra.element({(5,): QQ.one()})


def test_module_of_functor_action_consistent_with_law():
    # acting by ev_phi on the module recovers the law matrix at phi
    ev = evaluate(Sym(2), 2)
    module = module_of_functor(ev, 2)
    algebra = module.algebra
    phi = [[1, 2], [1, 1]]
    acted = module.act(algebra.evaluation_embed(phi))
    assert acted == ev.law_at(phi)


def test_module_of_functor_degree_bound():
    ev = evaluate(Sym(3), 2)
    with pytest.raises(ValueError):
        module_of_functor(ev, 2)


def test_frobenius_subfunctor_spin():
    for p in (2, 3):
        ev = evaluate(Sym(p), 2)
        module = base_change_module(module_of_functor(ev, p), p)
        size = module.rank
        ring = module.algebra.ring
        # basis of S^p(F_p^2) is x^p, x^(p-1)y, ..., y^p (reverse sorted)
        xp = [ring.one()] + [ring.zero()] * (size - 1)
        span = spin(module, xp)
        assert len(span) == 2
        # the span is exactly the p-th power monomials x^p and y^p
        for v in span:
            for i in range(size):
                exp_is_power = i in (0, size - 1)
                if not exp_is_power:
                    assert ring.is_zero(v[i])


def test_non_power_vector_spins_full_module():
    p = 3
    ev = evaluate(Sym(p), 2)
    module = base_change_module(module_of_functor(ev, p), p)
    ring = module.algebra.ring
    v = [ring.one() for _ in range(module.rank)]
    span = spin(module, v)
    assert len(span) == module.rank


def test_spin_requires_field():
    ev = evaluate(Sym(2), 2)
    module = module_of_functor(ev, 2)  # over ZZ
    with pytest.raises(ValueError):
        spin(module, [1, 0, 0])


def test_base_change_to_qq():
    ev = evaluate(Sym(2), 2)
    module = base_change_module(module_of_functor(ev, 2), 0)
    assert module.algebra.ring.tag() == "QQ"
