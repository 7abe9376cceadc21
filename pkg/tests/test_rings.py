"""Exact coefficient rings: arithmetic, tags, scalar-field structure."""

from fractions import Fraction

import pytest

from pfcalc.rings import (Fp, NotAUnit, QQ, QuotientRing, ZZ,
                          fraction_field_reduction, parse_quotient_payload,
                          ring_from_tag)


def test_integer_arithmetic():
    assert ZZ.add(2, 3) == 5
    assert ZZ.mul(-4, 6) == -24
    assert ZZ.sub(1, 7) == -6
    assert not ZZ.is_field()
    assert ZZ.characteristic() == 0
    assert ZZ.tag() == "ZZ"


def test_integer_units():
    assert ZZ.is_unit(-1)
    assert not ZZ.is_unit(2)
    with pytest.raises(NotAUnit):
        ZZ.inv(2)


def test_rational_field():
    half = QQ.coerce(Fraction(1, 2))
    assert QQ.mul(half, QQ.from_int(4)) == Fraction(2)
    assert QQ.inv(Fraction(2, 3)) == Fraction(3, 2)
    assert QQ.is_field()
    assert QQ.tag() == "QQ"


def test_prime_field():
    F7 = Fp(7)
    assert F7.add(5, 4) == 2
    assert F7.mul(3, 5) == 1
    assert F7.inv(3) == 5
    assert F7.characteristic() == 7
    assert F7.tag() == "Fp(7)"


def test_prime_field_rejects_composite():
    with pytest.raises(ValueError):
        Fp(6)


def test_quotient_ring_dual_numbers():
    R = ring_from_tag("QQ[t]/(t^2)")
    t = parse_quotient_payload(R, "t")
    assert R.mul(t, t) == R.zero()
    assert not R.is_field()
    # 1 + t is a unit with inverse 1 - t
    u = R.add(R.one(), t)
    v = R.inv(u)
    assert R.mul(u, v) == R.one()


def test_quotient_field_f4():
    # F_2[t]/(t^2+t+1) is the field with four elements
    R = ring_from_tag("Fp(2)[t]/(t^2+t+1)")
    assert R.is_field()
    t = parse_quotient_payload(R, "t")
    assert R.mul(t, R.inv(t)) == R.one()
    # multiplicative order of t is 3
    t3 = R.mul(t, R.mul(t, t))
    assert t3 == R.one()


def test_tag_round_trip():
    # tags print a normalized modulus, so check the parse/print fixed point
    for tag in ("ZZ", "QQ", "Fp(5)", "QQ[t]/(t^2)", "Fp(2)[t]/(t^2+t+1)"):
        once = ring_from_tag(tag).tag()
        assert ring_from_tag(once).tag() == once


def test_scalar_field_of_zz_is_qq():
    assert ZZ.scalar_field().tag() == "QQ"
    assert ZZ.field_basis() == (1,)


def test_scalar_field_of_quotient():
    R = ring_from_tag("QQ[t]/(t^2)")
    k = R.scalar_field()
    assert k.tag() == "QQ"
    basis = R.field_basis()
    assert len(basis) == 2
    t = parse_quotient_payload(R, "t")
    coords = R.field_coords(R.add(R.from_int(3), t))
    assert list(coords) == [Fraction(3), Fraction(1)]


def test_scale_by_scalar():
    R = ring_from_tag("Fp(3)[t]/(t^2)")
    t = parse_quotient_payload(R, "t")
    assert R.scale_by_scalar(t, 2) == R.mul(R.from_int(2), t)


def test_fraction_field_reduction():
    assert fraction_field_reduction(ZZ, 0).tag() == "QQ"
    assert fraction_field_reduction(ZZ, 5).tag() == "Fp(5)"
    with pytest.raises(ValueError):
        fraction_field_reduction(ZZ, 4)
