"""Buchberger's algorithm, normal forms, elimination, dimension, radicals.

Coefficients must lie in a field.  Pair selection uses the normal strategy
(minimal lcm degree) with the coprime-lcm and chain criteria; reduction is
fully deterministic (largest reducible term first, first matching divisor
in listed order), so bases are bit-stable.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass
from itertools import combinations
from typing import List, Optional, Sequence, Set, Tuple

from .poly import (Elimination, Grevlex, MonomialOrder, MultiPoly, VarSet,
                   _exp_add, _exp_divides, _exp_lcm, _exp_sub)
from .rings import BaseRing


class NonFieldCoefficients(ValueError):
    pass


def _require_field(ring: BaseRing):
    if not ring.is_field():
        raise NonFieldCoefficients(
            f"Groebner engine needs field coefficients, got {ring.tag()}")


def _negate_key(k):
    if isinstance(k, tuple):
        return tuple(_negate_key(x) for x in k)
    return -k


def normal_form(f: MultiPoly, G: Sequence[MultiPoly], order: MonomialOrder) -> MultiPoly:
    """Remainder of f modulo G; no term of the result is divisible by any LM(g)."""
    _require_field(f.ring)
    ring = f.ring
    gens = [(g.leading(order)[0], g) for g in G if not g.is_zero()]
    if not gens:
        return f
    pending = dict(f.terms)
    result = {}
    heap = [(_negate_key(order.key(e))) for e in pending]
    heap = [(k, e) for k, e in zip(heap, pending)]
    heapq.heapify(heap)
    while heap:
        _, exp = heapq.heappop(heap)
        c = pending.pop(exp, None)
        if c is None or ring.is_zero(c):
            continue
        for lm, g in gens:
            if _exp_divides(lm, exp):
                shift = _exp_sub(exp, lm)
                factor = ring.mul(c, ring.inv(g.terms[lm]))
                for e2, c2 in g.terms.items():
                    e3 = _exp_add(e2, shift)
                    if e3 == exp:
                        continue
                    prev = pending.get(e3)
                    if prev is None:
                        if e3 not in pending:
                            heapq.heappush(heap, (_negate_key(order.key(e3)), e3))
                        prev = ring.zero()
                    val = ring.sub(prev, ring.mul(factor, c2))
                    if ring.is_zero(val):
                        pending.pop(e3, None)
                    else:
                        pending[e3] = val
                break
        else:
            result[exp] = c
    return MultiPoly(ring, f.varset, result)


def s_polynomial(f: MultiPoly, g: MultiPoly, order: MonomialOrder) -> MultiPoly:
    ring = f.ring
    lf, cf = f.leading(order)
    lg, cg = g.leading(order)
    lcm = _exp_lcm(lf, lg)
    a = f.term_mul(_exp_sub(lcm, lf), ring.inv(cf))
    b = g.term_mul(_exp_sub(lcm, lg), ring.inv(cg))
    return a - b


@dataclass(frozen=True)
class GroebnerBasis:
    generators: Tuple[MultiPoly, ...]
    order: MonomialOrder
    leading_monomials: frozenset
    ring: BaseRing
    varset: VarSet

    def contains_one(self) -> bool:
        return any(g.is_constant() and not g.is_zero() for g in self.generators)

    def reduce(self, f: MultiPoly) -> MultiPoly:
        return normal_form(f, self.generators, self.order)

    def contains(self, f: MultiPoly) -> bool:
        return self.reduce(f).is_zero()


def _primitive(f: MultiPoly, order: MonomialOrder) -> MultiPoly:
    """Associate of f with tame coefficients.

    Over QQ: integer coefficients with content 1 and positive leading
    coefficient (keeps Fractions from blowing up mid-run and makes the
    logged leading coefficients the exact integers inverted during
    reduction).  Over other fields: monic.
    """
    ring = f.ring
    if ring.tag() != "QQ":
        return f.monic(order)
    from fractions import Fraction
    from math import gcd
    den = 1
    for c in f.terms.values():
        den = den * c.denominator // gcd(den, c.denominator)
    num = 0
    for c in f.terms.values():
        num = gcd(num, abs(c.numerator * (den // c.denominator)))
    scale = Fraction(den, num)
    if f.leading(order)[1] < 0:
        scale = -scale
    return f.map_coefficients(lambda c: c * scale, ring)


def _clear_denominators(f: MultiPoly) -> dict:
    """Common-denominator clearing of a QQ polynomial into an int-term dict."""
    from math import gcd
    den = 1
    for c in f.terms.values():
        den = den * c.denominator // gcd(den, c.denominator)
    return {e: int(c * den) for e, c in f.terms.items()}


def _int_primitive(terms: dict, lead_exp) -> dict:
    from math import gcd
    num = 0
    for v in terms.values():
        num = gcd(num, abs(v))
    if num == 0:
        return terms
    if terms[lead_exp] < 0:
        num = -num
    if num != 1:
        terms = {e: v // num for e, v in terms.items()}
    return terms


def _div_mask(exp) -> int:
    """Two bits per variable (set at exponent >= 1 and >= 2); if a's mask
    has a bit outside b's mask then a cannot divide b."""
    m = 0
    bit = 1
    for e in exp:
        if e:
            m |= bit
            if e > 1:
                m |= bit << 1
        bit <<= 2
    return m


def _int_normal_form(terms: dict, gens: list, order: MonomialOrder,
                     nkey: Optional[dict] = None) -> dict:
    """Pseudo-remainder with integer arithmetic; result is the true normal
    form times a positive rational, which downstream primitivization removes.

    gens entries are (leading exponent, leading coefficient, non-leading
    term items, divisibility mask).  Reduction order matches normal_form
    exactly.  nkey caches negated order keys across calls.
    """
    from math import gcd
    from operator import le
    if nkey is None:
        nkey = {}
    okey = order.key

    def heapkey(e):
        k = nkey.get(e)
        if k is None:
            k = _negate_key(okey(e))
            nkey[e] = k
        return k

    pending = dict(terms)
    result = {}
    heap = [(heapkey(e), e) for e in pending]
    heapq.heapify(heap)
    swell = 1
    while heap:
        if swell.bit_length() > 256:
            # strip accumulated content so integers stay small
            g = 0
            for v in pending.values():
                g = gcd(g, v)
            for v in result.values():
                g = gcd(g, v)
            if g > 1:
                pending = {e: v // g for e, v in pending.items()}
                result = {e: v // g for e, v in result.items()}
            swell = 1
        _, exp = heapq.heappop(heap)
        c = pending.pop(exp, None)
        if not c:
            continue
        blocked = ~_div_mask(exp)
        for lm, lc, tail, gmask in gens:
            if gmask & blocked or not all(map(le, lm, exp)):
                continue
            d = gcd(c, lc)
            mult = abs(lc // d)
            if mult != 1:
                for e2 in pending:
                    pending[e2] *= mult
                for e2 in result:
                    result[e2] *= mult
                c *= mult
                swell *= mult
            factor = c // lc
            for e2, c2 in tail:
                e3 = _exp_add(e2, exp)
                prev = pending.get(e3)
                if prev is None:
                    heapq.heappush(heap, (heapkey(e3), e3))
                    prev = 0
                val = prev - factor * c2
                if val:
                    pending[e3] = val
                else:
                    pending.pop(e3, None)
            break
        else:
            result[exp] = c
    return result


def _int_gen_entry(terms: dict, lm) -> tuple:
    tail = [(_exp_sub(e, lm), c) for e, c in terms.items() if e != lm]
    return (lm, terms[lm], tail, _div_mask(lm))


def _buchberger_qq(inputs: List[MultiPoly], order: MonomialOrder,
                   new_poly_log: Optional[list]) -> GroebnerBasis:
    """Integer-arithmetic core of buchberger for rational coefficients."""
    from fractions import Fraction
    from math import gcd
    ring, vs = inputs[0].ring, inputs[0].varset
    kcache: dict = {}
    nkcache: dict = {}
    okey = order.key

    def keyof(e):
        k = kcache.get(e)
        if k is None:
            k = okey(e)
            kcache[e] = k
        return k

    def lead(terms):
        return max(terms, key=keyof)

    raw = [_clear_denominators(f) for f in inputs]
    raw.sort(key=lambda t: keyof(lead(t)))

    def to_poly(terms):
        return MultiPoly(ring, vs, {e: Fraction(c) for e, c in terms.items()})

    # the log keeps the content-unstripped forms: every integer divided out
    # during the run divides one of their leading coefficients
    if new_poly_log is not None:
        new_poly_log.extend(to_poly(t) for t in raw)
    basis = [_int_primitive(t, lead(t)) for t in raw]
    lms = [lead(t) for t in basis]
    gens = [_int_gen_entry(t, lm) for t, lm in zip(basis, lms)]
    lmmasks = [_div_mask(lm) for lm in lms]

    heap: List[tuple] = []
    pending_pairs: Set[Tuple[int, int]] = set()
    done: Set[Tuple[int, int]] = set()

    def push_pair(i, j):
        lcm = _exp_lcm(lms[i], lms[j])
        heapq.heappush(heap, (sum(lcm), keyof(lcm), i, j))
        pending_pairs.add((i, j))

    for i in range(len(basis)):
        for j in range(i + 1, len(basis)):
            push_pair(i, j)
    while heap:
        _, _, i, j = heapq.heappop(heap)
        pending_pairs.discard((i, j))
        done.add((i, j))
        lcm = _exp_lcm(lms[i], lms[j])
        if lcm == _exp_add(lms[i], lms[j]):
            continue
        skip = False
        blocked = ~_div_mask(lcm)
        for k in range(len(basis)):
            if k in (i, j) or lmmasks[k] & blocked or not _exp_divides(lms[k], lcm):
                continue
            a = (min(i, k), max(i, k))
            b = (min(j, k), max(j, k))
            if a in done and a not in pending_pairs and b in done and b not in pending_pairs:
                skip = True
                break
        if skip:
            continue
        # fraction-free S-polynomial
        ci, cj = basis[i][lms[i]], basis[j][lms[j]]
        d = gcd(ci, cj)
        si, sj = _exp_sub(lcm, lms[i]), _exp_sub(lcm, lms[j])
        spoly: dict = {}
        for e, c in basis[i].items():
            e2 = _exp_add(e, si)
            spoly[e2] = spoly.get(e2, 0) + (cj // d) * c
        for e, c in basis[j].items():
            e2 = _exp_add(e, sj)
            v = spoly.get(e2, 0) - (ci // d) * c
            if v:
                spoly[e2] = v
            else:
                spoly.pop(e2, None)
        spoly = {e: c for e, c in spoly.items() if c}
        if not spoly:
            continue
        r = _int_normal_form(spoly, gens, order, nkcache)
        if not r:
            continue
        if new_poly_log is not None:
            new_poly_log.append(to_poly(r))
        r = _int_primitive(r, lead(r))
        basis.append(r)
        lm = lead(r)
        lms.append(lm)
        gens.append(_int_gen_entry(r, lm))
        lmmasks.append(_div_mask(lm))
        n = len(basis) - 1
        for k in range(n):
            push_pair(k, n)

    # minimalize and inter-reduce with the same integer kernel
    keep = []
    for i, lm in enumerate(lms):
        if any(j != i and _exp_divides(lms[j], lm) and
               (lms[j] != lm or j < i) for j in range(len(basis))):
            continue
        keep.append(i)
    minimal = [basis[i] for i in keep]
    all_entries = [_int_gen_entry(o, lead(o)) for o in minimal]
    reduced = []
    for i, t in enumerate(minimal):
        entries = all_entries[:i] + all_entries[i + 1:]
        if entries:
            t = _int_normal_form(t, entries, order, nkcache)
        if t:
            if new_poly_log is not None:
                new_poly_log.append(to_poly(t))
            reduced.append(_int_primitive(t, lead(t)))
    polys = [to_poly(t).monic(order) for t in reduced]
    polys.sort(key=lambda f: order.key(f.leading(order)[0]))
    return GroebnerBasis(tuple(polys), order,
                         frozenset(f.leading(order)[0] for f in polys), ring, vs)


def buchberger(F: Sequence[MultiPoly], order: MonomialOrder,
               new_poly_log: Optional[list] = None) -> GroebnerBasis:
    """Reduced Groebner basis of <F>.  All-zero input yields the empty basis.

    Pair selection is the normal strategy (minimal lcm degree, then the
    monomial order on the lcm) via a heap, with the coprime-lcm and chain
    criteria.  When new_poly_log is given, every polynomial entering the
    intermediate basis (inputs included, integer-cleared over QQ) is
    appended to it; this supports denominator tracking for prime
    specialisation.
    """
    inputs = [f for f in F if not f.is_zero()]
    some = F[0] if F else None
    if not inputs:
        if some is None:
            raise ValueError("buchberger needs at least one polynomial")
        return GroebnerBasis((), order, frozenset(), some.ring, some.varset)
    ring, vs = inputs[0].ring, inputs[0].varset
    _require_field(ring)
    if ring.tag() == "QQ":
        return _buchberger_qq(inputs, order, new_poly_log)
    basis: List[MultiPoly] = sorted(
        (_primitive(f, order) for f in inputs),
        key=lambda f: order.key(f.leading(order)[0]))
    if new_poly_log is not None:
        new_poly_log.extend(basis)
    lms = [g.leading(order)[0] for g in basis]

    heap: List[tuple] = []
    pending: Set[Tuple[int, int]] = set()
    done: Set[Tuple[int, int]] = set()

    def push_pair(i, j):
        lcm = _exp_lcm(lms[i], lms[j])
        heapq.heappush(heap, (sum(lcm), order.key(lcm), i, j))
        pending.add((i, j))

    for i in range(len(basis)):
        for j in range(i + 1, len(basis)):
            push_pair(i, j)
    while heap:
        _, _, i, j = heapq.heappop(heap)
        pending.discard((i, j))
        done.add((i, j))
        lcm = _exp_lcm(lms[i], lms[j])
        if lcm == _exp_add(lms[i], lms[j]):
            continue  # coprime leading monomials
        # chain criterion: some k with LM(k) | lcm and both pairs handled
        skip = False
        for k in range(len(basis)):
            if k in (i, j) or not _exp_divides(lms[k], lcm):
                continue
            a = (min(i, k), max(i, k))
            b = (min(j, k), max(j, k))
            if a in done and a not in pending and b in done and b not in pending:
                skip = True
                break
        if skip:
            continue
        r = normal_form(s_polynomial(basis[i], basis[j], order), basis, order)
        if r.is_zero():
            continue
        r = _primitive(r, order)
        if new_poly_log is not None:
            new_poly_log.append(r)
        basis.append(r)
        lms.append(r.leading(order)[0])
        n = len(basis) - 1
        for k in range(n):
            push_pair(k, n)
    return _reduce_basis(basis, order, ring, vs)


def _reduce_basis(basis: List[MultiPoly], order: MonomialOrder,
                  ring: BaseRing, vs: VarSet) -> GroebnerBasis:
    lms = [g.leading(order)[0] for g in basis]
    keep = []
    for i, lm in enumerate(lms):
        if any(j != i and _exp_divides(lms[j], lm) and
               (lms[j] != lm or j < i) for j in range(len(basis))):
            continue
        keep.append(i)
    minimal = [basis[i] for i in keep]
    reduced = []
    for i, g in enumerate(minimal):
        others = minimal[:i] + minimal[i + 1:]
        r = normal_form(g, others, order) if others else g
        if not r.is_zero():
            reduced.append(r.monic(order))
    reduced.sort(key=lambda f: order.key(f.leading(order)[0]))
    return GroebnerBasis(tuple(reduced), order,
                         frozenset(g.leading(order)[0] for g in reduced), ring, vs)


def verify_buchberger_criterion(G: Sequence[MultiPoly], order: MonomialOrder) -> bool:
    """Every S-polynomial of pairs reduces to zero modulo G."""
    gens = [g for g in G if not g.is_zero()]
    for f, g in combinations(gens, 2):
        if not normal_form(s_polynomial(f, g, order), gens, order).is_zero():
            return False
    return True


def ideal_dimension(G: GroebnerBasis) -> int:
    """Krull dimension of the affine variety of <G> via the staircase."""
    if G.contains_one():
        return -1
    n = len(G.varset)
    if not G.generators:
        return n
    supports = [frozenset(i for i, e in enumerate(lm) if e)
                for lm in G.leading_monomials]
    for size in range(n, -1, -1):
        for subset in combinations(range(n), size):
            s = set(subset)
            if not any(sup <= s for sup in supports):
                return size
    return -1


def eliminate(G: Sequence[MultiPoly], drop: Set[str],
              order_hint: Optional[MonomialOrder] = None) -> List[MultiPoly]:
    """Generators of <G> intersected with the subring without the dropped vars."""
    gens = [g for g in G if not g.is_zero()]
    if not gens:
        return []
    vs = gens[0].varset
    unknown = drop - set(vs.names)
    if unknown:
        raise ValueError(f"cannot drop undeclared variables {sorted(unknown)}")
    front = [n for n in vs.names if n in drop]
    back = [n for n in vs.names if n not in drop]
    block_vs = VarSet(tuple(front + back),
                      tuple(vs.weights[vs.index(n)] for n in front + back))
    order = order_hint if isinstance(order_hint, Elimination) else Elimination(len(front))
    if not front:
        order = Grevlex()
    gb = buchberger([g.rename(block_vs) for g in gens], order)
    kept_vs = VarSet(tuple(back), tuple(vs.weights[vs.index(n)] for n in back))
    out = []
    for g in gb.generators:
        if not (g.variables_used() & drop):
            out.append(g.restrict(kept_vs))
    return out


def radical_membership(f: MultiPoly, G: Sequence[MultiPoly]) -> bool:
    """f in rad<G>, by the Rabinowitsch trick: 1 in <G, 1 - z*f>."""
    gens = [g for g in G if not g.is_zero()]
    vs = f.varset
    if f.is_zero():
        return True
    zname = "z_rad"
    while zname in vs.names:
        zname += "_"
    big_vs = VarSet(vs.names + (zname,), vs.weights + (1,))
    ring = f.ring
    one = MultiPoly.constant(ring, big_vs, ring.one())
    z = MultiPoly.variable(ring, big_vs, zname)
    system = [g.rename(big_vs) for g in gens] + [one - z * f.rename(big_vs)]
    gb = buchberger(system, Grevlex())
    return gb.contains_one()
