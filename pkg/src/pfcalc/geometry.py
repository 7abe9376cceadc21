"""Closed subsets of functor spaces at a fixed rank.

Image closures of polynomial transformations via graph-ideal elimination,
per-prime dimensions, good-prime detection by Groebner specialization,
vanishing transfer, equivariance checking on a generating set of matrix
substitutions, and the directional Taylor expansion.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product as iproduct
from math import factorial, gcd
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from .functors import DirectSum, FunctorExpr, Id, Sym, evaluate, homogeneous_parts
from .groebner import (GroebnerBasis, buchberger, eliminate, ideal_dimension,
                       normal_form, radical_membership,
                       verify_buchberger_criterion)
from .poly import Grevlex, MultiPoly, VarSet
from .rings import ZZ, BaseRing, Fp, QQ, fraction_field_reduction


class SizeGuardExceeded(RuntimeError):
    def __init__(self, message: str, **measured):
        super().__init__(message + "; measured " +
                         ", ".join(f"{k}={v}" for k, v in sorted(measured.items())))
        self.measured = measured


@dataclass(frozen=True)
class SizeGuards:
    max_variables: int = 40
    max_basis: int = 5000
    max_degree: int = 8


DEFAULT_GUARDS = SizeGuards()


@dataclass(frozen=True)
class PolyTransformation:
    """A rank-uniform polynomial transformation between functor spaces.

    rule(n, ring) must return (source varset, target coordinate polys), the
    target coordinates written in the source coordinates at rank n.
    """
    source: FunctorExpr
    target: FunctorExpr
    name: str
    rule: Callable[[int, BaseRing], Tuple[VarSet, List[MultiPoly]]]


def _sym_basis(n: int, d: int) -> List[Tuple[int, ...]]:
    from .functors import _sym_basis as sb
    return sb(n, d)


def sum_of_powers(num_forms: int, power: int, form_degree: int = 1) -> PolyTransformation:
    """(q_1, ..., q_m) |-> q_1^k + ... + q_m^k for degree-g forms q_j.

    The source is m copies of Sym(g) (Id when g = 1) and the target is
    Sym(g * k); coordinates are coefficients in the monomial bases.
    """
    form = Id() if form_degree == 1 else Sym(form_degree)
    source = DirectSum(tuple(form for _ in range(num_forms)))
    target = Sym(power * form_degree)

    def rule(n: int, ring: BaseRing):
        fbasis = _sym_basis(n, form_degree)
        names = tuple(f"v{j + 1}_{i + 1}"
                      for j in range(num_forms) for i in range(len(fbasis)))
        vs = VarSet(names)
        tbasis = _sym_basis(n, power * form_degree)
        acc = {exp: MultiPoly.zero(ring, vs) for exp in tbasis}
        for j in range(num_forms):
            # q_j as x-exponent -> coefficient polynomial in the v variables
            q = {}
            for i, exp in enumerate(fbasis):
                q[exp] = MultiPoly.variable(ring, vs, names[j * len(fbasis) + i])
            qk = {tuple([0] * n): MultiPoly.constant(ring, vs, ring.one())}
            for _ in range(power):
                nxt: Dict[tuple, MultiPoly] = {}
                for e1, c1 in qk.items():
                    for e2, c2 in q.items():
                        e = tuple(a + b for a, b in zip(e1, e2))
                        prod = c1 * c2
                        nxt[e] = nxt[e] + prod if e in nxt else prod
                qk = nxt
            for e, c in qk.items():
                acc[e] = acc[e] + c
        return vs, [acc[exp] for exp in tbasis]

    label = f"sum-of-{num_forms}-{power}th-powers"
    if form_degree > 1:
        label += f"-of-degree-{form_degree}-forms"
    return PolyTransformation(source, target, label, rule)


cube_sum = sum_of_powers(2, 3)
four_squares = sum_of_powers(4, 2, form_degree=2)


@dataclass(frozen=True)
class ClosedSubsetAtRank:
    functor: FunctorExpr
    rank: int
    ring: BaseRing
    varset: VarSet
    generators: Tuple[MultiPoly, ...]
    gb: GroebnerBasis


def target_varset(target: FunctorExpr, n: int) -> VarSet:
    """y-variables for the coordinates of P(K^n), weighted by degree."""
    size = evaluate(target, n).module.ngens
    parts = homogeneous_parts(target, n)
    weights = [1] * size
    for d, idxs in parts.items():
        for i in idxs:
            weights[i] = max(d, 1)
    return VarSet(tuple(f"y{i + 1}" for i in range(size)), tuple(weights))


def closed_subset(target: FunctorExpr, n: int, ring: BaseRing,
                  generators: Sequence[MultiPoly]) -> ClosedSubsetAtRank:
    gens = tuple(generators)
    vs = gens[0].varset if gens else target_varset(target, n)
    gb = buchberger(list(gens), Grevlex()) if gens else \
        GroebnerBasis((), Grevlex(), frozenset(), ring, vs)
    return ClosedSubsetAtRank(target, n, ring, vs, gens, gb)


def image_closure(alpha: PolyTransformation, n: int, ring: BaseRing,
                  guards: SizeGuards = DEFAULT_GUARDS) -> ClosedSubsetAtRank:
    """Zariski closure of the image of alpha at rank n, over QQ or F_p."""
    if not ring.is_field():
        raise ValueError(f"image closure needs a field, got {ring.tag()}")
    src_vs, coords = alpha.rule(n, ring)
    y_vs = target_varset(alpha.target, n)
    if len(coords) != len(y_vs):
        raise AssertionError("rule output does not match the target functor rank")
    total_vars = len(src_vs) + len(y_vs)
    if total_vars > guards.max_variables:
        raise SizeGuardExceeded("too many variables for the graph ideal",
                                variables=total_vars, limit=guards.max_variables)
    big_vs = VarSet(src_vs.names + y_vs.names,
                    src_vs.weights + y_vs.weights)
    gens = []
    for yname, coord in zip(y_vs.names, coords):
        gens.append(MultiPoly.variable(ring, big_vs, yname) - coord.rename(big_vs))
    eliminated = eliminate(gens, set(src_vs.names))
    if len(eliminated) > guards.max_basis:
        raise SizeGuardExceeded("eliminated basis too large",
                                basis_size=len(eliminated), limit=guards.max_basis)
    kept = [g.restrict(y_vs) if g.varset != y_vs else g for g in eliminated]
    return closed_subset(alpha.target, n, ring, kept)


def dimension_per_prime(alpha: PolyTransformation, n: int,
                        primes: Sequence[int],
                        guards: SizeGuards = DEFAULT_GUARDS) -> Dict[int, int]:
    """Dimension of the image closure over QQ (key 0) and each F_p."""
    out = {}
    for p in [0] + [q for q in primes if q != 0]:
        ring = fraction_field_reduction(ZZ, p)
        subset = image_closure(alpha, n, ring, guards)
        out[p] = ideal_dimension(subset.gb)
    return out


@dataclass(frozen=True)
class PrimeVerdict:
    prime: int
    good: bool
    dimension: int
    staircase_matches: bool
    recomputed: bool


@dataclass(frozen=True)
class SpecializationReport:
    generic_basis: Tuple[MultiPoly, ...]   # integer-cleared, over ZZ payloads in QQ
    generic_dimension: int
    r: int
    verdicts: Tuple[PrimeVerdict, ...]


def _clear_to_integers(f: MultiPoly) -> MultiPoly:
    den = 1
    for c in f.terms.values():
        den = den * c.denominator // gcd(den, c.denominator)
    num = 0
    for c in f.terms.values():
        num = gcd(num, abs(int(c * den)))
    return f.map_coefficients(lambda c: c * Fraction(den, num), f.ring)


def _reduce_mod_p(f: MultiPoly, ring_p: BaseRing, vs: VarSet) -> MultiPoly:
    terms = {}
    for e, c in f.terms.items():
        if isinstance(c, Fraction):
            if c.denominator % ring_p.characteristic() == 0:
                raise ZeroDivisionError("denominator vanishes mod p")
            v = ring_p.mul(ring_p.from_int(c.numerator),
                           ring_p.inv(ring_p.from_int(c.denominator)))
        else:
            v = ring_p.from_int(c)
        if not ring_p.is_zero(v):
            terms[e] = v
    return MultiPoly(ring_p, vs, terms)


def good_primes(generators: Sequence[MultiPoly], primes: Sequence[int]) -> SpecializationReport:
    """Groebner specialization: which primes keep the generic staircase.

    r is the product of the leading coefficients of every integer-cleared
    polynomial met during the generic run (inputs, intermediate basis
    elements, and the final basis); primes dividing r are recomputed from
    scratch, the others are verified by reducing the generic basis mod p
    and checking Buchberger's criterion plus input membership.
    """
    if not generators:
        raise ValueError("good_primes needs at least one generator")
    ring = generators[0].ring
    if ring.tag() != "ZZ":
        raise ValueError(f"good_primes expects integral generators, got {ring.tag()}")
    vs = generators[0].varset
    q_gens = [g.map_coefficients(lambda c: Fraction(c), QQ) for g in generators]
    log: List[MultiPoly] = []
    gb = buchberger(q_gens, Grevlex(), new_poly_log=log)
    cleared = tuple(_clear_to_integers(g) for g in gb.generators)
    generic_dim = ideal_dimension(gb)
    order = Grevlex()
    r = 1
    for f in list(log) + list(cleared):
        lc = f.leading(order)[1]
        r *= abs(int(lc))

    verdicts = []
    for p in primes:
        ring_p = Fp(p)
        if r % p != 0:
            gens_p = [_reduce_mod_p(f, ring_p, vs) for f in cleared]
            crit = verify_buchberger_criterion(gens_p, order) if gens_p else True
            inputs_p = [_reduce_mod_p(g.map_coefficients(Fraction, QQ), ring_p, vs)
                        for g in generators]
            member = all(normal_form(f, gens_p, order).is_zero()
                         for f in inputs_p if not f.is_zero()) if gens_p else \
                all(f.is_zero() for f in inputs_p)
            stairs = frozenset(f.leading(order)[0] for f in gens_p if not f.is_zero())
            matches = crit and member and stairs == gb.leading_monomials
            if matches:
                gb_p = buchberger(gens_p, order) if gens_p else None
                dim_p = ideal_dimension(gb_p) if gb_p else len(vs)
                verdicts.append(PrimeVerdict(p, True, dim_p, True, False))
                continue
        gens_p = [f for f in (_reduce_mod_p(g.map_coefficients(Fraction, QQ),
                                            ring_p, vs) for g in generators)
                  if not f.is_zero()]
        if gens_p:
            gb_p = buchberger(gens_p, order)
            dim_p = ideal_dimension(gb_p)
            stairs_match = gb_p.leading_monomials == gb.leading_monomials
        else:
            dim_p = len(vs)
            stairs_match = not gb.generators
        verdicts.append(PrimeVerdict(p, stairs_match, dim_p, stairs_match, True))
    return SpecializationReport(cleared, generic_dim, r, tuple(verdicts))


def vanishing_transfer(f: MultiPoly, generators: Sequence[MultiPoly],
                       primes: Sequence[int]) -> Dict[int, bool]:
    """Does f vanish on V(I) over QQ and over each F_p?  Radical membership."""
    ring = f.ring
    if ring.tag() != "ZZ":
        raise ValueError("vanishing_transfer expects integral input")
    vs = f.varset
    to_q = lambda g: g.map_coefficients(lambda c: Fraction(c), QQ)
    out = {0: radical_membership(to_q(f), [to_q(g) for g in generators])}
    for p in primes:
        ring_p = Fp(p)
        f_p = _reduce_mod_p(to_q(f), ring_p, vs)
        gens_p = [g2 for g2 in (_reduce_mod_p(to_q(g), ring_p, vs)
                                for g in generators) if not g2.is_zero()]
        out[p] = True if f_p.is_zero() else radical_membership(f_p, gens_p)
    return out


def default_generator_matrices(n: int, ring: BaseRing) -> List[List[List[int]]]:
    """Transpositions, transvections, one scaling per variable, diagonal idempotents."""
    mats = []

    def ident():
        return [[1 if i == j else 0 for j in range(n)] for i in range(n)]

    for i in range(n):
        for j in range(i + 1, n):
            m = ident()
            m[i][i] = m[j][j] = 0
            m[i][j] = m[j][i] = 1
            mats.append(m)
    for i in range(n):
        for j in range(n):
            if i != j:
                m = ident()
                m[i][j] = 1
                mats.append(m)
    # a non-identity unit scaling when the field has one
    char = ring.characteristic()
    if char != 2:
        for i in range(n):
            m = ident()
            m[i][i] = 2
            mats.append(m)
    for bits in iproduct((0, 1), repeat=n):
        if all(bits):
            continue
        m = [[bits[i] if i == j else 0 for j in range(n)] for i in range(n)]
        mats.append(m)
    return mats


def equivariance_check(subset: ClosedSubsetAtRank,
                       matrices: Optional[Sequence[Sequence[Sequence[int]]]] = None) -> bool:
    """Stability of the ideal under the induced action of the generator matrices."""
    ring = subset.ring
    n = subset.rank
    if matrices is None:
        matrices = default_generator_matrices(n, ring)
    if not subset.generators:
        return True
    ev = evaluate(subset.functor, n)
    vs = subset.varset
    yvars = [MultiPoly.variable(ring, vs, nm) for nm in vs.names]
    gens = list(subset.generators)
    for g in matrices:
        act = ev.law_at(g)   # integer entries; the functor lives over ZZ
        mapping = {}
        for i, nm in enumerate(vs.names):
            acc = MultiPoly.zero(ring, vs)
            for j in range(len(yvars)):
                c = ring.from_int(act[i][j])
                if not ring.is_zero(c):
                    acc = acc + yvars[j].map_coefficients(lambda x: ring.mul(c, x), ring)
            mapping[nm] = acc
        for f in gens:
            moved = f.substitute(mapping)
            if moved.is_zero():
                continue
            if not radical_membership(moved, gens):
                return False
    return True


class NoDependence(ValueError):
    pass


def taylor_directional(f: MultiPoly, m: int, p: int):
    """Lowest-order directional Taylor data of a homogeneous polynomial.

    Expands f(x_1 + t y_1, ..., x_m + t y_m, x_{m+1}, ...) and returns
    (e, [h_1..h_m]) where the t^q coefficient, q = p^e the smallest
    nonvanishing power, equals sum_i h_i(x) y_i^q.
    """
    ring = f.ring
    vs = f.varset
    degs = {f.varset.weighted_degree(e) for e in f.terms}
    if len(degs) > 1:
        raise ValueError("taylor_directional needs a homogeneous polynomial")
    if not any(e[i] for e in f.terms for i in range(m)):
        raise NoDependence(f"polynomial does not involve the first {m} variables")
    ynames = tuple(f"ydir{i + 1}" for i in range(m))
    big = VarSet(vs.names + ynames + ("tdir",),
                 vs.weights + (1,) * m + (1,))
    mapping = {}
    t = MultiPoly.variable(ring, big, "tdir")
    for i in range(m):
        mapping[vs.names[i]] = MultiPoly.variable(ring, big, vs.names[i]) + \
            t * MultiPoly.variable(ring, big, ynames[i])
    expanded = f.rename(big).substitute(mapping)
    t_idx = big.index("tdir")
    y_idx = [big.index(nm) for nm in ynames]
    buckets: Dict[int, Dict[tuple, object]] = {}
    for e, c in expanded.terms.items():
        buckets.setdefault(e[t_idx], {})[e] = c
    positive = sorted(q for q in buckets if q > 0)
    if not positive:
        raise NoDependence("expansion has no t-dependence")
    q = positive[0]
    if p == 0:
        if q != 1:
            raise AssertionError("vanishing first derivative in characteristic 0")
        e_exp = 0
    else:
        e_exp = 0
        qq = q
        while qq % p == 0:
            qq //= p
            e_exp += 1
        if qq != 1:
            raise AssertionError(f"lowest t-power {q} is not a power of {p}")
    hs = [MultiPoly.zero(ring, vs) for _ in range(m)]
    for e, c in buckets[q].items():
        ys = [(i, e[yi]) for i, yi in enumerate(y_idx) if e[yi]]
        if len(ys) != 1 or ys[0][1] != q:
            raise AssertionError("t^q coefficient is not of the form sum h_i y_i^q")
        i = ys[0][0]
        small = list(e[:len(vs)])
        hs[i] = hs[i] + MultiPoly(ring, vs, {tuple(small): c})
    return e_exp, hs
