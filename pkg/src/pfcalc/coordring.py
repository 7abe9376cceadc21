"""Coordinate rings of finitely presented modules in bounded degree.

A polynomial law M -> R on M = R^n / O is a polynomial in the generator
coordinates x_1..x_n that is invariant under translation by every element
of O.  Each graded piece is cut out by a linear system over the scalar
field of R; this module builds and solves that system, and provides the
law calculus (homogeneous and bihomogeneous parts, products, composition).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations_with_replacement
from math import gcd
from typing import Dict, List, Sequence, Tuple

from . import linalg
from .fpmod import FPModule
from .poly import MultiPoly, VarSet
from .rings import BaseRing


def _degree_monomials(nvars: int, d: int) -> List[Tuple[int, ...]]:
    """Exponent tuples of total degree d, in a fixed deterministic order."""
    if nvars == 0:
        return [()] if d == 0 else []
    out = []
    for combo in combinations_with_replacement(range(nvars), d):
        e = [0] * nvars
        for i in combo:
            e[i] += 1
        out.append(tuple(e))
    out.sort(reverse=True)
    return out


def _reduce_parameter_exponents(f: MultiPoly, param_idx: List[int], p: int) -> MultiPoly:
    """Apply a^p = a to the parameter variables (their values range over F_p)."""
    ring = f.ring
    out: Dict[tuple, object] = {}
    for e, c in f.terms.items():
        e2 = list(e)
        for i in param_idx:
            if e2[i] > 0:
                e2[i] = (e2[i] - 1) % (p - 1) + 1
        key = tuple(e2)
        prev = out.get(key)
        c2 = c if prev is None else ring.add(prev, c)
        if ring.is_zero(c2):
            out.pop(key, None)
        else:
            out[key] = c2
    return MultiPoly(ring, f.varset, out)


@dataclass(frozen=True)
class GradedPieceBasis:
    """Scalar-field basis of one graded piece of R[M].

    dimension counts over the scalar field k of R (the QQ-rank of the
    integer solution lattice when R = ZZ); generator_count is the size of
    a greedy R-module generating set inside that basis.
    """
    module: FPModule
    degree: int
    dimension: int
    basis: Tuple[MultiPoly, ...]
    generator_count: int


def _solve_invariance(module: FPModule, candidates: List[Tuple[Tuple[int, ...], int]],
                      x_vs: VarSet) -> Tuple[List[List], BaseRing]:
    """Kernel of the translation-invariance system on the given candidates.

    Candidates are pairs (x-exponent, index into R's field basis); the
    return value is a list of scalar-field coefficient vectors.
    """
    ring = module.ring
    k = ring.scalar_field()
    rbasis = ring.field_basis()
    n = module.ngens
    s = len(module.relations)
    pnames = tuple(f"a_{j + 1}_{l + 1}" for j in range(s) for l in range(len(rbasis)))
    big_vs = VarSet(x_vs.names + pnames, x_vs.weights + (1,) * len(pnames))
    param_idx = [big_vs.index(nm) for nm in pnames]

    shifts = {}
    for i in range(n):
        sh = MultiPoly.variable(ring, big_vs, x_vs.names[i])
        for j, u in enumerate(module.relations):
            if ring.is_zero(u[i]):
                continue
            for l, e in enumerate(rbasis):
                coeff = ring.mul(e, u[i])
                if ring.is_zero(coeff):
                    continue
                exp = [0] * len(big_vs)
                exp[param_idx[j * len(rbasis) + l]] = 1
                sh = sh + MultiPoly(ring, big_vs, {tuple(exp): coeff})
        shifts[x_vs.names[i]] = sh

    p = ring.characteristic()
    rows: Dict[tuple, List] = {}
    ncand = len(candidates)
    for col, (exp, bidx) in enumerate(candidates):
        big_exp = exp + (0,) * len(pnames)
        g = MultiPoly(ring, big_vs, {big_exp: rbasis[bidx]})
        delta = g.substitute(shifts) - g
        if p > 1:
            delta = _reduce_parameter_exponents(delta, param_idx, p)
        for e, c in delta.terms.items():
            for l, coord in enumerate(ring.field_coords(c)):
                if k.is_zero(coord):
                    continue
                row = rows.setdefault((e, l), [k.zero()] * ncand)
                row[col] = coord
    matrix = [rows[key] for key in sorted(rows)]
    return linalg.kernel_basis(matrix, k) if matrix else [
        [k.one() if i == j else k.zero() for j in range(ncand)] for i in range(ncand)], k


def _integer_primitive(vec: List[Fraction]) -> List[Fraction]:
    den = 1
    for a in vec:
        den = den * a.denominator // gcd(den, a.denominator)
    num = 0
    for a in vec:
        num = gcd(num, abs(int(a * den)))
    return [a * den / num for a in vec] if num else vec


def _piece_from_candidates(module: FPModule,
                           candidates: List[Tuple[Tuple[int, ...], int]],
                           x_vs: VarSet, degree: int) -> GradedPieceBasis:
    ring = module.ring
    k = ring.scalar_field()
    rbasis = ring.field_basis()
    kernel, _ = _solve_invariance(module, candidates, x_vs)
    if ring.tag() == "ZZ":
        kernel = [_integer_primitive(v) for v in kernel]

    polys = []
    for v in kernel:
        terms: Dict[tuple, object] = {}
        for c, (exp, bidx) in zip(v, candidates):
            if k.is_zero(c):
                continue
            add = ring.scale_by_scalar(rbasis[bidx], c)
            prev = terms.get(exp, ring.zero())
            val = ring.add(prev, add)
            if ring.is_zero(val):
                terms.pop(exp, None)
            else:
                terms[exp] = val
        polys.append(MultiPoly(ring, x_vs, terms))

    # greedy R-module generating set: a vector is redundant when it lies in
    # the k-span of ring-basis multiples of vectors already chosen
    span: List[list] = []
    count = 0
    for v, f in zip(kernel, polys):
        if span and linalg.rank(span + [v], k) == linalg.rank(span, k):
            continue
        count += 1
        for e in rbasis:
            g = f.map_coefficients(lambda c: ring.mul(e, c), ring)
            w = [k.zero()] * len(candidates)
            for col, (exp, bidx) in enumerate(candidates):
                c = g.terms.get(exp)
                if c is not None:
                    w[col] = ring.field_coords(c)[bidx]
            span.append(w)
    return GradedPieceBasis(module, degree, len(kernel), tuple(polys), count)


def generator_varset(module: FPModule) -> VarSet:
    return VarSet(tuple(f"x{i + 1}" for i in range(module.ngens)))


def graded_piece(module: FPModule, d: int) -> GradedPieceBasis:
    """Basis of R[M]_d, the degree-d translation-invariant polynomials."""
    if d < 0:
        raise ValueError("degree must be nonnegative")
    ring = module.ring
    if ring.tag() not in ("ZZ", "QQ") and not ring.tag().startswith("Fp(") \
            and "[t]/" not in ring.tag():
        raise ValueError(f"unsupported base ring {ring.tag()}")
    x_vs = generator_varset(module)
    rbasis = ring.field_basis()
    candidates = [(exp, b) for exp in _degree_monomials(module.ngens, d)
                  for b in range(len(rbasis))]
    return _piece_from_candidates(module, candidates, x_vs, d)


def is_translation_invariant(module: FPModule, f: MultiPoly) -> bool:
    """Check one polynomial against the full translation system."""
    ring = module.ring
    rbasis = ring.field_basis()
    x_vs = f.varset
    candidates = []
    coeffs = []
    k = ring.scalar_field()
    for exp, c in sorted(f.terms.items(), reverse=True):
        for b, coord in enumerate(ring.field_coords(c)):
            candidates.append((exp, b))
            coeffs.append(coord)
    kernel, _ = _solve_invariance(module, candidates, x_vs)
    if not candidates:
        return True
    # f is invariant iff its coefficient vector lies in the kernel span
    if not kernel:
        return all(k.is_zero(c) for c in coeffs)
    return linalg.rank(kernel + [coeffs], k) == linalg.rank(kernel, k)


@dataclass(frozen=True)
class PolyLawRep:
    """A polynomial law M -> R^target, stored through its coordinate bodies."""
    source: FPModule
    bodies: Tuple[MultiPoly, ...]

    @property
    def target_rank(self) -> int:
        return len(self.bodies)


def homogeneous_components(law: PolyLawRep) -> Dict[int, PolyLawRep]:
    """Split a law into its weighted-degree-homogeneous components."""
    degrees = set()
    parts_per_body = []
    for b in law.bodies:
        parts = b.homogeneous_parts()
        parts_per_body.append(parts)
        degrees.update(parts)
    out = {}
    for d in sorted(degrees):
        bodies = tuple(parts.get(d, MultiPoly.zero(b.ring, b.varset))
                       for parts, b in zip(parts_per_body, law.bodies))
        out[d] = PolyLawRep(law.source, bodies)
    return out


def bihomogeneous_components(law: PolyLawRep, split: int) -> Dict[Tuple[int, int], PolyLawRep]:
    """Split by bidegree over a direct sum M + M' (first `split` variables are M's)."""
    out: Dict[Tuple[int, int], Dict[int, Dict[tuple, object]]] = {}
    buckets: Dict[Tuple[int, int], List[Dict[tuple, object]]] = {}
    for idx, b in enumerate(law.bodies):
        vs = b.varset
        for e, c in b.terms.items():
            i = sum(w * x for w, x in zip(vs.weights[:split], e[:split]))
            j = sum(w * x for w, x in zip(vs.weights[split:], e[split:]))
            bucket = buckets.setdefault((i, j), [dict() for _ in law.bodies])
            bucket[idx][e] = c
    result = {}
    for key in sorted(buckets):
        bodies = tuple(MultiPoly(b.ring, b.varset, terms)
                       for b, terms in zip(law.bodies, buckets[key]))
        result[key] = PolyLawRep(law.source, bodies)
    return result


def compose_laws(gamma: PolyLawRep, phi: PolyLawRep) -> PolyLawRep:
    """gamma after phi; substitutes phi's bodies for gamma's variables."""
    if gamma.source.ngens != phi.target_rank:
        raise ValueError(
            f"cannot compose: inner law has target rank {phi.target_rank}, "
            f"outer law expects {gamma.source.ngens} inputs")
    names = gamma.bodies[0].varset.names if gamma.bodies else ()
    mapping = {names[i]: phi.bodies[i] for i in range(len(phi.bodies))} if names else {}
    bodies = tuple(b.substitute(mapping) for b in gamma.bodies)
    return PolyLawRep(phi.source, bodies)


def direct_sum(m1: FPModule, m2: FPModule) -> FPModule:
    if m1.ring != m2.ring:
        raise ValueError("direct sum needs a common base ring")
    ring = m1.ring
    zero1 = tuple(ring.zero() for _ in range(m1.ngens))
    zero2 = tuple(ring.zero() for _ in range(m2.ngens))
    rels = tuple(tuple(r) + zero2 for r in m1.relations) + \
        tuple(zero1 + tuple(r) for r in m2.relations)
    return FPModule(ring, m1.ngens + m2.ngens, rels)


def product_ring_check(m1: FPModule, m2: FPModule, d: int, e: int):
    """Compare dim R[M+N]_(d,e) with dim R[M]_d * dim R[N]_e.

    Dimensions here are R-module generator counts, which agree with scalar
    dimensions over fields and stay multiplicative over rings like k[t]/(f).
    Returns (equal, direct count, product count).
    """
    both = direct_sum(m1, m2)
    ring = both.ring
    rbasis = ring.field_basis()
    x_vs = generator_varset(both)
    candidates = []
    for exp_d in _degree_monomials(m1.ngens, d):
        for exp_e in _degree_monomials(m2.ngens, e):
            for b in range(len(rbasis)):
                candidates.append((exp_d + exp_e, b))
    candidates.sort(reverse=True)
    direct = _piece_from_candidates(both, candidates, x_vs, d + e).generator_count
    product = graded_piece(m1, d).generator_count * graded_piece(m2, e).generator_count
    return direct == product, direct, product
