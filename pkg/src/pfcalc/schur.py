"""The Schur algebra S_{<=d}(U) in its distinguished basis.

Basis elements s_alpha are indexed by n x n exponent matrices alpha with
|alpha| <= d (dual to the monomials x^alpha on End(U)).  The coefficient
of s_gamma in s_alpha * s_beta is the coefficient of x^alpha y^beta in
z^gamma where z_il = sum_j x_ij y_jl.  Modules come from polynomial
functors via the coefficients phi_alpha of the symbolic law matrix.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from math import comb, factorial
from typing import Dict, List, Sequence, Tuple

from . import linalg
from .functors import FunctorEval, hom_varset
from .rings import ZZ, BaseRing, Fp, QQ, fraction_field_reduction

Index = Tuple[int, ...]  # flattened n x n exponent matrix, row-major


def basis_indices(n: int, d: int) -> List[Index]:
    """All alpha in Z_{>=0}^{n x n} with |alpha| <= d, sorted."""
    out: List[Index] = []

    def rec(prefix: List[int], remaining: int, slots: int):
        if slots == 0:
            out.append(tuple(prefix))
            return
        for v in range(remaining + 1):
            rec(prefix + [v], remaining - v, slots - 1)

    rec([], d, n * n)
    out.sort()
    return out


def _compositions(total: int, parts: int):
    if parts == 1:
        yield (total,)
        return
    for first in range(total + 1):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


_TABLE_CACHE: Dict[Tuple[int, int], Dict[Tuple[Index, Index], List[Tuple[Index, int]]]] = {}


def _integer_table(n: int, d: int) -> Dict[Tuple[Index, Index], List[Tuple[Index, int]]]:
    """(alpha, beta) -> [(gamma, c)], the integer structure constants."""
    key = (n, d)
    if key in _TABLE_CACHE:
        return _TABLE_CACHE[key]
    idx = basis_indices(n, d)
    idx_set = set(idx)
    table: Dict[Tuple[Index, Index], Dict[Index, int]] = {}
    for gamma in idx:
        # expand z^gamma = prod_{i,l} (sum_j x_ij y_jl)^{gamma_il}
        acc: Dict[Tuple[Index, Index], int] = {(
            (0,) * (n * n), (0,) * (n * n)): 1}
        for i in range(n):
            for l in range(n):
                g = gamma[i * n + l]
                if g == 0:
                    continue
                step: Dict[Tuple[Index, Index], int] = {}
                mult0 = factorial(g)
                for c in _compositions(g, n):
                    m = mult0
                    for v in c:
                        m //= factorial(v)
                    for (a, b), coeff in acc.items():
                        a2 = list(a)
                        b2 = list(b)
                        for j in range(n):
                            a2[i * n + j] += c[j]
                            b2[j * n + l] += c[j]
                        k2 = (tuple(a2), tuple(b2))
                        step[k2] = step.get(k2, 0) + coeff * m
                acc = step
        for (a, b), coeff in acc.items():
            if a in idx_set and b in idx_set:
                table.setdefault((a, b), {})[gamma] = coeff
    out = {k: sorted(v.items()) for k, v in table.items()}
    _TABLE_CACHE[key] = out
    return out


@dataclass(frozen=True)
class SchurAlgebra:
    n: int
    d: int
    ring: BaseRing

    @property
    def basis(self) -> List[Index]:
        return basis_indices(self.n, self.d)

    def dimension(self) -> int:
        return comb(self.n * self.n + self.d, self.d)

    def element(self, coeffs: Dict[Index, object]) -> "SchurElem":
        idx = set(self.basis)
        clean = {}
        for a, c in coeffs.items():
            if a not in idx:
                raise ValueError(f"index {a} out of range for S_<={self.d}(U), n={self.n}")
            c = self.ring.coerce(c)
            if not self.ring.is_zero(c):
                clean[a] = c
        return SchurElem(self, clean)

    def zero(self) -> "SchurElem":
        return SchurElem(self, {})

    def s(self, alpha: Sequence[Sequence[int]]) -> "SchurElem":
        flat = tuple(x for row in alpha for x in row)
        return self.element({flat: self.ring.one()})

    def multiply(self, a: "SchurElem", b: "SchurElem") -> "SchurElem":
        table = _integer_table(self.n, self.d)
        ring = self.ring
        out: Dict[Index, object] = {}
        for alpha, ca in a.coeffs.items():
            for beta, cb in b.coeffs.items():
                pairs = table.get((alpha, beta))
                if not pairs:
                    continue
                cab = ring.mul(ca, cb)
                for gamma, c in pairs:
                    add = ring.mul(cab, ring.from_int(c))
                    cur = ring.add(out.get(gamma, ring.zero()), add)
                    if ring.is_zero(cur):
                        out.pop(gamma, None)
                    else:
                        out[gamma] = cur
        return SchurElem(self, out)

    def structure_constants(self, alpha: Index, beta: Index) -> "SchurElem":
        return self.multiply(self.element({alpha: self.ring.one()}),
                             self.element({beta: self.ring.one()}))

    def evaluation_embed(self, phi: Sequence[Sequence[object]]) -> "SchurElem":
        """ev_phi, the image of phi in End(U): coefficient x^alpha(phi) at alpha."""
        ring = self.ring
        entries = [[ring.coerce(x) for x in row] for row in phi]
        out = {}
        for alpha in self.basis:
            val = ring.one()
            for i in range(self.n):
                for j in range(self.n):
                    e = alpha[i * self.n + j]
                    for _ in range(e):
                        val = ring.mul(val, entries[i][j])
            if not ring.is_zero(val):
                out[alpha] = val
        return SchurElem(self, out)

    def identity_element(self) -> "SchurElem":
        ident = [[self.ring.one() if i == j else self.ring.zero()
                  for j in range(self.n)] for i in range(self.n)]
        return self.evaluation_embed(ident)


@dataclass(frozen=True)
class SchurElem:
    algebra: SchurAlgebra
    coeffs: Dict[Index, object]

    def __add__(self, other: "SchurElem") -> "SchurElem":
        ring = self.algebra.ring
        out = dict(self.coeffs)
        for a, c in other.coeffs.items():
            cur = ring.add(out.get(a, ring.zero()), c)
            if ring.is_zero(cur):
                out.pop(a, None)
            else:
                out[a] = cur
        return SchurElem(self.algebra, out)

    def __mul__(self, other: "SchurElem") -> "SchurElem":
        return self.algebra.multiply(self, other)

    def __eq__(self, other) -> bool:
        return (isinstance(other, SchurElem) and self.algebra == other.algebra
                and self.coeffs == other.coeffs)

    def __hash__(self):
        return hash((self.algebra, tuple(sorted(self.coeffs.items(), key=str))))

    def is_zero(self) -> bool:
        return not self.coeffs

    def __repr__(self):
        if not self.coeffs:
            return "0"
        ring = self.algebra.ring
        parts = []
        for a in sorted(self.coeffs):
            c = self.coeffs[a]
            head = "" if c == ring.one() else f"{ring.fmt(c)}*"
            parts.append(f"{head}s{a}")
        return " + ".join(parts)


@dataclass(frozen=True)
class SchurModule:
    """An S_{<=d}(U)-module through its action matrices phi_alpha."""
    algebra: SchurAlgebra
    rank: int
    action: Dict[Index, Tuple[Tuple[object, ...], ...]]

    def act(self, elem: SchurElem):
        """Matrix by which elem acts."""
        ring = self.algebra.ring
        out = [[ring.zero()] * self.rank for _ in range(self.rank)]
        for a, c in elem.coeffs.items():
            mat = self.action.get(a)
            if mat is None:
                continue
            for i in range(self.rank):
                for j in range(self.rank):
                    out[i][j] = ring.add(out[i][j], ring.mul(c, mat[i][j]))
        return out


def module_of_functor(ev: FunctorEval, d: int) -> SchurModule:
    """Extract the phi_alpha action matrices from the symbolic law of P at U."""
    n = ev.rank
    ring = ev.module.ring
    if ev.expr.degree() > d:
        raise ValueError(
            f"functor degree {ev.expr.degree()} exceeds the bound d={d}")
    algebra = SchurAlgebra(n, d, ring)
    law = ev.law(n)
    m = ev.module.ngens
    action: Dict[Index, List[List[object]]] = {}
    for i in range(m):
        for j in range(m):
            for exp, c in law[i][j].terms.items():
                mat = action.get(exp)
                if mat is None:
                    if sum(exp) > d:
                        raise ValueError(f"law exponent {exp} exceeds degree bound {d}")
                    mat = [[ring.zero()] * m for _ in range(m)]
                    action[exp] = mat
                mat[i][j] = c
    frozen = {a: tuple(tuple(row) for row in mat) for a, mat in action.items()}
    return SchurModule(algebra, m, frozen)


def spin(module: SchurModule, v: Sequence[object]) -> List[list]:
    """Smallest action-stable subspace containing v, as an echelonized basis."""
    ring = module.algebra.ring
    if not ring.is_field():
        raise ValueError("spin needs field coefficients")
    vec = [ring.coerce(x) for x in v]
    if all(ring.is_zero(x) for x in vec):
        return []
    basis, _ = linalg.row_reduce([vec], ring)
    changed = True
    while changed:
        changed = False
        for mat in module.action.values():
            for w in list(basis):
                img = [ring.zero()] * module.rank
                for i in range(module.rank):
                    acc = ring.zero()
                    for j in range(module.rank):
                        acc = ring.add(acc, ring.mul(mat[i][j], w[j]))
                    img[i] = acc
                if all(ring.is_zero(x) for x in img):
                    continue
                new_basis, piv = linalg.row_reduce(basis + [img], ring)
                if len(new_basis) > len(basis):
                    basis = new_basis
                    changed = True
    return basis


def base_change_module(module: SchurModule, p: int) -> SchurModule:
    """Reduce an integral SchurModule into K_p (QQ for p = 0, F_p otherwise)."""
    if module.algebra.ring.tag() != "ZZ":
        raise ValueError("base change starts from an integral module")
    target = fraction_field_reduction(ZZ, p)
    algebra = SchurAlgebra(module.algebra.n, module.algebra.d, target)
    action = {a: tuple(tuple(target.from_int(x) for x in row) for row in mat)
              for a, mat in module.action.items()}
    return SchurModule(algebra, module.rank, action)
