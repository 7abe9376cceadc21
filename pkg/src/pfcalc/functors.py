"""Polynomial functors as combinator trees with concrete evaluations.

A functor expression is built from Const, Id, Sym(d), Ext(d), Tensor,
DirectSum, Compose, Shift and Dual.  Evaluating at rank n yields a module
with a named basis plus symbolic law matrices: for a map R^n -> R^m given
by an m x n matrix of indeterminates h_i_j, the law matrix expresses the
induced map P(R^n) -> P(R^m) in the chosen bases.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations, combinations_with_replacement, product
from typing import Dict, List, Sequence, Tuple

from . import linalg
from .fpmod import FPModule, fiber_dimension
from .poly import MultiPoly, VarSet
from .rings import ZZ, BaseRing


class FunctorExpr:
    def degree(self) -> int:
        raise NotImplementedError

    def ring(self) -> BaseRing:
        return ZZ

    def __add__(self, other):
        return DirectSum((self, other))


@dataclass(frozen=True)
class Const(FunctorExpr):
    module: FPModule

    def degree(self):
        return 0

    def ring(self):
        return self.module.ring

    def __str__(self):
        rel = self.module.relations
        if self.module.ngens == 1 and len(rel) == 1:
            return f"Const(ZZ/{rel[0][0]})"
        if not rel:
            return f"Const(ZZ^{self.module.ngens})"
        return f"Const({self.module.ngens} gens, {len(rel)} relations)"


@dataclass(frozen=True)
class Id(FunctorExpr):
    def degree(self):
        return 1

    def __str__(self):
        return "Id"


@dataclass(frozen=True)
class Sym(FunctorExpr):
    d: int

    def degree(self):
        return self.d

    def __str__(self):
        return f"Sym({self.d})"


@dataclass(frozen=True)
class Ext(FunctorExpr):
    d: int

    def degree(self):
        return self.d

    def __str__(self):
        return f"Ext({self.d})"


@dataclass(frozen=True)
class Tensor(FunctorExpr):
    children: Tuple[FunctorExpr, ...]

    def degree(self):
        return sum(c.degree() for c in self.children)

    def __str__(self):
        return "Tensor(" + ", ".join(str(c) for c in self.children) + ")"


@dataclass(frozen=True)
class DirectSum(FunctorExpr):
    children: Tuple[FunctorExpr, ...]

    def degree(self):
        return max(c.degree() for c in self.children)

    def __str__(self):
        return " (+) ".join(str(c) for c in self.children)


@dataclass(frozen=True)
class Compose(FunctorExpr):
    outer: FunctorExpr
    inner: FunctorExpr

    def degree(self):
        return self.outer.degree() * self.inner.degree()

    def __str__(self):
        return f"Compose({self.outer}, {self.inner})"


@dataclass(frozen=True)
class Shift(FunctorExpr):
    m: int
    child: FunctorExpr

    def degree(self):
        return self.child.degree()

    def __str__(self):
        return f"Shift({self.m}, {self.child})"


@dataclass(frozen=True)
class Dual(FunctorExpr):
    child: FunctorExpr

    def degree(self):
        return self.child.degree()

    def __str__(self):
        return f"Dual({self.child})"


def hom_varset(m: int, n: int) -> VarSet:
    """Variables h_i_j for the entries of an m x n matrix."""
    return VarSet(tuple(f"h_{i + 1}_{j + 1}" for i in range(m) for j in range(n)))


@dataclass(frozen=True)
class FunctorEval:
    """One functor evaluated at one rank: module, basis labels, law maker."""
    expr: FunctorExpr
    rank: int
    module: FPModule
    basis_labels: Tuple[str, ...]

    def law(self, target_rank: int) -> List[List[MultiPoly]]:
        """Matrix of P applied to a generic map R^rank -> R^target_rank."""
        ring = self.module.ring
        vs = hom_varset(target_rank, self.rank)
        h = [[MultiPoly.variable(ring, vs, f"h_{i + 1}_{j + 1}")
              for j in range(self.rank)] for i in range(target_rank)]
        return _law_matrix(self.expr, self.rank, target_rank, h, ring, vs)

    def law_at(self, matrix: Sequence[Sequence[int]]) -> List[List]:
        """Law matrix at a concrete integer matrix; entries are ring payloads."""
        ring = self.module.ring
        n_to = len(matrix)
        vs = hom_varset(n_to, self.rank)
        h = [[MultiPoly.constant(ring, vs, ring.from_int(matrix[i][j]))
              for j in range(self.rank)] for i in range(n_to)]
        rows = _law_matrix(self.expr, self.rank, n_to, h, ring, vs)
        return [[e.terms.get(tuple([0] * len(vs)), ring.zero()) for e in row]
                for row in rows]


_EVAL_CACHE: Dict[Tuple[FunctorExpr, int], FunctorEval] = {}


def _check_free(expr: FunctorExpr, why: str):
    if isinstance(expr, Const) and expr.module.relations:
        raise ValueError(f"{why} requires free evaluations, got torsion in {expr}")
    for attr in ("children", "child", "outer", "inner"):
        sub = getattr(expr, attr, None)
        if sub is None:
            continue
        for c in sub if isinstance(sub, tuple) else (sub,):
            _check_free(c, why)


def _sym_basis(n: int, d: int) -> List[Tuple[int, ...]]:
    out = []
    for combo in combinations_with_replacement(range(n), d):
        e = [0] * n
        for i in combo:
            e[i] += 1
        out.append(tuple(e))
    out.sort(reverse=True)
    return out


def evaluate(expr: FunctorExpr, n: int) -> FunctorEval:
    """Module of P(R^n) with deterministic basis labels."""
    if n < 0:
        raise ValueError("rank must be nonnegative")
    key = (expr, n)
    if key in _EVAL_CACHE:
        return _EVAL_CACHE[key]
    ring = expr.ring()
    if isinstance(expr, Const):
        mod = expr.module
        labels = tuple(f"c{i + 1}" for i in range(mod.ngens))
    elif isinstance(expr, Id):
        mod = FPModule.free(ring, n)
        labels = tuple(f"e{i + 1}" for i in range(n))
    elif isinstance(expr, Sym):
        basis = _sym_basis(n, expr.d)
        mod = FPModule.free(ring, len(basis))
        labels = tuple("*".join(f"e{i + 1}^{e}" if e > 1 else f"e{i + 1}"
                                for i, e in enumerate(exp) if e) or "1"
                       for exp in basis)
    elif isinstance(expr, Ext):
        basis = list(combinations(range(n), expr.d))
        mod = FPModule.free(ring, len(basis))
        labels = tuple("^".join(f"e{i + 1}" for i in idx) or "1" for idx in basis)
    elif isinstance(expr, Tensor):
        _check_free(expr, "Tensor")
        subs = [evaluate(c, n) for c in expr.children]
        mod = FPModule.free(ring, _prod(s.module.ngens for s in subs))
        labels = tuple("(" + ")⊗(".join(ls) + ")"
                       for ls in product(*[s.basis_labels for s in subs]))
    elif isinstance(expr, DirectSum):
        subs = [evaluate(c, n) for c in expr.children]
        ngens = sum(s.module.ngens for s in subs)
        rels = []
        offset = 0
        for s in subs:
            for row in s.module.relations:
                full = [ring.zero()] * ngens
                full[offset:offset + s.module.ngens] = list(row)
                rels.append(tuple(full))
            offset += s.module.ngens
        mod = FPModule(ring, ngens, tuple(rels))
        labels = tuple(f"[{k}]{lab}" for k, s in enumerate(subs)
                       for lab in s.basis_labels)
    elif isinstance(expr, Compose):
        _check_free(expr, "Compose")
        inner = evaluate(expr.inner, n)
        outer = evaluate(expr.outer, inner.module.ngens)
        mod = FPModule.free(ring, outer.module.ngens)
        labels = outer.basis_labels
    elif isinstance(expr, Shift):
        child = evaluate(expr.child, expr.m + n)
        mod = child.module
        labels = child.basis_labels
    elif isinstance(expr, Dual):
        _check_free(expr, "Dual")
        child = evaluate(expr.child, n)
        mod = child.module
        labels = tuple(f"({lab})*" for lab in child.basis_labels)
    else:
        raise TypeError(f"unknown functor node {expr!r}")
    out = FunctorEval(expr, n, mod, labels)
    _EVAL_CACHE[key] = out
    return out


def _prod(it):
    out = 1
    for x in it:
        out *= x
    return out


def _law_matrix(expr: FunctorExpr, n_from: int, n_to: int,
                h: List[List[MultiPoly]], ring: BaseRing, vs: VarSet) -> List[List[MultiPoly]]:
    """Law matrix of expr at the (possibly symbolic) matrix h."""
    zero = MultiPoly.zero(ring, vs)
    one = MultiPoly.constant(ring, vs, ring.one())
    if isinstance(expr, Const):
        m = expr.module.ngens
        return [[one if i == j else zero for j in range(m)] for i in range(m)]
    if isinstance(expr, Id):
        return [list(row) for row in h]
    if isinstance(expr, Sym):
        src = _sym_basis(n_from, expr.d)
        tgt = _sym_basis(n_to, expr.d)
        tgt_index = {e: i for i, e in enumerate(tgt)}
        big = _f_extended(vs, n_to)
        one_big = MultiPoly.constant(ring, big, ring.one())
        zero_big = MultiPoly.zero(ring, big)
        hb = [[ent.rename(big) for ent in row] for row in h]
        cols = []
        for exp in src:
            img = one_big
            for j, e in enumerate(exp):
                if e:
                    col = zero_big
                    for i in range(n_to):
                        col = col + hb[i][j] * _fvar(ring, vs, n_to, i)
                    img = img * col ** e
            cols.append(img)
        return _collect_f(cols, tgt_index, n_to, ring, vs)
    if isinstance(expr, Ext):
        src = list(combinations(range(n_from), expr.d))
        tgt = list(combinations(range(n_to), expr.d))
        out = []
        for rows_idx in tgt:
            row = []
            for cols_idx in src:
                row.append(_det([[h[i][j] for j in cols_idx] for i in rows_idx],
                                ring, vs))
            out.append(row)
        return out
    if isinstance(expr, Tensor):
        mats = [_law_matrix(c, n_from, n_to, h, ring, vs) for c in expr.children]
        out = None
        for m in mats:
            out = m if out is None else _kron(out, m, zero)
        return out if out is not None else [[one]]
    if isinstance(expr, DirectSum):
        mats = [_law_matrix(c, n_from, n_to, h, ring, vs) for c in expr.children]
        size_r = sum(len(m) for m in mats)
        size_c = sum(len(m[0]) if m else 0 for m in mats)
        out = [[zero] * size_c for _ in range(size_r)]
        ro = co = 0
        for m in mats:
            for i, row in enumerate(m):
                for j, ent in enumerate(row):
                    out[ro + i][co + j] = ent
            ro += len(m)
            co += len(m[0]) if m else 0
        return out
    if isinstance(expr, Compose):
        inner = _law_matrix(expr.inner, n_from, n_to, h, ring, vs)
        q_from = evaluate(expr.inner, n_from).module.ngens
        q_to = len(inner)
        return _law_matrix(expr.outer, q_from, q_to, inner, ring, vs)
    if isinstance(expr, Shift):
        m = expr.m
        big = [[zero] * (m + n_from) for _ in range(m + n_to)]
        for i in range(m):
            big[i][i] = one
        for i in range(n_to):
            for j in range(n_from):
                big[m + i][m + j] = h[i][j]
        return _law_matrix(expr.child, m + n_from, m + n_to, big, ring, vs)
    if isinstance(expr, Dual):
        ht = [[h[i][j] for i in range(n_to)] for j in range(n_from)]
        inner = _law_matrix(expr.child, n_to, n_from, ht, ring, vs)
        return [[inner[j][i] for j in range(len(inner))]
                for i in range(len(inner[0]))]
    raise TypeError(f"unknown functor node {expr!r}")


# scratch variables f_i used to expand symmetric powers; they share the
# h varset by temporary extension
def _fvar(ring, vs, n_to, i):
    big = _f_extended(vs, n_to)
    return MultiPoly.variable(ring, big, f"f!{i + 1}")


_F_VS_CACHE: Dict[Tuple[VarSet, int], VarSet] = {}


def _f_extended(vs: VarSet, n_to: int) -> VarSet:
    key = (vs, n_to)
    if key not in _F_VS_CACHE:
        _F_VS_CACHE[key] = VarSet(vs.names + tuple(f"f!{i + 1}" for i in range(n_to)),
                                  vs.weights + (1,) * n_to)
    return _F_VS_CACHE[key]


def _collect_f(cols: List[MultiPoly], tgt_index: Dict[tuple, int], n_to: int,
               ring, vs: VarSet) -> List[List[MultiPoly]]:
    """Split polynomials in the scratch f variables into a matrix over vs."""
    big = _f_extended(vs, n_to)
    nh = len(vs)
    out = [[MultiPoly.zero(ring, vs) for _ in cols] for _ in tgt_index]
    for c, poly in enumerate(cols):
        if poly.varset != big:
            poly = poly.rename(big)
        rows: Dict[int, Dict[tuple, object]] = {}
        for e, coeff in poly.terms.items():
            fexp = e[nh:]
            r = tgt_index[fexp]
            rows.setdefault(r, {})[e[:nh]] = coeff
        for r, terms in rows.items():
            out[r][c] = MultiPoly(ring, vs, terms)
    return out


def _det(mat: List[List[MultiPoly]], ring, vs) -> MultiPoly:
    n = len(mat)
    if n == 0:
        return MultiPoly.constant(ring, vs, ring.one())
    if n == 1:
        return mat[0][0]
    out = MultiPoly.zero(ring, vs)
    for j in range(n):
        minor = [[mat[i][k] for k in range(n) if k != j] for i in range(1, n)]
        term = mat[0][j] * _det(minor, ring, vs)
        out = out + term if j % 2 == 0 else out - term
    return out


def _kron(a: List[List[MultiPoly]], b: List[List[MultiPoly]], zero) -> List[List[MultiPoly]]:
    if not a or not b:
        return []
    ra, ca = len(a), len(a[0])
    rb, cb = len(b), len(b[0])
    out = [[zero] * (ca * cb) for _ in range(ra * rb)]
    for i in range(ra):
        for j in range(ca):
            if a[i][j].is_zero():
                continue
            for k in range(rb):
                for l in range(cb):
                    out[i * rb + k][j * cb + l] = a[i][j] * b[k][l]
    return out


def homogeneous_parts(expr: FunctorExpr, n: int) -> Dict[int, List[int]]:
    """Partition of basis indices by degree, read off the law at t*id."""
    ev = evaluate(expr, n)
    ring = ev.module.ring
    tvs = VarSet(("t!",))
    t = MultiPoly.variable(ring, tvs, "t!")
    zero = MultiPoly.zero(ring, tvs)
    h = [[t if i == j else zero for j in range(n)] for i in range(n)]
    mat = _law_matrix(expr, n, n, h, ring, tvs)
    parts: Dict[int, List[int]] = {}
    size = ev.module.ngens
    for j in range(size):
        entry = mat[j][j]
        degs = {e[0] for e in entry.terms}
        off_diag = [i for i in range(size) if i != j and not mat[i][j].is_zero()]
        if off_diag or len(degs) != 1:
            raise AssertionError(f"basis vector {j} of {expr} is not homogeneous")
        parts.setdefault(degs.pop(), []).append(j)
    return parts


def shift_decompose(expr: FunctorExpr, m: int, n: int):
    """Split Sh_m(P)(R^n) into P(R^n) and a lower-degree complement.

    Returns (P-part basis, Q-part basis) as integer vectors in the shifted
    evaluation's coordinates, from the idempotent P(inclusion o projection).
    """
    shifted = Shift(m, expr)
    ev = evaluate(expr, m + n)
    size = ev.module.ngens
    # idempotent P(iota o pi) killing the U-block of U (+) V
    sel = [[1 if (i == j and i >= m) else 0 for j in range(m + n)]
           for i in range(m + n)]
    emat = ev.law_at(sel)
    ring = ev.module.ring
    eint = [[_payload_int(ring, x) for x in row] for row in emat]
    # P-part: column span of e; Q-part: column span of 1 - e (e idempotent)
    cols_e = [[eint[i][j] for i in range(size)] for j in range(size)]
    cols_c = [[(1 if i == j else 0) - eint[i][j] for i in range(size)]
              for j in range(size)]
    p_basis = linalg.integer_echelon(cols_e)[0]
    q_basis = linalg.integer_echelon(cols_c)[0]
    # the complement must have strictly smaller degree
    parts = homogeneous_parts(shifted, n)
    top = expr.degree()
    high = set()
    for d, idxs in parts.items():
        if d >= top and top > 0:
            high.update(idxs)
    for v in q_basis:
        if any(v[i] for i in high):
            raise AssertionError("shift complement touches top-degree part")
    return p_basis, q_basis


def _payload_int(ring, x) -> int:
    if isinstance(x, int):
        return x
    raise ValueError(f"expected integer payload over {ring.tag()}, got {x!r}")


def _binomial_fit(values: List[int], max_degree: int) -> List[int]:
    """Coefficients a_i with f(n) = sum a_i * C(n, i), from finite differences."""
    diffs = list(values)
    coeffs = []
    for i in range(len(values)):
        coeffs.append(diffs[0])
        diffs = [b - a for a, b in zip(diffs, diffs[1:])]
        if not diffs:
            break
    while coeffs and coeffs[-1] == 0:
        coeffs.pop()
    if len(coeffs) - 1 > max_degree:
        raise AssertionError(
            f"dimension data needs degree {len(coeffs) - 1}, expected <= {max_degree}")
    return coeffs


def binomial_eval(coeffs: Sequence[int], n: int) -> int:
    from math import comb
    return sum(a * comb(n, i) for i, a in enumerate(coeffs))


@dataclass(frozen=True)
class DimReport:
    expr: FunctorExpr
    window: int
    table: Dict[int, Tuple[int, ...]]          # prime -> (f_p(0), ..., f_p(window))
    coefficients: Dict[int, Tuple[int, ...]]   # prime -> binomial-basis coefficients
    jumping_primes: Tuple[int, ...]


def dimension_function(expr: FunctorExpr, primes: Sequence[int], window: int) -> DimReport:
    """Fiber dimensions of P(R^n) per prime, cross-checked two ways.

    Direct fiber dimensions must satisfy f_p(n+1) = f_p(n) + g_p(n) where
    g_p(n) is the rank of the shift complement; the fitted interpolating
    polynomials (binomial basis, integer coefficients) are returned.
    """
    if window < expr.degree() + 1:
        raise ValueError("window must exceed the functor degree")
    plist = [0] + [p for p in primes if p != 0]
    table = {}
    for p in plist:
        table[p] = tuple(fiber_dimension(evaluate(expr, n).module, p)
                         for n in range(window + 1))
    for n in range(window):
        g = len(shift_decompose(expr, 1, n)[1])
        for p in plist:
            if table[p][n + 1] != table[p][n] + g:
                raise AssertionError(
                    f"shift recursion failed for {expr} at p={p}, n={n}: "
                    f"{table[p][n + 1]} != {table[p][n]} + {g}")
    coeffs = {p: tuple(_binomial_fit(list(v), expr.degree())) for p, v in table.items()}
    jumping = tuple(p for p in plist[1:] if coeffs[p] != coeffs[0])
    return DimReport(expr, window, table, coeffs, jumping)


def dual(expr: FunctorExpr, n: int) -> FunctorEval:
    return evaluate(Dual(expr), n)


def parse_functor(text: str) -> FunctorExpr:
    """Parse `Sym(2) (+) Ext(3)`, `Shift(1, Sym(2))`, `Const(ZZ/2)` etc."""
    pos = 0
    s = text

    def skip():
        nonlocal pos
        while pos < len(s) and s[pos].isspace():
            pos += 1

    def expect(tok: str):
        nonlocal pos
        skip()
        if not s.startswith(tok, pos):
            raise ValueError(f"expected {tok!r} at position {pos} in {text!r}")
        pos += len(tok)

    def parse_int() -> int:
        nonlocal pos
        skip()
        start = pos
        while pos < len(s) and (s[pos].isdigit() or s[pos] == "-"):
            pos += 1
        if start == pos:
            raise ValueError(f"expected integer at position {start} in {text!r}")
        return int(s[start:pos])

    def atom() -> FunctorExpr:
        nonlocal pos
        skip()
        for name in ("Sym", "Ext", "Shift", "Dual", "Tensor", "Compose", "Const", "Id"):
            if s.startswith(name, pos):
                pos += len(name)
                if name == "Id":
                    return Id()
                expect("(")
                if name in ("Sym", "Ext"):
                    d = parse_int()
                    expect(")")
                    return Sym(d) if name == "Sym" else Ext(d)
                if name == "Shift":
                    m = parse_int()
                    expect(",")
                    child = expr_()
                    expect(")")
                    return Shift(m, child)
                if name == "Dual":
                    child = expr_()
                    expect(")")
                    return Dual(child)
                if name in ("Tensor", "Compose"):
                    parts = [expr_()]
                    skip()
                    while pos < len(s) and s[pos] == ",":
                        pos += 1
                        parts.append(expr_())
                        skip()
                    expect(")")
                    if name == "Compose":
                        if len(parts) != 2:
                            raise ValueError("Compose takes exactly two functors")
                        return Compose(parts[0], parts[1])
                    return Tensor(tuple(parts))
                if name == "Const":
                    skip()
                    if s.startswith("ZZ/", pos):
                        pos += 3
                        k = parse_int()
                        expect(")")
                        return Const(FPModule.from_ints(ZZ, 1, [[k]]))
                    if s.startswith("ZZ^", pos):
                        pos += 3
                        r = parse_int()
                        expect(")")
                        return Const(FPModule.free(ZZ, r))
                    if s.startswith("ZZ", pos):
                        pos += 2
                        expect(")")
                        return Const(FPModule.free(ZZ, 1))
                    raise ValueError(f"unsupported Const argument in {text!r}")
        raise ValueError(f"cannot parse functor at position {pos} in {text!r}")

    def expr_() -> FunctorExpr:
        nonlocal pos
        first = atom()
        parts = [first]
        while True:
            skip()
            if s.startswith("(+)", pos):
                pos += 3
                parts.append(atom())
            else:
                break
        return parts[0] if len(parts) == 1 else DirectSum(tuple(parts))

    out = expr_()
    skip()
    if pos != len(s):
        raise ValueError(f"trailing input at position {pos} in {text!r}")
    return out
