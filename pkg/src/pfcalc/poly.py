"""Sparse multivariate polynomials over an exact base ring.

Exponent vectors are dense tuples (the variable count stays small at desk
scale).  Terms map exponent tuples to nonzero coefficient payloads of the
base ring; the ring itself is carried on the polynomial.
"""

from __future__ import annotations

import operator
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Iterable, Optional, Tuple

from .rings import BaseRing, QQ, QuotientRing, RingElem, ZZ


@dataclass(frozen=True)
class VarSet:
    names: Tuple[str, ...]
    weights: Tuple[int, ...] = None  # type: ignore[assignment]

    def __post_init__(self):
        if self.weights is None:
            object.__setattr__(self, "weights", (1,) * len(self.names))
        if len(set(self.names)) != len(self.names):
            raise ValueError("variable names must be distinct")
        if len(self.weights) != len(self.names):
            raise ValueError("one weight per variable required")
        if any(w < 1 for w in self.weights):
            raise ValueError("weights must be >= 1")

    def __len__(self):
        return len(self.names)

    def index(self, name: str) -> int:
        return self.names.index(name)

    def weighted_degree(self, exp: Tuple[int, ...]) -> int:
        return sum(w * e for w, e in zip(self.weights, exp))


def varset(*names: str, weights: Optional[Iterable[int]] = None) -> VarSet:
    return VarSet(tuple(names), tuple(weights) if weights is not None else None)


# ---------------------------------------------------------------------------
# Monomial orders


class MonomialOrder:
    """Total order on exponent tuples, compatible with multiplication."""

    def key(self, exp: Tuple[int, ...]):
        raise NotImplementedError

    def leading(self, exps):
        return max(exps, key=self.key)

    def tag(self) -> str:
        raise NotImplementedError

    def __repr__(self):
        return self.tag()

    def __eq__(self, other):
        return isinstance(other, MonomialOrder) and other.tag() == self.tag()

    def __hash__(self):
        return hash(self.tag())


class Lex(MonomialOrder):
    def key(self, exp):
        return exp

    def tag(self):
        return "lex"


def _grevlex_key(exp):
    return (sum(exp), tuple(map(operator.neg, reversed(exp))))


class Grevlex(MonomialOrder):
    def key(self, exp):
        return _grevlex_key(exp)

    def tag(self):
        return "grevlex"


class Elimination(MonomialOrder):
    """Block order: first block by grevlex, ties broken by grevlex on the rest."""

    def __init__(self, block_size: int):
        if block_size < 1:
            raise ValueError("block size must be >= 1")
        self.block_size = block_size

    def key(self, exp):
        b = self.block_size
        return (_grevlex_key(exp[:b]), _grevlex_key(exp[b:]))

    def tag(self):
        return f"elim({self.block_size})"


def order_from_tag(tag: str) -> MonomialOrder:
    tag = tag.strip()
    if tag == "lex":
        return Lex()
    if tag == "grevlex":
        return Grevlex()
    m = re.fullmatch(r"elim\((\d+)\)", tag)
    if m:
        return Elimination(int(m.group(1)))
    raise ValueError(f"unknown monomial order {tag!r}")


# ---------------------------------------------------------------------------
# Polynomials


def _exp_add(a, b):
    return tuple(map(operator.add, a, b))


def _exp_sub(a, b):
    return tuple(map(operator.sub, a, b))


def _exp_divides(a, b):
    """Does monomial a divide monomial b?"""
    return all(map(operator.le, a, b))


def _exp_lcm(a, b):
    return tuple(map(max, a, b))


class MultiPoly:
    __slots__ = ("ring", "varset", "terms")

    def __init__(self, ring: BaseRing, vs: VarSet, terms: Dict[tuple, object]):
        self.ring = ring
        self.varset = vs
        self.terms = terms

    # -- constructors -------------------------------------------------------
    @classmethod
    def from_terms(cls, ring, vs, items) -> "MultiPoly":
        terms = {}
        for exp, c in items:
            if exp in terms:
                c = ring.add(terms[exp], c)
            if ring.is_zero(c):
                terms.pop(exp, None)
            else:
                terms[exp] = c
        return cls(ring, vs, terms)

    @classmethod
    def zero(cls, ring, vs) -> "MultiPoly":
        return cls(ring, vs, {})

    @classmethod
    def constant(cls, ring, vs, c) -> "MultiPoly":
        c = ring.coerce(c)
        if ring.is_zero(c):
            return cls.zero(ring, vs)
        return cls(ring, vs, {(0,) * len(vs): c})

    @classmethod
    def variable(cls, ring, vs, name: str) -> "MultiPoly":
        exp = [0] * len(vs)
        exp[vs.index(name)] = 1
        return cls(ring, vs, {tuple(exp): ring.one()})

    # -- basic queries -------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return all(sum(e) == 0 for e in self.terms)

    def coeff(self, exp: tuple) -> RingElem:
        return RingElem(self.ring, self.terms.get(exp, self.ring.zero()))

    def constant_coeff(self):
        return self.terms.get((0,) * len(self.varset), self.ring.zero())

    def total_degree(self) -> int:
        return max((sum(e) for e in self.terms), default=-1)

    def weighted_degree(self) -> int:
        return max((self.varset.weighted_degree(e) for e in self.terms), default=-1)

    def is_weighted_homogeneous(self) -> bool:
        degs = {self.varset.weighted_degree(e) for e in self.terms}
        return len(degs) <= 1

    def leading(self, order: MonomialOrder):
        """(exponent, coefficient payload) of the leading term."""
        exp = order.leading(self.terms.keys())
        return exp, self.terms[exp]

    # -- arithmetic ----------------------------------------------------------
    def _assert_compat(self, other: "MultiPoly"):
        if self.ring != other.ring or self.varset != other.varset:
            raise ValueError("polynomials live in different rings")

    def __add__(self, other):
        self._assert_compat(other)
        ring = self.ring
        terms = dict(self.terms)
        for e, c in other.terms.items():
            s = ring.add(terms.get(e, ring.zero()), c)
            if ring.is_zero(s):
                terms.pop(e, None)
            else:
                terms[e] = s
        return MultiPoly(ring, self.varset, terms)

    def __sub__(self, other):
        self._assert_compat(other)
        ring = self.ring
        terms = dict(self.terms)
        for e, c in other.terms.items():
            s = ring.sub(terms.get(e, ring.zero()), c)
            if ring.is_zero(s):
                terms.pop(e, None)
            else:
                terms[e] = s
        return MultiPoly(ring, self.varset, terms)

    def __neg__(self):
        ring = self.ring
        return MultiPoly(ring, self.varset, {e: ring.neg(c) for e, c in self.terms.items()})

    def __mul__(self, other):
        if not isinstance(other, MultiPoly):
            return self.scale(other)
        self._assert_compat(other)
        ring = self.ring
        out: Dict[tuple, object] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = _exp_add(e1, e2)
                c = ring.mul(c1, c2)
                if e in out:
                    c = ring.add(out[e], c)
                if ring.is_zero(c):
                    out.pop(e, None)
                else:
                    out[e] = c
        return MultiPoly(ring, self.varset, out)

    def scale(self, c) -> "MultiPoly":
        ring = self.ring
        c = ring.coerce(c)
        if ring.is_zero(c):
            return MultiPoly.zero(ring, self.varset)
        return MultiPoly(ring, self.varset,
                         {e: ring.mul(v, c) for e, v in self.terms.items()})

    def term_mul(self, exp: tuple, c) -> "MultiPoly":
        ring = self.ring
        return MultiPoly(ring, self.varset,
                         {_exp_add(e, exp): ring.mul(v, c) for e, v in self.terms.items()})

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative power")
        out = MultiPoly.constant(self.ring, self.varset, self.ring.one())
        base = self
        while n:
            if n & 1:
                out = out * base
            base_needed = n > 1
            if base_needed:
                base = base * base
            n >>= 1
        return out

    def __eq__(self, other):
        return (isinstance(other, MultiPoly) and self.ring == other.ring
                and self.varset == other.varset and self.terms == other.terms)

    def __hash__(self):
        return hash((self.ring, self.varset, frozenset(self.terms.items())))

    # -- structure -----------------------------------------------------------
    def homogeneous_parts(self) -> Dict[int, "MultiPoly"]:
        """Split by weighted degree."""
        out: Dict[int, Dict[tuple, object]] = {}
        for e, c in self.terms.items():
            out.setdefault(self.varset.weighted_degree(e), {})[e] = c
        return {d: MultiPoly(self.ring, self.varset, t) for d, t in sorted(out.items())}

    def monic(self, order: MonomialOrder) -> "MultiPoly":
        if self.is_zero():
            return self
        _, lc = self.leading(order)
        return self.scale(self.ring.inv(lc))

    def substitute(self, mapping: Dict[str, "MultiPoly"]) -> "MultiPoly":
        """Substitute polynomials for variables; unmapped variables persist."""
        if not mapping:
            return self
        some = next(iter(mapping.values()))
        ring, vs = some.ring, some.varset
        if ring != self.ring:
            raise ValueError("substitution requires matching coefficient rings")
        out = MultiPoly.zero(ring, vs)
        cache: Dict[Tuple[int, int], MultiPoly] = {}

        def power(i: int, n: int) -> MultiPoly:
            key = (i, n)
            if key not in cache:
                name = self.varset.names[i]
                if name in mapping:
                    base = mapping[name]
                else:
                    base = MultiPoly.variable(ring, vs, name)
                cache[key] = base ** n
            return cache[key]

        for e, c in self.terms.items():
            term = MultiPoly.constant(ring, vs, c)
            for i, n in enumerate(e):
                if n:
                    term = term * power(i, n)
            out = out + term
        return out

    def evaluate(self, point) -> object:
        """Evaluate at a tuple of ring payloads; returns a payload."""
        ring = self.ring
        acc = ring.zero()
        for e, c in self.terms.items():
            v = c
            for x, n in zip(point, e):
                for _ in range(n):
                    v = ring.mul(v, x)
            acc = ring.add(acc, v)
        return acc

    def map_coefficients(self, func, new_ring: BaseRing) -> "MultiPoly":
        out = {}
        for e, c in self.terms.items():
            nc = func(c)
            if not new_ring.is_zero(nc):
                out[e] = nc
        return MultiPoly(new_ring, self.varset, out)

    def rename(self, new_vs: VarSet) -> "MultiPoly":
        """Reinterpret over a varset containing all current variables."""
        idx = [new_vs.index(n) for n in self.varset.names]
        out = {}
        for e, c in self.terms.items():
            ne = [0] * len(new_vs)
            for i, v in zip(idx, e):
                ne[i] = v
            out[tuple(ne)] = c
        return MultiPoly(self.ring, new_vs, out)

    def restrict(self, new_vs: VarSet) -> "MultiPoly":
        """Project onto a smaller varset; fails if other variables occur."""
        idx = [self.varset.index(n) for n in new_vs.names]
        keep = set(idx)
        out = {}
        for e, c in self.terms.items():
            if any(v and i not in keep for i, v in enumerate(e)):
                raise ValueError("polynomial involves dropped variables")
            out[tuple(e[i] for i in idx)] = c
        return MultiPoly(self.ring, new_vs, out)

    def variables_used(self):
        used = set()
        for e in self.terms:
            for i, v in enumerate(e):
                if v:
                    used.add(self.varset.names[i])
        return used

    # -- printing ------------------------------------------------------------
    def __str__(self):
        return format_poly(self)

    def __repr__(self):
        return f"MultiPoly({format_poly(self)})"


# ---------------------------------------------------------------------------
# Printer / parser (round-trips exactly)


def _fmt_coeff(ring: BaseRing, c) -> str:
    s = ring.fmt(c)
    if isinstance(ring, QuotientRing) and ("+" in s or "*" in s or "^" in s):
        return f"({s})"
    return s


def format_poly(p: MultiPoly) -> str:
    if p.is_zero():
        return "0"
    ring = p.ring
    pieces = []
    for exp in sorted(p.terms, key=lambda e: (sum(e), e), reverse=True):
        c = p.terms[exp]
        mono = "*".join(
            (name if k == 1 else f"{name}^{k}")
            for name, k in zip(p.varset.names, exp) if k)
        cs = _fmt_coeff(ring, c)
        if not mono:
            body = cs
        elif cs == "1":
            body = mono
        elif cs == "-1":
            body = f"-{mono}"
        else:
            body = f"{cs}*{mono}"
        pieces.append(body)
    out = pieces[0]
    for piece in pieces[1:]:
        if piece.startswith("-"):
            out += f" - {piece[1:]}"
        else:
            out += f" + {piece}"
    return out


_TOKEN_RE = re.compile(
    r"\s*(?:(?P<num>\d+)|(?P<name>[A-Za-z_][A-Za-z_0-9]*)|(?P<op>[-+*/^()]))")


def _tokenize(text: str):
    pos, out = 0, []
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None or m.end() == pos:
            raise ValueError(f"cannot tokenize polynomial at {text[pos:]!r}")
        if m.group("num"):
            out.append(("num", int(m.group("num"))))
        elif m.group("name"):
            out.append(("name", m.group("name")))
        else:
            out.append(("op", m.group("op")))
        pos = m.end()
    return out


class _Parser:
    def __init__(self, tokens, ring: BaseRing, vs: VarSet):
        self.toks = tokens
        self.i = 0
        self.ring = ring
        self.vs = vs

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else (None, None)

    def take(self):
        t = self.peek()
        self.i += 1
        return t

    def parse(self) -> MultiPoly:
        p = self.parse_sum()
        if self.i != len(self.toks):
            raise ValueError("trailing input in polynomial")
        return p

    def parse_sum(self) -> MultiPoly:
        sign = 1
        kind, val = self.peek()
        if (kind, val) == ("op", "-"):
            self.take()
            sign = -1
        elif (kind, val) == ("op", "+"):
            self.take()
        p = self.parse_product()
        if sign < 0:
            p = -p
        while True:
            kind, val = self.peek()
            if (kind, val) == ("op", "+"):
                self.take()
                p = p + self.parse_product()
            elif (kind, val) == ("op", "-"):
                self.take()
                p = p - self.parse_product()
            else:
                return p

    def parse_product(self) -> MultiPoly:
        p = self.parse_factor()
        while True:
            kind, val = self.peek()
            if (kind, val) == ("op", "*"):
                self.take()
                p = p * self.parse_factor()
            elif kind in ("name",) or (kind, val) == ("op", "("):
                p = p * self.parse_factor()
            else:
                return p

    def parse_factor(self) -> MultiPoly:
        kind, val = self.take()
        if kind == "num":
            num = val
            k2, v2 = self.peek()
            if (k2, v2) == ("op", "/"):
                self.take()
                k3, v3 = self.take()
                if k3 != "num":
                    raise ValueError("expected denominator")
                if isinstance(self.ring, QuotientRing):
                    c = self.ring.mul(self.ring.from_int(num),
                                      self.ring.inv(self.ring.from_int(v3)))
                elif self.ring == QQ:
                    c = Fraction(num, v3)
                else:
                    c = self.ring.mul(self.ring.from_int(num),
                                      self.ring.inv(self.ring.from_int(v3)))
                return MultiPoly.constant(self.ring, self.vs, c)
            return self._maybe_power(MultiPoly.constant(self.ring, self.vs,
                                                        self.ring.from_int(num)))
        if kind == "name":
            if val == "t" and isinstance(self.ring, QuotientRing) and "t" not in self.vs.names:
                return self._maybe_power(
                    MultiPoly.constant(self.ring, self.vs, self.ring.gen()))
            if val not in self.vs.names:
                raise ValueError(f"undeclared variable {val!r}")
            return self._maybe_power(MultiPoly.variable(self.ring, self.vs, val))
        if (kind, val) == ("op", "("):
            p = self.parse_sum()
            kind, val = self.take()
            if (kind, val) != ("op", ")"):
                raise ValueError("expected ')'")
            return self._maybe_power(p)
        raise ValueError(f"unexpected token {val!r}")

    def _maybe_power(self, p: MultiPoly) -> MultiPoly:
        kind, val = self.peek()
        if (kind, val) == ("op", "^"):
            self.take()
            k2, v2 = self.take()
            if k2 != "num":
                raise ValueError("expected integer exponent")
            return p ** v2
        return p


def parse_poly(text: str, ring: BaseRing, vs: VarSet) -> MultiPoly:
    """Parse syntax like '3*x^2*y - 1/2*z'."""
    return _Parser(_tokenize(text), ring, vs).parse()
