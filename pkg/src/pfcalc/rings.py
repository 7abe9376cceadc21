"""Exact coefficient rings: ZZ, QQ, prime fields, and univariate quotients.

Every ring value is kept in a canonical form so that equality is plain
syntactic equality: fractions are reduced with positive denominator,
residues live in [0, p), and quotient-ring values are reduced modulo the
defining polynomial.  Ring objects and elements are immutable.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Tuple


class RingMismatch(ValueError):
    """Raised when two elements of different rings are combined."""


class NotAUnit(ArithmeticError):
    """Raised when inverting a non-unit; the message names the element."""


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


class BaseRing:
    """Common interface; payloads are raw Python values, see subclasses."""

    kind: str

    # -- payload arithmetic -------------------------------------------------
    def add(self, a, b):
        raise NotImplementedError

    def sub(self, a, b):
        raise NotImplementedError

    def mul(self, a, b):
        raise NotImplementedError

    def neg(self, a):
        raise NotImplementedError

    def inv(self, a):
        raise NotImplementedError

    def zero(self):
        raise NotImplementedError

    def one(self):
        raise NotImplementedError

    def from_int(self, n: int):
        raise NotImplementedError

    def is_zero(self, a) -> bool:
        return a == self.zero()

    def is_unit(self, a) -> bool:
        try:
            self.inv(a)
            return True
        except NotAUnit:
            return False

    # -- structure ----------------------------------------------------------
    def characteristic(self) -> int:
        raise NotImplementedError

    def is_domain(self) -> bool:
        raise NotImplementedError

    def is_field(self) -> bool:
        return False

    def tag(self) -> str:
        raise NotImplementedError

    # Base field used for linear algebra over this ring (QQ or Fp), together
    # with a basis of the ring over that field.
    def scalar_field(self) -> "BaseRing":
        raise NotImplementedError

    def field_basis(self) -> Tuple[Any, ...]:
        raise NotImplementedError

    def field_coords(self, a) -> Tuple[Any, ...]:
        """Coordinates of a payload with respect to field_basis()."""
        raise NotImplementedError

    def from_field_coords(self, coords) -> Any:
        out = self.zero()
        for c, b in zip(coords, self.field_basis()):
            out = self.add(out, self.scale_by_scalar(b, c))
        return out

    def scale_by_scalar(self, a, c):
        """Multiply a payload by a scalar of scalar_field()."""
        raise NotImplementedError

    def elem(self, x) -> "RingElem":
        return RingElem(self, self.coerce(x))

    def coerce(self, x):
        if isinstance(x, RingElem):
            if x.ring != self:
                raise RingMismatch(f"cannot coerce element of {x.ring.tag()} into {self.tag()}")
            return x.payload
        if isinstance(x, int):
            return self.from_int(x)
        raise TypeError(f"cannot coerce {x!r} into {self.tag()}")

    def fmt(self, a) -> str:
        return str(a)

    def __repr__(self):
        return self.tag()


@dataclass(frozen=True)
class RingElem:
    """An element of a BaseRing in canonical form."""

    ring: BaseRing
    payload: Any

    def _check(self, other: "RingElem"):
        if not isinstance(other, RingElem):
            other = self.ring.elem(other)
        if other.ring != self.ring:
            raise RingMismatch(
                f"ring mismatch: {self.ring.tag()} vs {other.ring.tag()}")
        return other

    def __add__(self, other):
        other = self._check(other)
        return RingElem(self.ring, self.ring.add(self.payload, other.payload))

    def __sub__(self, other):
        other = self._check(other)
        return RingElem(self.ring, self.ring.sub(self.payload, other.payload))

    def __mul__(self, other):
        other = self._check(other)
        return RingElem(self.ring, self.ring.mul(self.payload, other.payload))

    def __neg__(self):
        return RingElem(self.ring, self.ring.neg(self.payload))

    def inverse(self) -> "RingElem":
        return RingElem(self.ring, self.ring.inv(self.payload))

    def is_zero(self) -> bool:
        return self.ring.is_zero(self.payload)

    def is_unit(self) -> bool:
        return self.ring.is_unit(self.payload)

    def __str__(self):
        return self.ring.fmt(self.payload)

    def __repr__(self):
        return f"{self.ring.fmt(self.payload)} in {self.ring.tag()}"


def arith(a: RingElem, b: RingElem, op: str) -> RingElem:
    """Exact ring arithmetic; op is one of 'add', 'sub', 'mul'."""
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    raise ValueError(f"unknown op {op!r}")


def inverse(a: RingElem) -> RingElem:
    return a.inverse()


class IntegerRing(BaseRing):
    kind = "IntegerRing"

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def mul(self, a, b):
        return a * b

    def neg(self, a):
        return -a

    def inv(self, a):
        if a in (1, -1):
            return a
        raise NotAUnit(f"{a} is not a unit in ZZ")

    def zero(self):
        return 0

    def one(self):
        return 1

    def from_int(self, n):
        return n

    def characteristic(self):
        return 0

    def is_domain(self):
        return True

    def tag(self):
        return "ZZ"

    def scalar_field(self):
        return QQ

    def field_basis(self):
        return (1,)

    def field_coords(self, a):
        return (Fraction(a),)

    def scale_by_scalar(self, a, c):
        v = Fraction(a) * c
        if v.denominator != 1:
            raise ValueError("non-integral scalar multiple in ZZ")
        return v.numerator

    def __eq__(self, other):
        return isinstance(other, IntegerRing)

    def __hash__(self):
        return hash("ZZ")


class RationalField(BaseRing):
    kind = "RationalField"

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def mul(self, a, b):
        return a * b

    def neg(self, a):
        return -a

    def inv(self, a):
        if a == 0:
            raise NotAUnit("0 is not a unit in QQ")
        return 1 / a

    def zero(self):
        return Fraction(0)

    def one(self):
        return Fraction(1)

    def from_int(self, n):
        return Fraction(n)

    def coerce(self, x):
        if isinstance(x, Fraction):
            return x
        return super().coerce(x)

    def characteristic(self):
        return 0

    def is_domain(self):
        return True

    def is_field(self):
        return True

    def tag(self):
        return "QQ"

    def scalar_field(self):
        return self

    def field_basis(self):
        return (Fraction(1),)

    def field_coords(self, a):
        return (a,)

    def scale_by_scalar(self, a, c):
        return a * c

    def __eq__(self, other):
        return isinstance(other, RationalField)

    def __hash__(self):
        return hash("QQ")


class PrimeField(BaseRing):
    kind = "PrimeField"

    def __init__(self, p: int):
        if not is_prime(p):
            raise ValueError(f"{p} is not prime")
        self.p = p

    def add(self, a, b):
        return (a + b) % self.p

    def sub(self, a, b):
        return (a - b) % self.p

    def mul(self, a, b):
        return (a * b) % self.p

    def neg(self, a):
        return (-a) % self.p

    def inv(self, a):
        a %= self.p
        if a == 0:
            raise NotAUnit(f"0 is not a unit in {self.tag()}")
        return pow(a, self.p - 2, self.p)

    def zero(self):
        return 0

    def one(self):
        return 1 % self.p

    def from_int(self, n):
        return n % self.p

    def characteristic(self):
        return self.p

    def is_domain(self):
        return True

    def is_field(self):
        return True

    def tag(self):
        return f"Fp({self.p})"

    def scalar_field(self):
        return self

    def field_basis(self):
        return (1,)

    def field_coords(self, a):
        return (a % self.p,)

    def scale_by_scalar(self, a, c):
        return (a * c) % self.p

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self):
        return hash(("Fp", self.p))


def _poly_trim(cs: tuple) -> tuple:
    n = len(cs)
    while n > 0 and cs[n - 1] == 0:
        n -= 1
    return cs[:n]


def _poly_divmod(num, den, field: BaseRing):
    """Division of coefficient tuples (low-to-high) over a field."""
    num = list(num)
    q = [field.zero()] * max(0, len(num) - len(den) + 1)
    inv_lead = field.inv(den[-1])
    for i in range(len(num) - len(den), -1, -1):
        c = field.mul(num[i + len(den) - 1], inv_lead)
        q[i] = c
        for j, d in enumerate(den):
            num[i + j] = field.sub(num[i + j], field.mul(c, d))
    return tuple(q), _poly_trim(tuple(num))


class QuotientRing(BaseRing):
    """k[t]/(f) for k = QQ or Fp; payloads are coefficient tuples of deg < deg f."""

    kind = "QuotientRing"

    def __init__(self, base: BaseRing, modulus: Tuple[Any, ...]):
        if not (isinstance(base, (RationalField, PrimeField))):
            raise ValueError("quotient base must be QQ or a prime field")
        modulus = _poly_trim(tuple(base.coerce(c) for c in modulus))
        if len(modulus) < 2:
            raise ValueError("modulus must have degree >= 1")
        if not base.is_unit(modulus[-1]):
            raise ValueError("modulus must have unit leading coefficient")
        # normalize to a monic modulus
        il = base.inv(modulus[-1])
        self.base = base
        self.modulus = tuple(base.mul(c, il) for c in modulus)
        self.deg = len(self.modulus) - 1

    def _reduce(self, cs) -> tuple:
        cs = _poly_trim(tuple(cs))
        if len(cs) <= self.deg:
            return cs + (self.base.zero(),) * (self.deg - len(cs))
        _, r = _poly_divmod(cs, self.modulus, self.base)
        return r + (self.base.zero(),) * (self.deg - len(r))

    def add(self, a, b):
        return tuple(self.base.add(x, y) for x, y in zip(a, b))

    def sub(self, a, b):
        return tuple(self.base.sub(x, y) for x, y in zip(a, b))

    def mul(self, a, b):
        out = [self.base.zero()] * (2 * self.deg - 1)
        for i, x in enumerate(a):
            if self.base.is_zero(x):
                continue
            for j, y in enumerate(b):
                out[i + j] = self.base.add(out[i + j], self.base.mul(x, y))
        return self._reduce(out)

    def neg(self, a):
        return tuple(self.base.neg(x) for x in a)

    def inv(self, a):
        # extended Euclid in k[t] against the modulus
        r0, r1 = self.modulus, _poly_trim(tuple(a))
        if not r1:
            raise NotAUnit(f"0 is not a unit in {self.tag()}")
        s0, s1 = (), (self.base.one(),)
        while r1:
            q, r = _poly_divmod(r0, r1, self.base)
            s = self._poly_sub(s0, self._poly_mul(q, s1))
            r0, r1, s0, s1 = r1, r, s1, s
        if len(r0) != 1:
            raise NotAUnit(f"{self.fmt(a)} is not a unit in {self.tag()}")
        c = self.base.inv(r0[0])
        return self._reduce(tuple(self.base.mul(c, x) for x in s0))

    def _poly_mul(self, a, b):
        if not a or not b:
            return ()
        out = [self.base.zero()] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            for j, y in enumerate(b):
                out[i + j] = self.base.add(out[i + j], self.base.mul(x, y))
        return _poly_trim(tuple(out))

    def _poly_sub(self, a, b):
        n = max(len(a), len(b))
        z = self.base.zero()
        a = a + (z,) * (n - len(a))
        b = b + (z,) * (n - len(b))
        return _poly_trim(tuple(self.base.sub(x, y) for x, y in zip(a, b)))

    def zero(self):
        return (self.base.zero(),) * self.deg

    def one(self):
        return (self.base.one(),) + (self.base.zero(),) * (self.deg - 1)

    def gen(self):
        """The class of t."""
        if self.deg == 1:
            return self._reduce((self.base.zero(), self.base.one()))
        out = [self.base.zero()] * self.deg
        out[1] = self.base.one()
        return tuple(out)

    def from_int(self, n):
        return (self.base.from_int(n),) + (self.base.zero(),) * (self.deg - 1)

    def coerce(self, x):
        if isinstance(x, tuple):
            return self._reduce(tuple(self.base.coerce(c) for c in x))
        if isinstance(x, str):
            return parse_quotient_payload(self, x)
        return super().coerce(x)

    def characteristic(self):
        return self.base.characteristic()

    def is_domain(self):
        return _modulus_irreducible(self.base, self.modulus)

    def is_field(self):
        return self.is_domain()

    def tag(self):
        return f"{self.base.tag()}[t]/({_fmt_unipoly(self.base, self.modulus)})"

    def scalar_field(self):
        return self.base

    def field_basis(self):
        out = []
        for i in range(self.deg):
            cs = [self.base.zero()] * self.deg
            cs[i] = self.base.one()
            out.append(tuple(cs))
        return tuple(out)

    def field_coords(self, a):
        return tuple(a)

    def scale_by_scalar(self, a, c):
        return tuple(self.base.mul(x, c) for x in a)

    def fmt(self, a):
        return _fmt_unipoly(self.base, _poly_trim(tuple(a))) or "0"

    def __eq__(self, other):
        return (isinstance(other, QuotientRing) and other.base == self.base
                and other.modulus == self.modulus)

    def __hash__(self):
        return hash(("Quot", self.base, self.modulus))


def _modulus_irreducible(base: BaseRing, modulus: tuple) -> bool:
    deg = len(modulus) - 1
    if deg == 1:
        return True
    if isinstance(base, PrimeField):
        p = base.p
        # trial division by monic polynomials of degree up to deg // 2
        for d in range(1, deg // 2 + 1):
            for code in range(p ** d):
                cs = []
                c = code
                for _ in range(d):
                    cs.append(c % p)
                    c //= p
                cand = tuple(cs) + (1,)
                _, r = _poly_divmod(modulus, cand, base)
                if not r:
                    return False
        return True
    # QQ: defer to sympy for irreducibility of the modulus
    import sympy

    t = sympy.Symbol("t")
    f = sum(sympy.Rational(c) * t ** i for i, c in enumerate(modulus))
    return sympy.Poly(f, t, domain="QQ").is_irreducible


def _fmt_unipoly(base: BaseRing, cs: tuple) -> str:
    parts = []
    for i, c in enumerate(cs):
        if base.is_zero(c):
            continue
        if i == 0:
            parts.append(base.fmt(c))
        else:
            tp = "t" if i == 1 else f"t^{i}"
            if c == base.one():
                parts.append(tp)
            else:
                parts.append(f"{base.fmt(c)}*{tp}")
    return " + ".join(parts)


def parse_quotient_payload(ring: QuotientRing, text: str):
    """Parse expressions like '1 + t', '2*t^2', 't' into a payload."""
    base = ring.base
    cs = [base.zero()] * (ring.deg + 4)
    for piece in re.split(r"\+", text.replace("-", "+-")):
        piece = piece.strip()
        if not piece:
            continue
        neg = piece.startswith("-")
        if neg:
            piece = piece[1:].strip()
        m = re.fullmatch(r"(?:(\d+(?:/\d+)?)\*?)?(t(?:\^(\d+))?)?", piece)
        if m is None or (m.group(1) is None and m.group(2) is None):
            raise ValueError(f"cannot parse ring element {text!r}")
        if m.group(1) is None:
            coeff = base.one()
        elif "/" in m.group(1):
            num, den = m.group(1).split("/")
            coeff = base.mul(base.from_int(int(num)), base.inv(base.from_int(int(den))))
        else:
            coeff = base.from_int(int(m.group(1)))
        if m.group(2) is None:
            power = 0
        elif m.group(3) is None:
            power = 1
        else:
            power = int(m.group(3))
        if neg:
            coeff = base.neg(coeff)
        while power >= len(cs):
            cs.append(base.zero())
        cs[power] = base.add(cs[power], coeff)
    return ring._reduce(tuple(cs))


ZZ = IntegerRing()
QQ = RationalField()


def Fp(p: int) -> PrimeField:
    return PrimeField(p)


def fraction_field_reduction(r: BaseRing, p: int) -> BaseRing:
    """The residue field of ZZ at (p): QQ for p = 0, Fp otherwise."""
    if not isinstance(r, IntegerRing):
        raise ValueError("fraction_field_reduction expects the integers")
    if p == 0:
        return QQ
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    return PrimeField(p)


def residue_map(target: BaseRing):
    """The induced map ZZ -> K_p on elements."""

    def f(a) -> RingElem:
        if isinstance(a, RingElem):
            a = a.payload
        return target.elem(target.from_int(a))

    return f


_TAG_RE = re.compile(
    r"^(ZZ|QQ|Fp\((\d+)\))(?:\[t\]/\((.+)\))?$")


def ring_from_tag(tag: str) -> BaseRing:
    """Parse a textual ring tag like 'QQ', 'Fp(7)', 'QQ[t]/(t^2)'."""
    tag = tag.strip().replace(" ", "")
    m = _TAG_RE.match(tag)
    if m is None:
        raise ValueError(f"unknown ring tag {tag!r}")
    if m.group(2) is not None:
        base: BaseRing = PrimeField(int(m.group(2)))
    elif m.group(1) == "ZZ":
        base = ZZ
    else:
        base = QQ
    if m.group(3) is None:
        return base
    if base is ZZ:
        raise ValueError("quotient rings over ZZ are not supported")
    # parse the modulus using a provisional quotient of large degree
    text = m.group(3)
    deg = 0
    for mm in re.finditer(r"t(?:\^(\d+))?", text):
        deg = max(deg, int(mm.group(1)) if mm.group(1) else 1)
    if deg < 1:
        raise ValueError(f"modulus in {tag!r} must involve t")
    scratch = QuotientRing.__new__(QuotientRing)
    scratch.base = base
    scratch.deg = deg + 1
    scratch.modulus = (base.zero(),) * (deg + 1) + (base.one(),)
    payload = parse_quotient_payload(scratch, text)
    return QuotientRing(base, _poly_trim(payload))
