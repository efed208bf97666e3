"""Exact scalars: sparse multivariate polynomials over Q and fractions of them.

A :class:`Scalar` is ``num/den`` with both parts :class:`Poly`.  There is no
multivariate gcd; two scalars are equal when ``n1*d2 - n2*d1`` is the zero
polynomial.  After every operation the denominator is made primitive with a
positive leading coefficient, shared monomial factors are cancelled, and an
exact polynomial division is attempted, which keeps most values small.

Monomials are tuples of ``(name, exponent)`` pairs sorted by name.  Terms are
ordered graded-lexicographically, with variables compared by name.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Mapping, Union

from .errors import (
    DenominatorVanishes,
    DivisionByZeroScalar,
    ParseError,
    UndeclaredParameter,
)

Monomial = tuple  # tuple[tuple[str, int], ...]
Number = Union[int, Fraction]

MAX_EXPONENT = 2**32 - 1
_SENTINEL = ("\U0010ffff",)


def _norm(c: Number) -> Number:
    if type(c) is Fraction and c.denominator == 1:
        return c.numerator
    return c


def _mono_mul(m1: Monomial, m2: Monomial) -> Monomial:
    if not m1:
        return m2
    if not m2:
        return m1
    d = dict(m1)
    for v, e in m2:
        d[v] = d.get(v, 0) + e
    return tuple(sorted(d.items()))


def _mono_div(m1: Monomial, m2: Monomial):
    """m1 / m2 if m2 divides m1, else None."""
    if not m2:
        return m1
    d = dict(m1)
    for v, e in m2:
        have = d.get(v, 0)
        if have < e:
            return None
        if have == e:
            del d[v]
        else:
            d[v] = have - e
    return tuple(sorted(d.items()))


@lru_cache(maxsize=65536)
def term_order_key(m: Monomial):
    """Sort key; ascending key order is descending graded-lex order."""
    return (-sum(e for _, e in m), tuple((v, -e) for v, e in m) + (_SENTINEL,))


def _mono_text(m: Monomial) -> str:
    return "*".join(v if e == 1 else f"{v}^{e}" for v, e in m)


def _rational_text(c: Number) -> str:
    c = Fraction(c)
    if c.denominator == 1:
        return str(c.numerator)
    return f"{c.numerator}/{c.denominator}"


class Poly:
    """Immutable sparse polynomial with rational coefficients."""

    __slots__ = ("terms", "_hash")

    def __init__(self, terms: Mapping[Monomial, Number] | None = None):
        self.terms = {m: _norm(c) for m, c in (terms or {}).items() if c != 0}
        self._hash = None

    @classmethod
    def _raw(cls, terms: dict) -> "Poly":
        # caller guarantees nonzero, normalized coefficients
        p = object.__new__(cls)
        p.terms = terms
        p._hash = None
        return p

    @classmethod
    def const(cls, c: Number) -> "Poly":
        return cls._raw({(): _norm(c)} if c != 0 else {})

    @classmethod
    def var(cls, name: str, exponent: int = 1) -> "Poly":
        if exponent == 0:
            return cls.const(1)
        return cls._raw({((name, exponent),): 1})

    # -- predicates ------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return not self.terms or (len(self.terms) == 1 and () in self.terms)

    def constant_value(self) -> Number:
        if not self.is_constant():
            raise ValueError("polynomial is not constant")
        return self.terms.get((), 0)

    def is_one(self) -> bool:
        return len(self.terms) == 1 and self.terms.get(()) == 1

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __len__(self) -> int:
        return len(self.terms)

    def variables(self) -> set[str]:
        return {v for m in self.terms for v, _ in m}

    def degree(self) -> int:
        return max((sum(e for _, e in m) for m in self.terms), default=0)

    def degree_in(self, name: str) -> int:
        return max((e for m in self.terms for v, e in m if v == name), default=0)

    # -- ordering --------------------------------------------------------
    def sorted_terms(self) -> list[tuple[Monomial, Number]]:
        return sorted(self.terms.items(), key=lambda t: term_order_key(t[0]))

    def leading(self) -> tuple[Monomial, Number]:
        m = min(self.terms, key=term_order_key)
        return m, self.terms[m]

    # -- arithmetic ------------------------------------------------------
    @staticmethod
    def _coerce(other) -> "Poly":
        if isinstance(other, Poly):
            return other
        if isinstance(other, (int, Fraction)):
            return Poly.const(other)
        return NotImplemented

    def __add__(self, other):
        other = Poly._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if not other.terms:
            return self
        if not self.terms:
            return other
        out = dict(self.terms)
        for m, c in other.terms.items():
            s = out.get(m, 0) + c
            if s == 0:
                out.pop(m, None)
            else:
                out[m] = _norm(s)
        return Poly._raw(out)

    __radd__ = __add__

    def __neg__(self) -> "Poly":
        return Poly._raw({m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        other = Poly._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = Poly._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            if other == 0:
                return ZERO_POLY
            return Poly._raw({m: _norm(c * other) for m, c in self.terms.items()})
        if not isinstance(other, Poly):
            return NotImplemented
        if not self.terms or not other.terms:
            return ZERO_POLY
        out: dict = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = _mono_mul(m1, m2)
                s = out.get(m, 0) + c1 * c2
                if s == 0:
                    out.pop(m, None)
                else:
                    out[m] = s
        return Poly._raw({m: _norm(c) for m, c in out.items()})

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "Poly":
        if n < 0:
            raise ValueError("negative exponent")
        result, base = ONE_POLY, self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def scale(self, c: Number) -> "Poly":
        return self * c

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = Poly.const(other)
        if not isinstance(other, Poly):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self.terms.items()))
        return self._hash

    # -- division helpers ------------------------------------------------
    def divide_exact(self, other: "Poly"):
        """Quotient if ``other`` divides ``self`` exactly, otherwise None."""
        if not other.terms:
            raise DivisionByZeroScalar("division by the zero polynomial")
        if not self.terms:
            return ZERO_POLY
        lm, lc = other.leading()
        rem = dict(self.terms)
        quot: dict = {}
        while rem:
            m = min(rem, key=term_order_key)
            qm = _mono_div(m, lm)
            if qm is None:
                return None
            qc = Fraction(rem[m]) / lc
            quot[qm] = _norm(qc)
            for om, oc in other.terms.items():
                pm = _mono_mul(qm, om)
                s = rem.get(pm, 0) - qc * oc
                if s == 0:
                    rem.pop(pm, None)
                else:
                    rem[pm] = s
        return Poly._raw(quot)

    def content(self) -> Fraction:
        """Positive rational content: gcd of numerators over lcm of denominators."""
        if not self.terms:
            return Fraction(0)
        g = 0
        l = 1
        for c in self.terms.values():
            c = Fraction(c)
            g = math.gcd(g, c.numerator)
            l = l * c.denominator // math.gcd(l, c.denominator)
        return Fraction(g, l)

    def monomial_gcd(self) -> Monomial:
        it = iter(self.terms)
        common = dict(next(it))
        for m in it:
            md = dict(m)
            for v in list(common):
                e = md.get(v, 0)
                if e == 0:
                    del common[v]
                elif e < common[v]:
                    common[v] = e
            if not common:
                break
        return tuple(sorted(common.items()))

    def div_monomial(self, m: Monomial) -> "Poly":
        return Poly._raw({_mono_div(k, m): c for k, c in self.terms.items()})

    # -- calculus / substitution -----------------------------------------
    def derivative(self, name: str) -> "Poly":
        out: dict = {}
        for m, c in self.terms.items():
            d = dict(m)
            e = d.get(name, 0)
            if e == 0:
                continue
            if e == 1:
                del d[name]
            else:
                d[name] = e - 1
            out[tuple(sorted(d.items()))] = _norm(c * e)
        return Poly._raw(out)

    def coefficient_split(self, name: str) -> tuple["Poly", "Poly"]:
        """(c1, c0) with self = c1*name + c0; requires degree_in(name) <= 1."""
        c1: dict = {}
        c0: dict = {}
        for m, c in self.terms.items():
            d = dict(m)
            e = d.pop(name, 0)
            if e > 1:
                raise ValueError(f"{name} occurs nonlinearly")
            (c1 if e == 1 else c0)[tuple(sorted(d.items()))] = c
        return Poly._raw(c1), Poly._raw(c0)

    def compose(self, bindings: Mapping[str, "Poly"]) -> "Poly":
        """Substitute polynomials for variables (unbound variables stay)."""
        powers: dict = {}

        def power(v: str, e: int) -> Poly:
            key = (v, e)
            if key not in powers:
                base = bindings[v] if v in bindings else Poly.var(v)
                powers[key] = base**e
            return powers[key]

        result = ZERO_POLY
        for m, c in self.terms.items():
            t = Poly.const(c)
            for v, e in m:
                t = t * power(v, e)
            result = result + t
        return result

    # -- text --------------------------------------------------------------
    def to_text(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for i, (m, c) in enumerate(self.sorted_terms()):
            neg = c < 0
            a = -c if neg else c
            if not m:
                body = _rational_text(a)
            elif a == 1:
                body = _mono_text(m)
            else:
                body = f"{_rational_text(a)}*{_mono_text(m)}"
            if i == 0:
                parts.append(f"-{body}" if neg else body)
            else:
                parts.append(f" - {body}" if neg else f" + {body}")
        return "".join(parts)

    def is_atom_text(self) -> bool:
        """True when the text form needs no parentheses as an operand of ``/``."""
        if len(self.terms) != 1:
            return False
        (m, c), = self.terms.items()
        if not m:
            return c > 0 and Fraction(c).denominator == 1
        return c == 1 and len(m) == 1 and m[0][1] == 1

    def __str__(self) -> str:
        return self.to_text()

    def __repr__(self) -> str:
        return f"Poly({self.to_text()!r})"


ZERO_POLY = Poly._raw({})
ONE_POLY = Poly._raw({(): 1})


def _normalize(num: Poly, den: Poly) -> tuple[Poly, Poly]:
    if not den.terms:
        raise DivisionByZeroScalar("division by a zero scalar")
    if not num.terms:
        return ZERO_POLY, ONE_POLY
    if den.is_constant():
        c = den.terms[()]
        return (num if c == 1 else num * (1 / Fraction(c))), ONE_POLY
    g = _mono_common(num, den)
    if g:
        num, den = num.div_monomial(g), den.div_monomial(g)
        if den.is_constant():
            return num * (1 / Fraction(den.terms[()])), ONE_POLY
    q = num.divide_exact(den)
    if q is not None:
        return q, ONE_POLY
    q = den.divide_exact(num)
    if q is not None:
        num, den = ONE_POLY, q
        if den.is_constant():
            return Poly.const(1 / Fraction(den.terms[()])), ONE_POLY
    _, lc = den.leading()
    k = den.content()
    if lc < 0:
        k = -k
    if k != 1:
        inv = 1 / k
        num, den = num * inv, den * inv
    return num, den


def _mono_common(a: Poly, b: Poly) -> Monomial:
    ga = dict(a.monomial_gcd())
    if not ga:
        return ()
    gb = dict(b.monomial_gcd())
    common = {v: min(e, gb[v]) for v, e in ga.items() if v in gb}
    return tuple(sorted(common.items()))


class Scalar:
    """Exact rational function ``num/den`` in named parameters."""

    __slots__ = ("num", "den")

    def __init__(self, num: Poly | Number = 0, den: Poly | Number = 1, _normalized: bool = False):
        if not isinstance(num, Poly):
            num = Poly.const(num)
        if not isinstance(den, Poly):
            den = Poly.const(den)
        if not _normalized:
            num, den = _normalize(num, den)
        self.num = num
        self.den = den

    @classmethod
    def poly(cls, p: Poly) -> "Scalar":
        return cls(p, ONE_POLY, _normalized=True)

    @classmethod
    def var(cls, name: str) -> "Scalar":
        return cls.poly(Poly.var(name))

    # -- predicates ------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.num.terms

    def __bool__(self) -> bool:
        return bool(self.num.terms)

    def is_constant(self) -> bool:
        return self.num.is_constant() and self.den.is_one()

    def constant_value(self) -> Fraction:
        if not self.is_constant():
            raise ValueError(f"{self} is not a constant")
        return Fraction(self.num.terms.get((), 0))

    def is_polynomial(self) -> bool:
        return self.den.is_one()

    def variables(self) -> set[str]:
        return self.num.variables() | self.den.variables()

    def size(self) -> int:
        return len(self.num) + len(self.den)

    # -- arithmetic ------------------------------------------------------
    @staticmethod
    def _coerce(other) -> "Scalar":
        if isinstance(other, Scalar):
            return other
        if isinstance(other, (int, Fraction)):
            return Scalar(Poly.const(other), ONE_POLY, _normalized=True)
        if isinstance(other, Poly):
            return Scalar.poly(other)
        return NotImplemented

    def __add__(self, other):
        o = Scalar._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        if not o.num.terms:
            return self
        if not self.num.terms:
            return o
        if self.den.is_one() and o.den.is_one():
            return Scalar(self.num + o.num, ONE_POLY, _normalized=True)
        if self.den == o.den:
            return Scalar(self.num + o.num, self.den)
        return Scalar(self.num * o.den + o.num * self.den, self.den * o.den)

    __radd__ = __add__

    def __neg__(self) -> "Scalar":
        return Scalar(-self.num, self.den, _normalized=True)

    def __sub__(self, other):
        o = Scalar._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = Scalar._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        o = Scalar._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        if not self.num.terms or not o.num.terms:
            return ZERO
        if self.den.is_one() and o.den.is_one():
            return Scalar(self.num * o.num, ONE_POLY, _normalized=True)
        return Scalar(self.num * o.num, self.den * o.den)

    __rmul__ = __mul__

    def inverse(self) -> "Scalar":
        if not self.num.terms:
            raise DivisionByZeroScalar("division by a zero scalar")
        return Scalar(self.den, self.num)

    def __truediv__(self, other):
        o = Scalar._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        if not o.num.terms:
            raise DivisionByZeroScalar("division by a zero scalar")
        return Scalar(self.num * o.den, self.den * o.num)

    def __rtruediv__(self, other):
        o = Scalar._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return o / self

    def __pow__(self, n: int) -> "Scalar":
        if n < 0:
            return self.inverse() ** (-n)
        return Scalar(self.num**n, self.den**n)

    def __eq__(self, other) -> bool:
        o = Scalar._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        if self.den == o.den:
            return self.num == o.num
        return not (self.num * o.den - o.num * self.den).terms

    __hash__ = None  # equality is by cross-multiplication, not representation

    # -- substitution ------------------------------------------------------
    def substitute(self, bindings: Mapping[str, "Scalar | Number"]) -> "Scalar":
        b = {k: Scalar._coerce(v) for k, v in bindings.items()}
        den = _poly_substitute(self.den, b)
        if den.is_zero():
            raise DenominatorVanishes(
                f"denominator {self.den.to_text()} vanishes under the substitution"
            )
        return _poly_substitute(self.num, b) / den

    # -- text --------------------------------------------------------------
    def to_text(self) -> str:
        if self.den.is_one():
            return self.num.to_text()
        n = self.num.to_text()
        d = self.den.to_text()
        if not self.num.is_atom_text():
            n = f"({n})"
        if not self.den.is_atom_text():
            d = f"({d})"
        return f"{n}/{d}"

    def __str__(self) -> str:
        return self.to_text()

    def __repr__(self) -> str:
        return f"Scalar({self.to_text()!r})"


ZERO = Scalar(ZERO_POLY, ONE_POLY, _normalized=True)
ONE = Scalar(ONE_POLY, ONE_POLY, _normalized=True)


def as_scalar(x) -> Scalar:
    if isinstance(x, str):
        return parse_scalar(x, None)
    s = Scalar._coerce(x)
    if s is NotImplemented:
        raise TypeError(f"cannot interpret {x!r} as a scalar")
    return s


def _poly_substitute(p: Poly, bindings: Mapping[str, Scalar]) -> Scalar:
    if not bindings or not (p.variables() & bindings.keys()):
        return Scalar.poly(p)
    cache: dict = {}
    total = ZERO
    for m, c in p.terms.items():
        t = Scalar._coerce(c)
        for v, e in m:
            if (v, e) not in cache:
                cache[(v, e)] = (bindings[v] if v in bindings else Scalar.var(v)) ** e
            t = t * cache[(v, e)]
        total = total + t
    return total


# ---------------------------------------------------------------------------
# operation-style entry points
# ---------------------------------------------------------------------------

def scalar_arith(a: Scalar, b: Scalar | None, op: str) -> Scalar:
    if op == "neg":
        return -a
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        return a / b
    raise ValueError(f"unknown operation {op!r}")


def scalar_is_zero(a: Scalar) -> bool:
    return a.is_zero()


def substitute(a: Scalar, bindings: Mapping[str, Scalar | Number]) -> Scalar:
    return a.substitute(bindings)


def serialize(a: Scalar) -> str:
    return a.to_text()


def solve_for(expr: Scalar, name: str) -> Scalar:
    """Value of ``name`` making ``expr`` vanish; ``expr`` must be linear in it."""
    c1, c0 = expr.num.coefficient_split(name)
    if c1.is_zero():
        raise ValueError(f"{name} does not occur in {expr}")
    return Scalar(-c0, c1)


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------

_BINARY = {"+": 1, "-": 1, "*": 2, "/": 2}


class _Token:
    __slots__ = ("kind", "value", "offset")

    def __init__(self, kind: str, value, offset: int):
        self.kind = kind
        self.value = value
        self.offset = offset


def tokenize(text: str) -> list[_Token]:
    tokens = []
    i = 0
    n = len(text)

    def byte_offset(k: int) -> int:
        return len(text[:k].encode("utf-8"))

    while i < n:
        ch = text[i]
        if ch.isspace():
            i += 1
        elif ch.isascii() and ch.isdigit():
            j = i
            while j < n and text[j].isascii() and text[j].isdigit():
                j += 1
            tokens.append(_Token("num", int(text[i:j]), byte_offset(i)))
            i = j
        elif ch.isascii() and (ch.isalpha() or ch == "_"):
            j = i
            while j < n and text[j].isascii() and (text[j].isalnum() or text[j] == "_"):
                j += 1
            tokens.append(_Token("id", text[i:j], byte_offset(i)))
            i = j
        elif ch in "+-*/^()":
            tokens.append(_Token("op", ch, byte_offset(i)))
            i += 1
        else:
            raise ParseError(f"unexpected character {ch!r}", byte_offset(i))
    tokens.append(_Token("end", None, byte_offset(n)))
    return tokens


class _Parser:
    """Precedence climbing over + - (1) and * / (2); prefix sign and ^ bind tighter."""

    def __init__(self, text: str, declared: Iterable[str] | None):
        self.tokens = tokenize(text)
        self.pos = 0
        self.declared = None if declared is None else set(declared)
        self.identifiers: list[str] = []

    def peek(self) -> _Token:
        return self.tokens[self.pos]

    def advance(self) -> _Token:
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def parse(self) -> Scalar:
        value = self.expression(1)
        tok = self.peek()
        if tok.kind != "end":
            raise ParseError(f"unexpected {tok.value!r}", tok.offset)
        return value

    def expression(self, min_prec: int) -> Scalar:
        lhs = self.unary()
        while True:
            tok = self.peek()
            if tok.kind != "op" or tok.value not in _BINARY:
                return lhs
            prec = _BINARY[tok.value]
            if prec < min_prec:
                return lhs
            self.advance()
            rhs = self.expression(prec + 1)
            if tok.value == "+":
                lhs = lhs + rhs
            elif tok.value == "-":
                lhs = lhs - rhs
            elif tok.value == "*":
                lhs = lhs * rhs
            else:
                if rhs.is_zero():
                    raise DivisionByZeroScalar(f"division by zero at byte {tok.offset}")
                lhs = lhs / rhs

    def unary(self) -> Scalar:
        tok = self.peek()
        if tok.kind == "op" and tok.value in "+-":
            self.advance()
            operand = self.unary()
            return -operand if tok.value == "-" else operand
        return self.power()

    def power(self) -> Scalar:
        base = self.atom()
        tok = self.peek()
        if tok.kind == "op" and tok.value == "^":
            self.advance()
            exp = self.advance()
            if exp.kind != "num":
                raise ParseError("exponent must be a nonnegative integer literal", exp.offset)
            if exp.value > MAX_EXPONENT:
                raise ParseError("exponent out of range", exp.offset)
            base = base**exp.value
        return base

    def atom(self) -> Scalar:
        tok = self.advance()
        if tok.kind == "num":
            return Scalar(Poly.const(tok.value), ONE_POLY, _normalized=True)
        if tok.kind == "id":
            if self.declared is not None and tok.value not in self.declared:
                raise UndeclaredParameter(tok.value)
            self.identifiers.append(tok.value)
            return Scalar.var(tok.value)
        if tok.kind == "op" and tok.value == "(":
            inner = self.expression(1)
            close = self.advance()
            if close.kind != "op" or close.value != ")":
                raise ParseError("expected ')'", close.offset)
            return inner
        if tok.kind == "end":
            raise ParseError("unexpected end of input", tok.offset)
        raise ParseError(f"unexpected {tok.value!r}", tok.offset)


def parse_scalar(text: str, declared_params: Iterable[str] | None) -> Scalar:
    """Parse ``text``; ``declared_params=None`` accepts any identifier."""
    return _Parser(text, declared_params).parse()


def identifiers_in(text: str) -> list[str]:
    """Identifiers of ``text`` in order of first appearance."""
    seen: list[str] = []
    for tok in tokenize(text):
        if tok.kind == "id" and tok.value not in seen:
            seen.append(tok.value)
    return seen
