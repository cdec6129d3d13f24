# app/scalars.py
"""
Exact scalars: rationals and multivariate polynomials over Q in named indeterminates.

A `Poly` is an immutable sparse map from monomials to nonzero Fractions. A monomial is a
tuple of (name, exponent) pairs sorted by name, with every exponent positive; the empty
tuple is the constant monomial. Structural equality is mathematical equality.

Canonical text lists terms in graded-lex order (total degree first, then exponents read
over the alphabetically sorted names), highest first, e.g. ``2*t^2 - 1/3``.
"""
from __future__ import annotations

import re
from fractions import Fraction
from typing import Dict, Iterable, Iterator, List, Mapping, Tuple, Union

import sympy

from app.errors import ScalarParseError

Monomial = Tuple[Tuple[str, int], ...]
ScalarLike = Union["Poly", int, Fraction, str]

_CONST: Monomial = ()


def mono_mul(a: Monomial, b: Monomial) -> Monomial:
    if not a:
        return b
    if not b:
        return a
    out: List[Tuple[str, int]] = []
    i = j = 0
    while i < len(a) and j < len(b):
        na, ea = a[i]
        nb, eb = b[j]
        if na == nb:
            out.append((na, ea + eb))
            i += 1
            j += 1
        elif na < nb:
            out.append(a[i])
            i += 1
        else:
            out.append(b[j])
            j += 1
    out.extend(a[i:])
    out.extend(b[j:])
    return tuple(out)


def _mono_degree(m: Monomial) -> int:
    return sum(e for _, e in m)


def _mono_text(m: Monomial) -> str:
    return "*".join(name if e == 1 else f"{name}^{e}" for name, e in m)


def _frac_text(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


class Poly:
    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping[Monomial, Fraction] | None = None):
        self._terms: Dict[Monomial, Fraction] = {m: c for m, c in (terms or {}).items() if c != 0}
        self._hash: int | None = None

    # -- construction -------------------------------------------------
    @classmethod
    def const(cls, value: int | Fraction) -> "Poly":
        value = Fraction(value)
        return cls({_CONST: value}) if value else ZERO

    @classmethod
    def var(cls, name: str) -> "Poly":
        return cls({((name, 1),): Fraction(1)})

    # -- inspection ---------------------------------------------------
    @property
    def terms(self) -> Mapping[Monomial, Fraction]:
        return self._terms

    @property
    def is_zero(self) -> bool:
        return not self._terms

    @property
    def is_constant(self) -> bool:
        return not self._terms or (len(self._terms) == 1 and _CONST in self._terms)

    @property
    def constant(self) -> Fraction:
        """Value of a constant polynomial. Raises ValueError when indeterminates occur."""
        if not self.is_constant:
            raise ValueError(f"{self} is not constant")
        return self._terms.get(_CONST, Fraction(0))

    @property
    def total_degree(self) -> int:
        return max((_mono_degree(m) for m in self._terms), default=0)

    def names(self) -> Tuple[str, ...]:
        return tuple(sorted({n for m in self._terms for n, _ in m}))

    def __len__(self) -> int:
        return len(self._terms)

    def ordered_terms(self) -> List[Tuple[Monomial, Fraction]]:
        names = self.names()

        def key(item: Tuple[Monomial, Fraction]):
            exps = dict(item[0])
            return (_mono_degree(item[0]), tuple(exps.get(n, 0) for n in names))

        return sorted(self._terms.items(), key=key, reverse=True)

    # -- arithmetic ---------------------------------------------------
    def __add__(self, other: ScalarLike) -> "Poly":
        other = as_scalar(other)
        if not other._terms:
            return self
        if not self._terms:
            return other
        out = dict(self._terms)
        for m, c in other._terms.items():
            out[m] = out.get(m, 0) + c
        return Poly(out)

    __radd__ = __add__

    def __neg__(self) -> "Poly":
        return Poly({m: -c for m, c in self._terms.items()})

    def __sub__(self, other: ScalarLike) -> "Poly":
        return self + (-as_scalar(other))

    def __rsub__(self, other: ScalarLike) -> "Poly":
        return as_scalar(other) - self

    def scale(self, c: int | Fraction) -> "Poly":
        if c == 0:
            return ZERO
        if c == 1:
            return self
        return Poly({m: v * c for m, v in self._terms.items()})

    def __mul__(self, other: ScalarLike) -> "Poly":
        other = as_scalar(other)
        if not self._terms or not other._terms:
            return ZERO
        if other.is_constant:
            return self.scale(other._terms[_CONST])
        if self.is_constant:
            return other.scale(self._terms[_CONST])
        out: Dict[Monomial, Fraction] = {}
        for ma, ca in self._terms.items():
            for mb, cb in other._terms.items():
                m = mono_mul(ma, mb)
                out[m] = out.get(m, 0) + ca * cb
        return Poly(out)

    __rmul__ = __mul__

    def __pow__(self, exp: int) -> "Poly":
        if exp < 0:
            raise ValueError("negative exponent")
        out, base = ONE, self
        while exp:
            if exp & 1:
                out = out * base
            base = base * base
            exp >>= 1
        return out

    # -- comparison ---------------------------------------------------
    def __eq__(self, other: object) -> bool:
        if isinstance(other, Poly):
            return self._terms == other._terms
        if isinstance(other, (int, Fraction)):
            return self.is_constant and self.constant == other
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    def __bool__(self) -> bool:
        return bool(self._terms)

    # -- text ---------------------------------------------------------
    def __str__(self) -> str:
        if not self._terms:
            return "0"
        parts: List[str] = []
        for idx, (m, c) in enumerate(self.ordered_terms()):
            mag = abs(c)
            if not m:
                body = _frac_text(mag)
            elif mag == 1:
                body = _mono_text(m)
            else:
                body = f"{_frac_text(mag)}*{_mono_text(m)}"
            if idx == 0:
                parts.append(f"-{body}" if c < 0 else body)
            else:
                parts.append(f" - {body}" if c < 0 else f" + {body}")
        return "".join(parts)

    def __repr__(self) -> str:
        return f"Poly({str(self)!r})"


ZERO = Poly()
ONE = Poly({_CONST: Fraction(1)})


def as_scalar(x: ScalarLike) -> Poly:
    if isinstance(x, Poly):
        return x
    if isinstance(x, bool):
        raise TypeError("bool is not a scalar")
    if isinstance(x, (int, Fraction)):
        return Poly.const(x)
    if isinstance(x, str):
        return parse_scalar(x)
    raise TypeError(f"cannot use {type(x).__name__} as a scalar")


def substitute(p: Poly, bindings: Mapping[str, ScalarLike]) -> Poly:
    """Replace named indeterminates by scalars; unbound names stay symbolic."""
    if p.is_constant or not bindings:
        return p
    bound = {k: as_scalar(v) for k, v in bindings.items()}
    out = ZERO
    for m, c in p.terms.items():
        term = Poly.const(c)
        for name, e in m:
            term = term * ((bound[name] if name in bound else Poly.var(name)) ** e)
        out = out + term
    return out


def is_identically_zero(p: Poly) -> bool:
    return p.is_zero


def evaluate(p: Poly, values: Mapping[str, int | Fraction]) -> Fraction:
    """Numeric value at a full assignment of the indeterminates."""
    total = Fraction(0)
    for m, c in p.terms.items():
        term = c
        for name, e in m:
            term *= Fraction(values[name]) ** e
        total += term
    return total


# -- parsing -----------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(?P<int>\d+)|(?P<name>[A-Za-z][A-Za-z0-9_]*)|(?P<op>[-+*/^()]))")


def _tokens(text: str) -> Iterator[Tuple[str, str, int]]:
    pos = 0
    end = len(text.rstrip())
    while pos < end:
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            bad = pos + (len(text[pos:]) - len(text[pos:].lstrip()))
            raise ScalarParseError(f"unexpected character {text[bad]!r}", text, bad)
        kind = m.lastgroup or "op"
        yield kind, m.group(kind), m.start(kind)
        pos = m.end()
    yield "end", "", end


class _Parser:
    """expr := term (('+'|'-') term)* ; term := factor ('*' factor)* ;
    factor := '-' factor | primary ['^' int] ; primary := int ['/' int] | name | '(' expr ')'"""

    def __init__(self, text: str):
        self.text = text
        self.toks = list(_tokens(text))
        self.i = 0

    @property
    def tok(self) -> Tuple[str, str, int]:
        return self.toks[self.i]

    def fail(self, message: str) -> ScalarParseError:
        return ScalarParseError(message, self.text, self.tok[2])

    def take(self, value: str) -> bool:
        if self.tok[0] == "op" and self.tok[1] == value:
            self.i += 1
            return True
        return False

    def integer(self) -> int:
        kind, value, _ = self.tok
        if kind != "int":
            raise self.fail("expected an integer")
        self.i += 1
        return int(value)

    def parse(self) -> Poly:
        if self.tok[0] == "end":
            raise self.fail("empty scalar")
        out = self.expr()
        if self.tok[0] != "end":
            raise self.fail(f"unexpected {self.tok[1]!r}")
        return out

    def expr(self) -> Poly:
        out = self.term()
        while True:
            if self.take("+"):
                out = out + self.term()
            elif self.take("-"):
                out = out - self.term()
            else:
                return out

    def term(self) -> Poly:
        out = self.factor()
        while self.take("*"):
            out = out * self.factor()
        return out

    def factor(self) -> Poly:
        if self.take("-"):
            return -self.factor()
        base = self.primary()
        if self.take("^"):
            return base ** self.integer()
        return base

    def primary(self) -> Poly:
        kind, value, pos = self.tok
        if kind == "int":
            self.i += 1
            num = int(value)
            if self.take("/"):
                den_pos = self.tok[2]
                den = self.integer()
                if den == 0:
                    raise ScalarParseError("zero denominator", self.text, den_pos)
                return Poly.const(Fraction(num, den))
            return Poly.const(num)
        if kind == "name":
            self.i += 1
            return Poly.var(value)
        if self.take("("):
            inner = self.expr()
            if not self.take(")"):
                raise self.fail("expected ')'")
            return inner
        raise self.fail("expected a number, a name or '('")


def parse_scalar(text: str) -> Poly:
    if not isinstance(text, str):
        raise TypeError("scalar text must be a string")
    return _Parser(text).parse()


def to_sympy(p: Poly):
    expr = sympy.Integer(0)
    for m, c in p.terms.items():
        term = sympy.Rational(c.numerator, c.denominator)
        for name, e in m:
            term *= sympy.Symbol(name) ** e
        expr += term
    return expr


def rational_roots(
    p: Poly, excluded: Mapping[str, Iterable[Fraction]] | None = None
) -> Tuple[List[Tuple[str, Fraction]], List[Poly]]:
    """
    Split `p` into irreducible factors over Q. Linear univariate factors give
    (name, root) pairs; other nonconstant factors are returned unresolved.
    """
    if p.is_constant:
        return [], []
    skip = {name: set(vals) for name, vals in (excluded or {}).items()}
    roots: List[Tuple[str, Fraction]] = []
    rest: List[Poly] = []
    _, factors = sympy.factor_list(to_sympy(p))
    for f, _mult in factors:
        syms = sorted(f.free_symbols, key=str)
        if len(syms) == 1 and sympy.degree(f, syms[0]) == 1:
            a, b = sympy.Poly(f, syms[0]).all_coeffs()
            root = -b / a
            value = Fraction(int(root.p), int(root.q))
            if value not in skip.get(str(syms[0]), ()) and (str(syms[0]), value) not in roots:
                roots.append((str(syms[0]), value))
        elif syms:
            rest.append(from_sympy(f))
    return roots, rest


def from_sympy(expr) -> Poly:
    syms = sorted(expr.free_symbols, key=str)
    if not syms:
        r = sympy.Rational(expr)
        return Poly.const(Fraction(int(r.p), int(r.q)))
    out: Dict[Monomial, Fraction] = {}
    for exps, coeff in sympy.Poly(expr, *syms).terms():
        mono = tuple((str(s), int(e)) for s, e in zip(syms, exps) if e)
        r = sympy.Rational(coeff)
        out[mono] = Fraction(int(r.p), int(r.q))
    return Poly(out)
