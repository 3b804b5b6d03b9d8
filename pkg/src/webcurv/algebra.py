"""Exact scalars over Q(x, y): rationals, bivariate polynomials, rational functions.

Rational functions are backed by sympy's sparse ``FracField`` over QQ with
lex order (x > y).  Every value is kept in lowest terms with integer
coefficients and a denominator whose leading coefficient is positive, so
structural equality is mathematical equality.
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Mapping

from sympy import QQ
from sympy.polys.fields import field
from sympy.polys.orderings import lex

from .errors import DivisionByZero, ParseError, PoleAtPoint

Rational = Fraction

_FIELD, _X, _Y = field("x,y", QQ, order=lex)
_RING = _FIELD.ring


def as_rational(value) -> Fraction:
    """Convert an int, Fraction, gmpy2/sympy rational or string to a Fraction."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except ValueError as exc:
            raise ParseError(f"not a rational number: {value!r}") from exc
    num = getattr(value, "numerator", None)
    den = getattr(value, "denominator", None)
    if num is None or den is None:
        raise TypeError(f"cannot convert {type(value).__name__} to Rational")
    if callable(num):  # sympy PythonRational-style accessors
        num, den = num(), den()
    return Fraction(int(num), int(den))


def _format_coeff_monomial(coeff: Fraction, i: int, j: int) -> str:
    factors = []
    if i:
        factors.append("x" if i == 1 else f"x^{i}")
    if j:
        factors.append("y" if j == 1 else f"y^{j}")
    mag = abs(coeff)
    if not factors:
        return str(mag)
    mono = "*".join(factors)
    if mag == 1:
        return mono
    return f"{mag}*{mono}"


class BiPoly:
    """Polynomial in x, y with rational coefficients (read-only view)."""

    __slots__ = ("_poly",)

    def __init__(self, terms: Mapping[tuple[int, int], object] | None = None, *, _poly=None):
        if _poly is None:
            _poly = _RING.from_dict(
                {k: QQ(as_rational(v).numerator, as_rational(v).denominator)
                 for k, v in (terms or {}).items() if v != 0}
            )
        self._poly = _poly

    @property
    def terms(self) -> dict[tuple[int, int], Fraction]:
        return {k: as_rational(v) for k, v in self._poly.terms()}

    def is_zero(self) -> bool:
        return not self._poly

    def degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        if not self._poly:
            return -1
        return max(i + j for i, j in self._poly.monoms())

    def evaluate(self, x, y) -> Fraction:
        x, y = as_rational(x), as_rational(y)
        return sum((c * x**i * y**j for (i, j), c in self.terms.items()), Fraction(0))

    def __eq__(self, other) -> bool:
        return isinstance(other, BiPoly) and self._poly == other._poly

    def __hash__(self) -> int:
        return hash(self._poly)

    def __str__(self) -> str:
        items = self._poly.terms()  # already in grlex-descending order
        if not items:
            return "0"
        out = []
        for n, ((i, j), c) in enumerate(items):
            c = as_rational(c)
            body = _format_coeff_monomial(c, i, j)
            if n == 0:
                out.append(("-" if c < 0 else "") + body)
            else:
                out.append((" - " if c < 0 else " + ") + body)
        return "".join(out)

    def __repr__(self) -> str:
        return f"BiPoly({self})"


class RationalFunction:
    """Element of Q(x, y) in canonical reduced form.

    >>> RationalFunction.parse("(x^2-y^2)/(x-y)")
    RationalFunction('x + y')
    """

    __slots__ = ("_f",)

    def __init__(self, value=0):
        if isinstance(value, RationalFunction):
            value = value._f
        elif isinstance(value, str):
            value = parse_expression(value)._f
        elif isinstance(value, BiPoly):
            value = _FIELD.new(value._poly)
        elif not hasattr(value, "numer"):
            q = as_rational(value)
            value = _FIELD(QQ(q.numerator, q.denominator))
        self._f = value

    @classmethod
    def parse(cls, text: str) -> "RationalFunction":
        return parse_expression(text)

    @classmethod
    def x(cls) -> "RationalFunction":
        return cls(_X)

    @classmethod
    def y(cls) -> "RationalFunction":
        return cls(_Y)

    @classmethod
    def from_polys(cls, num: BiPoly, den: BiPoly) -> "RationalFunction":
        if den.is_zero():
            raise DivisionByZero("zero denominator")
        return cls(_FIELD.new(num._poly) / _FIELD.new(den._poly))

    @property
    def num(self) -> BiPoly:
        return BiPoly(_poly=self._f.numer)

    @property
    def den(self) -> BiPoly:
        return BiPoly(_poly=self._f.denom)

    def is_zero(self) -> bool:
        return not self._f

    def is_unit(self) -> bool:
        # over a field every nonzero element is a unit; used for pivot choice
        return bool(self._f)

    def is_constant(self) -> bool:
        return self._f.numer.is_ground and self._f.denom.is_ground

    def normalized(self) -> "RationalFunction":
        return RationalFunction(_FIELD.new(self._f.numer, self._f.denom))

    def diff(self, axis: str) -> "RationalFunction":
        if axis == "x":
            return RationalFunction(self._f.diff(_X))
        if axis == "y":
            return RationalFunction(self._f.diff(_Y))
        raise ValueError(f"unknown axis {axis!r}")

    def evaluate(self, x, y) -> Fraction:
        """Exact value at (x, y); raises PoleAtPoint if the denominator vanishes."""
        den = self.den.evaluate(x, y)
        if den == 0:
            raise PoleAtPoint(f"denominator {self.den} vanishes at ({x}, {y})")
        return self.num.evaluate(x, y) / den

    def _coerce(self, other):
        if isinstance(other, RationalFunction):
            return other._f
        if isinstance(other, (int, Fraction)):
            q = as_rational(other)
            return _FIELD(QQ(q.numerator, q.denominator))
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else RationalFunction(self._f + o)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else RationalFunction(self._f - o)

    def __rsub__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else RationalFunction(o - self._f)

    def __mul__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else RationalFunction(self._f * o)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        if not o:
            raise DivisionByZero("division by the zero rational function")
        return RationalFunction(self._f / o)

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        if not self._f:
            raise DivisionByZero("division by the zero rational function")
        return RationalFunction(o / self._f)

    def __neg__(self):
        return RationalFunction(-self._f)

    def __pow__(self, n: int):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0 and not self._f:
            raise DivisionByZero("negative power of zero")
        return RationalFunction(self._f**n)

    def __eq__(self, other) -> bool:
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return self._f == o

    def __hash__(self) -> int:
        return hash(self._f)

    def __bool__(self) -> bool:
        return bool(self._f)

    def __str__(self) -> str:
        num, den = self.num, self.den
        if den == BiPoly({(0, 0): 1}):
            return str(num)
        n = str(num)
        d = str(den)
        if len(num._poly) > 1:
            n = f"({n})"
        if len(den._poly) > 1 or den.degree() > 0 and not _is_single_factor(d):
            d = f"({d})"
        return f"{n}/{d}"

    def __repr__(self) -> str:
        return f"RationalFunction({str(self)!r})"


def _is_single_factor(text: str) -> bool:
    # "x^2" or "y" can follow "/" without parentheses; "2*x" cannot
    return "*" not in text


ZERO = RationalFunction(0)
ONE = RationalFunction(1)


# ---------------------------------------------------------------------------
# Expression grammar: integers, x, y, + - * / ^, parentheses.

_TOKEN = re.compile(r"\s*(?:(\d+)|([xy])|(\^|\*\*|[-+*/()]))")


def _tokenize(text: str) -> list[str]:
    tokens = []
    pos = 0
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise ParseError(f"unexpected character {text[pos:].lstrip()[:1]!r} in {text!r}")
        tokens.append(m.group(m.lastindex))
        pos = m.end()
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = _tokenize(text)
        self.pos = 0

    def peek(self) -> str | None:
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def take(self) -> str:
        tok = self.peek()
        if tok is None:
            raise ParseError(f"unexpected end of input in {self.text!r}")
        self.pos += 1
        return tok

    def parse(self):
        if not self.tokens:
            raise ParseError("empty expression")
        value = self.expr()
        if self.peek() is not None:
            raise ParseError(f"unexpected token {self.peek()!r} in {self.text!r}")
        return value

    def expr(self):
        value = self.term()
        while self.peek() in ("+", "-"):
            op = self.take()
            rhs = self.term()
            value = value + rhs if op == "+" else value - rhs
        return value

    def term(self):
        value = self.unary()
        while self.peek() in ("*", "/"):
            op = self.take()
            rhs = self.unary()
            if op == "*":
                value = value * rhs
            else:
                if not rhs:
                    raise ParseError(f"division by zero in {self.text!r}")
                value = value / rhs
        return value

    def unary(self):
        if self.peek() in ("+", "-"):
            op = self.take()
            value = self.unary()
            return -value if op == "-" else value
        return self.power()

    def power(self):
        base = self.atom()
        if self.peek() in ("^", "**"):
            self.take()
            tok = self.take()
            if not tok.isdigit():
                raise ParseError(f"exponent must be a nonnegative integer in {self.text!r}")
            base = base ** int(tok)
        return base

    def atom(self):
        tok = self.take()
        if tok.isdigit():
            return _FIELD(int(tok))
        if tok == "x":
            return _X
        if tok == "y":
            return _Y
        if tok == "(":
            value = self.expr()
            if self.take() != ")":
                raise ParseError(f"missing ')' in {self.text!r}")
            return value
        raise ParseError(f"unexpected token {tok!r} in {self.text!r}")


def parse_expression(text: str) -> RationalFunction:
    """Parse a rational function written with integers, x, y, + - * / ^ and parentheses."""
    if not isinstance(text, str):
        raise ParseError(f"expected a string, got {type(text).__name__}")
    return RationalFunction(_Parser(text).parse())



class RationalFunctionField:
    """Scalar domain Q(x, y) for the generic pipeline."""

    name = "symbolic"

    def __init__(self):
        self.zero = ZERO
        self.one = ONE

    def from_int(self, n: int) -> RationalFunction:
        return RationalFunction(n)

    def convert(self, value) -> RationalFunction:
        return RationalFunction(value)

    def __repr__(self) -> str:
        return "QQ(x, y)"


QXY = RationalFunctionField()
