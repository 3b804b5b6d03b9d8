"""Truncated bivariate Taylor expansions ("jets") at a fixed base point.

A jet of order ``o`` stores the Taylor coefficients ``c[i, j]`` of
``X**i * Y**j`` (``X = x - x0``, ``Y = y - y0``) for ``i + j <= o`` as exact
``gmpy2.mpq`` values, laid out by total degree then by power of Y.  Sums and
products truncate to the smaller order; each derivative lowers the order by one,
so the order carried by a result says exactly how much of it is trustworthy.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache

from gmpy2 import mpq

from .algebra import BiPoly, RationalFunction, as_rational
from .errors import JetDivisionByZero, PoleAtPoint

_ZERO = mpq(0)


def n_coeffs(order: int) -> int:
    return (order + 1) * (order + 2) // 2


def index(i: int, j: int) -> int:
    t = i + j
    return t * (t + 1) // 2 + j


@lru_cache(maxsize=None)
def _monomials(order: int) -> tuple[tuple[int, int], ...]:
    return tuple((t - j, j) for t in range(order + 1) for j in range(t + 1))


@lru_cache(maxsize=None)
def _product_table(order: int) -> tuple[tuple[int, ...], ...]:
    """For each output slot m, flat pairs (a0, b0, a1, b1, ...) with mono a * mono b = mono m."""
    monos = _monomials(order)
    table = [[] for _ in monos]
    for ia, (i1, j1) in enumerate(monos):
        for ib, (i2, j2) in enumerate(monos):
            if i1 + i2 + j1 + j2 <= order:
                table[index(i1 + i2, j1 + j2)].extend((ia, ib))
    return tuple(tuple(t) for t in table)


@lru_cache(maxsize=None)
def _diff_table(order: int, axis: str) -> tuple[tuple[int, int, int], ...]:
    """(source slot, target slot, multiplier) triples for a partial derivative."""
    out = []
    for i, j in _monomials(order):
        if axis == "x" and i:
            out.append((index(i, j), index(i - 1, j), i))
        elif axis == "y" and j:
            out.append((index(i, j), index(i, j - 1), j))
    return tuple(out)


class Jet:
    __slots__ = ("c", "order", "alg")

    def __init__(self, coeffs, order: int, alg: "JetAlgebra"):
        self.c = coeffs
        self.order = order
        self.alg = alg

    # -- predicates -------------------------------------------------------

    def is_zero(self) -> bool:
        return not any(self.c)

    def is_unit(self) -> bool:
        return self.c[0] != 0

    @property
    def value(self) -> Fraction:
        """Value at the base point."""
        return as_rational(self.c[0])

    def coefficient(self, i: int, j: int) -> Fraction:
        if i + j > self.order:
            raise ValueError(f"coefficient of degree {i + j} beyond jet order {self.order}")
        return as_rational(self.c[index(i, j)])

    # -- arithmetic -------------------------------------------------------

    def _lift(self, other) -> "Jet":
        if isinstance(other, Jet):
            return other
        if isinstance(other, (int, Fraction)):
            return self.alg.constant(other)
        return NotImplemented

    def __add__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return NotImplemented
        o = min(self.order, other.order)
        n = n_coeffs(o)
        return Jet([a + b for a, b in zip(self.c[:n], other.c[:n])], o, self.alg)

    __radd__ = __add__

    def __sub__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return NotImplemented
        o = min(self.order, other.order)
        n = n_coeffs(o)
        return Jet([a - b for a, b in zip(self.c[:n], other.c[:n])], o, self.alg)

    def __rsub__(self, other):
        return -self + other

    def __neg__(self):
        return Jet([-a for a in self.c], self.order, self.alg)

    def __mul__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return NotImplemented
        o = min(self.order, other.order)
        a, b = self.c, other.c
        out = []
        for pairs in _product_table(o):
            acc = _ZERO
            for k in range(0, len(pairs), 2):
                x = a[pairs[k]]
                if x:
                    y = b[pairs[k + 1]]
                    if y:
                        acc += x * y
            out.append(acc)
        return Jet(out, o, self.alg)

    __rmul__ = __mul__

    def reciprocal(self) -> "Jet":
        b = self.c
        if not b[0]:
            raise JetDivisionByZero("leading jet coefficient vanishes at the base point")
        inv0 = 1 / b[0]
        table = _product_table(self.order)
        q = [inv0]
        for m in range(1, len(table)):
            pairs = table[m]
            acc = _ZERO
            # pairs (l, k) with l the slot in b; skip l == 0 (that is q[m] itself)
            for t in range(0, len(pairs), 2):
                k_idx, l_idx = pairs[t], pairs[t + 1]
                if l_idx == 0 or k_idx >= m:
                    continue
                bl = b[l_idx]
                if bl:
                    acc += bl * q[k_idx]
            q.append(-acc * inv0)
        return Jet(q, self.order, self.alg)

    def __truediv__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return NotImplemented
        return self * other.reciprocal()

    def __rtruediv__(self, other):
        return self._lift(other) * self.reciprocal()

    def __pow__(self, n: int):
        if not isinstance(n, int) or n < 0:
            return NotImplemented
        out = self.alg.one
        for _ in range(n):
            out = out * self
        return out

    def diff(self, axis: str) -> "Jet":
        if self.order == 0:
            raise JetDivisionByZero("cannot differentiate an order-0 jet; truncation order too low")
        o = self.order - 1
        out = [_ZERO] * n_coeffs(o)
        for src, dst, mult in _diff_table(self.order, axis):
            v = self.c[src]
            if v:
                out[dst] = v * mult
        return Jet(out, o, self.alg)

    def __eq__(self, other) -> bool:
        other = self._lift(other)
        if other is NotImplemented:
            return NotImplemented
        return (self - other).is_zero()

    __hash__ = None

    def __repr__(self) -> str:
        return f"Jet(order={self.order}, value={self.value})"


class JetAlgebra:
    """Scalar domain of jets of a given order at ``point``."""

    name = "jet"

    def __init__(self, point, order: int):
        self.point = (as_rational(point[0]), as_rational(point[1]))
        self.order = order
        self.zero = self.constant(0)
        self.one = self.constant(1)
        n = n_coeffs(order)
        x0, y0 = (mpq(v.numerator, v.denominator) for v in self.point)
        xc = [_ZERO] * n
        yc = [_ZERO] * n
        xc[0], yc[0] = x0, y0
        if order >= 1:
            xc[index(1, 0)] = mpq(1)
            yc[index(0, 1)] = mpq(1)
        self.x = Jet(xc, order, self)
        self.y = Jet(yc, order, self)

    def constant(self, value) -> Jet:
        q = as_rational(value)
        c = [_ZERO] * n_coeffs(self.order)
        c[0] = mpq(q.numerator, q.denominator)
        return Jet(c, self.order, self)

    def from_int(self, n: int) -> Jet:
        return self.constant(n)

    def from_poly(self, poly: BiPoly) -> Jet:
        """Taylor expansion of a polynomial at the base point."""
        terms = poly.terms
        if not terms:
            return self.zero
        max_i = max(i for i, _ in terms)
        max_j = max(j for _, j in terms)
        xp = [self.one]
        for _ in range(max_i):
            xp.append(xp[-1] * self.x)
        yp = [self.one]
        for _ in range(max_j):
            yp.append(yp[-1] * self.y)
        acc = self.zero
        for (i, j), c in terms.items():
            acc = acc + (xp[i] * yp[j]) * self.constant(c)
        return acc

    def convert(self, value) -> Jet:
        if isinstance(value, Jet):
            return value
        if isinstance(value, (int, Fraction)):
            return self.constant(value)
        rf = RationalFunction(value)
        den = self.from_poly(rf.den)
        if not den.is_unit():
            raise PoleAtPoint(f"denominator {rf.den} vanishes at {self.point}")
        return self.from_poly(rf.num) / den

    def __repr__(self) -> str:
        return f"JetAlgebra(point={self.point}, order={self.order})"
