"""Polynomials in the slope variable p with scalar coefficients."""

from __future__ import annotations

from typing import Sequence

from .matrix import FieldMatrix


class SlopePolynomial:
    """``sum(coeffs[j] * p**j)`` stored at a fixed width (trailing zeros allowed)."""

    __slots__ = ("coeffs", "domain")

    def __init__(self, coeffs: Sequence, domain):
        self.coeffs = tuple(coeffs)
        self.domain = domain

    @classmethod
    def zero(cls, width: int, domain) -> "SlopePolynomial":
        return cls([domain.zero] * width, domain)

    @property
    def width(self) -> int:
        return len(self.coeffs)

    def degree(self) -> int:
        """Actual degree ignoring zero padding; -1 for the zero polynomial."""
        for j in range(self.width - 1, -1, -1):
            if not self.coeffs[j].is_zero():
                return j
        return -1

    def __getitem__(self, j: int):
        if 0 <= j < self.width:
            return self.coeffs[j]
        return self.domain.zero

    def with_width(self, width: int) -> "SlopePolynomial":
        if width < self.width and any(not c.is_zero() for c in self.coeffs[width:]):
            raise ValueError(f"cannot truncate degree-{self.degree()} polynomial to width {width}")
        return SlopePolynomial([self[j] for j in range(width)], self.domain)

    def __add__(self, other: "SlopePolynomial") -> "SlopePolynomial":
        w = max(self.width, other.width)
        return SlopePolynomial([_add(self[j], other[j]) for j in range(w)], self.domain)

    def __sub__(self, other: "SlopePolynomial") -> "SlopePolynomial":
        w = max(self.width, other.width)
        return SlopePolynomial([_add(self[j], -other[j]) for j in range(w)], self.domain)

    def __neg__(self) -> "SlopePolynomial":
        return SlopePolynomial([-c for c in self.coeffs], self.domain)

    def __mul__(self, other: "SlopePolynomial") -> "SlopePolynomial":
        if not isinstance(other, SlopePolynomial):
            return SlopePolynomial([c * other for c in self.coeffs], self.domain)
        out = [None] * (self.width + other.width - 1)
        for i, a in enumerate(self.coeffs):
            if a.is_zero():
                continue
            for j, b in enumerate(other.coeffs):
                if b.is_zero():
                    continue
                t = a * b
                out[i + j] = t if out[i + j] is None else out[i + j] + t
        z = self.domain.zero
        return SlopePolynomial([z if c is None else c for c in out], self.domain)

    def shift(self) -> "SlopePolynomial":
        """Multiply by p (width grows by one)."""
        return SlopePolynomial((self.domain.zero,) + self.coeffs, self.domain)

    def diff_p(self) -> "SlopePolynomial":
        """Derivative in p, keeping width - 1 coefficients."""
        dom = self.domain
        return SlopePolynomial(
            [self.coeffs[j] * dom.from_int(j) for j in range(1, self.width)] or [dom.zero], dom
        )

    def diff(self, axis: str) -> "SlopePolynomial":
        return SlopePolynomial([c.diff(axis) for c in self.coeffs], self.domain)

    def evaluate_p(self, p):
        """Horner evaluation at a scalar p."""
        acc = self.domain.zero
        for c in reversed(self.coeffs):
            acc = acc * p + c
        return acc

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.coeffs)

    def __eq__(self, other) -> bool:
        if not isinstance(other, SlopePolynomial):
            return NotImplemented
        w = max(self.width, other.width)
        return all((self[j] - other[j]).is_zero() for j in range(w))

    __hash__ = None

    def as_column(self) -> FieldMatrix:
        return FieldMatrix.column_vector(self.coeffs, self.domain)

    def __repr__(self) -> str:
        return "SlopePolynomial([" + ", ".join(str(c) for c in self.coeffs) + "])"


def convolution_matrix(poly: SlopePolynomial, h: int) -> FieldMatrix:
    """Matrix of multiplication by ``poly`` from degree <= h to degree <= h + k.

    Size ``(h + k + 1) x (h + 1)`` where ``k + 1`` is the stored width; column
    ``c`` holds the coefficients shifted down by ``c``.
    """
    if h < 0:
        raise ValueError("h must be nonnegative")
    k = poly.width - 1
    z = poly.domain.zero

    def entry(i: int, c: int):
        j = i - c
        return poly.coeffs[j] if 0 <= j <= k else z

    return FieldMatrix.from_function(h + k + 1, h + 1, entry, poly.domain)


def _add(a, b):
    if b.is_zero():
        return a
    if a.is_zero():
        return b
    return a + b
