"""Planar d-web specifications F(x, y, p) = p^d + a_1 p^(d-1) + ... + a_d."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from pathlib import Path
from typing import Mapping, Sequence

from .algebra import QXY, ONE, ZERO, RationalFunction, as_rational, parse_expression
from .errors import CoefficientCountError, DegreeError, DuplicateSlopes, ParseError, PoleAtPoint
from .matrix import FieldMatrix
from .slope import SlopePolynomial

MIN_DEGREE = 3


@dataclass(frozen=True)
class WebSpec:
    d: int
    coefficients: tuple[RationalFunction, ...]
    origin: tuple[Fraction, Fraction] | None = None
    slopes: tuple[RationalFunction, ...] | None = None

    def __post_init__(self):
        if self.d < MIN_DEGREE:
            raise DegreeError(f"d must be at least {MIN_DEGREE}, got {self.d}")
        if len(self.coefficients) != self.d:
            raise CoefficientCountError(f"expected {self.d} coefficients, got {len(self.coefficients)}")
        if self.slopes is not None and len(self.slopes) != self.d:
            raise CoefficientCountError(f"expected {self.d} slopes, got {len(self.slopes)}")

    @property
    def source(self) -> str:
        return "implicit" if self.slopes is None else "explicit"

    @property
    def rank_bound(self) -> int:
        """Maximal rank (d-1)(d-2)/2, also the size of the curvature matrix."""
        return (self.d - 1) * (self.d - 2) // 2

    def polynomial(self, domain=QXY) -> SlopePolynomial:
        """F as a slope polynomial of width d + 1 (coefficient of p^j is a_(d-j))."""
        coeffs = [domain.convert(self.coefficients[self.d - 1 - j]) for j in range(self.d)]
        return SlopePolynomial(coeffs + [domain.one], domain)

    @classmethod
    def from_coefficients(cls, coefficients: Sequence, origin=None) -> "WebSpec":
        coeffs = tuple(_to_rf(c) for c in coefficients)
        return cls(len(coeffs), coeffs, _origin(origin))

    @classmethod
    def from_slopes(cls, slopes: Sequence, origin=None) -> "WebSpec":
        slopes = tuple(_to_rf(s) for s in slopes)
        if len(slopes) < MIN_DEGREE:
            raise DegreeError(f"d must be at least {MIN_DEGREE}, got {len(slopes)}")
        return cls(len(slopes), tuple(slopes_to_coefficients(slopes)), _origin(origin), slopes)

    def to_document(self) -> dict:
        doc: dict = {"d": self.d}
        if self.slopes is not None:
            doc["slopes"] = [str(s) for s in self.slopes]
        else:
            doc["coefficients"] = [str(c) for c in self.coefficients]
        if self.origin is not None:
            doc["origin"] = [str(v) for v in self.origin]
        return doc


def _to_rf(value) -> RationalFunction:
    if isinstance(value, RationalFunction):
        return value
    if isinstance(value, str):
        return parse_expression(value)
    if isinstance(value, (int, Fraction)):
        return RationalFunction(value)
    raise ParseError(f"expected an expression string, got {type(value).__name__}")


def _origin(origin) -> tuple[Fraction, Fraction] | None:
    if origin is None:
        return None
    if isinstance(origin, (str, bytes)) or len(origin) != 2:
        raise ParseError("origin must be a pair of rationals")
    return as_rational(origin[0]), as_rational(origin[1])


def parse_web_spec(document: Mapping | str) -> WebSpec:
    """Build a WebSpec from a mapping or its JSON text.

    Exactly one of ``coefficients`` (a_1..a_d) or ``slopes`` must be present.
    """
    if isinstance(document, str):
        try:
            document = json.loads(document)
        except json.JSONDecodeError as exc:
            raise ParseError(f"invalid JSON: {exc}") from exc
    if not isinstance(document, Mapping):
        raise ParseError("web specification must be an object")
    unknown = set(document) - {"d", "coefficients", "slopes", "origin"}
    if unknown:
        raise ParseError(f"unknown fields: {sorted(unknown)}")
    d = document.get("d")
    if not isinstance(d, int) or isinstance(d, bool):
        raise ParseError("field 'd' must be an integer")
    if d < MIN_DEGREE:
        raise DegreeError(f"d must be at least {MIN_DEGREE}, got {d}")
    has_c, has_s = "coefficients" in document, "slopes" in document
    if has_c == has_s:
        raise ParseError("exactly one of 'coefficients' or 'slopes' is required")
    values = document["coefficients" if has_c else "slopes"]
    if not isinstance(values, list) or not all(isinstance(v, str) for v in values):
        raise ParseError("coefficients/slopes must be a list of strings")
    if len(values) != d:
        raise CoefficientCountError(f"expected {d} entries, got {len(values)}")
    origin = document.get("origin")
    if origin is not None and (not isinstance(origin, list) or not all(isinstance(v, (str, int)) for v in origin)):
        raise ParseError("origin must be a list of two rational strings")
    if has_c:
        return WebSpec.from_coefficients(values, origin)
    return WebSpec.from_slopes(values, origin)


def load_web_spec(path: str | Path) -> WebSpec:
    return parse_web_spec(Path(path).read_text(encoding="utf-8"))


def elementary_symmetric(values: Sequence[RationalFunction]) -> list[RationalFunction]:
    """e_0 .. e_n by the usual one-pass recurrence."""
    e = [ONE] + [ZERO] * len(values)
    for n, v in enumerate(values, start=1):
        for k in range(n, 0, -1):
            e[k] = e[k] + v * e[k - 1]
    return e


def slopes_to_coefficients(slopes: Sequence[RationalFunction]) -> list[RationalFunction]:
    """a_i = (-1)^i e_i(slopes), i = 1..d."""
    e = elementary_symmetric(list(slopes))
    return [e[i] if i % 2 == 0 else -e[i] for i in range(1, len(slopes) + 1)]


def sylvester_matrix(f: SlopePolynomial, g: SlopePolynomial) -> FieldMatrix:
    m, n = f.degree(), g.degree()
    size = m + n
    dom = f.domain
    rows = []
    for i in range(n):
        row = [dom.zero] * size
        for k in range(m + 1):
            row[i + k] = f[m - k]
        rows.append(row)
    for i in range(m):
        row = [dom.zero] * size
        for k in range(n + 1):
            row[i + k] = g[n - k]
        rows.append(row)
    return FieldMatrix(rows, dom)


def resultant(f: SlopePolynomial, g: SlopePolynomial):
    return sylvester_matrix(f, g).determinant()


@dataclass
class ValidationReport:
    discriminant_nonzero: bool
    discriminant_vanishes_at_origin: bool | None = None
    messages: list[str] = field(default_factory=list)
    resultant: RationalFunction | None = None

    @property
    def ok(self) -> bool:
        return self.discriminant_nonzero and not self.discriminant_vanishes_at_origin


def validate_web(spec: WebSpec) -> ValidationReport:
    """Check that F and dF/dp have no common root generically (and at the origin, if set)."""
    F = spec.polynomial()
    res = resultant(F, F.diff_p())
    report = ValidationReport(discriminant_nonzero=not res.is_zero(), resultant=res)
    if res.is_zero():
        report.messages.append("Res_p(F, F_p) vanishes identically: F has a repeated root in p")
    if spec.slopes is not None:
        for i, j in combinations(range(spec.d), 2):
            if spec.slopes[i] == spec.slopes[j]:
                report.messages.append(f"slopes {i + 1} and {j + 1} coincide")
    if spec.origin is not None and report.discriminant_nonzero:
        try:
            value = res.evaluate(*spec.origin)
        except PoleAtPoint:
            report.discriminant_vanishes_at_origin = None
            report.messages.append("a coefficient has a pole at the origin")
        else:
            report.discriminant_vanishes_at_origin = value == 0
            if value == 0:
                report.messages.append("the origin lies on the discriminant locus")
    return report


def interpolation_r(slopes: Sequence[RationalFunction], f: Sequence[RationalFunction]) -> SlopePolynomial:
    """r = sum_i f_i * prod_{j != i} (p - p_j), stored at width d."""
    slopes = [_to_rf(s) for s in slopes]
    f = [_to_rf(v) for v in f]
    d = len(slopes)
    if len(f) != d:
        raise CoefficientCountError(f"expected {d} values of f, got {len(f)}")
    for i, j in combinations(range(d), 2):
        if slopes[i] == slopes[j]:
            raise DuplicateSlopes(f"slopes {i + 1} and {j + 1} coincide")
    r = SlopePolynomial.zero(d, QXY)
    for i in range(d):
        li = SlopePolynomial([ONE], QXY)
        for j in range(d):
            if j != i:
                li = li * SlopePolynomial([-slopes[j], ONE], QXY)
        r = r + li * f[i]
    return r.with_width(d)
