"""Dense matrices over an exact scalar domain (rational functions or jets)."""

from __future__ import annotations

from typing import Callable, Iterable, Sequence

from .errors import DimensionMismatch, JetDivisionByZero, SingularMatrix


class FieldMatrix:
    """Immutable dense matrix; entries are scalars of ``domain``.

    Scalars must support ``+ - * /``, unary minus, ``is_zero()``,
    ``is_unit()`` and ``diff(axis)``.
    """

    __slots__ = ("rows", "cols", "domain", "_e")

    def __init__(self, entries: Sequence[Sequence], domain, *, cols: int | None = None):
        self._e = tuple(tuple(row) for row in entries)
        self.rows = len(self._e)
        self.cols = len(self._e[0]) if self._e else (cols or 0)
        self.domain = domain
        if any(len(row) != self.cols for row in self._e):
            raise DimensionMismatch("ragged matrix rows")

    # -- construction -----------------------------------------------------

    @classmethod
    def zeros(cls, rows: int, cols: int, domain) -> "FieldMatrix":
        z = domain.zero
        return cls([[z] * cols for _ in range(rows)], domain, cols=cols)

    @classmethod
    def identity(cls, n: int, domain) -> "FieldMatrix":
        z, o = domain.zero, domain.one
        return cls([[o if i == j else z for j in range(n)] for i in range(n)], domain)

    @classmethod
    def from_function(cls, rows: int, cols: int, fn: Callable[[int, int], object], domain) -> "FieldMatrix":
        return cls([[fn(i, j) for j in range(cols)] for i in range(rows)], domain, cols=cols)

    @classmethod
    def from_ints(cls, entries: Sequence[Sequence[int]], domain) -> "FieldMatrix":
        return cls([[domain.from_int(v) for v in row] for row in entries], domain)

    @classmethod
    def column_vector(cls, values: Sequence, domain) -> "FieldMatrix":
        return cls([[v] for v in values], domain, cols=1)

    # -- access -----------------------------------------------------------

    @property
    def shape(self) -> tuple[int, int]:
        return self.rows, self.cols

    def __getitem__(self, index: tuple[int, int]):
        i, j = index
        return self._e[i][j]

    def row(self, i: int) -> tuple:
        return self._e[i]

    def column(self, j: int) -> list:
        return [row[j] for row in self._e]

    def tolist(self) -> list[list]:
        return [list(row) for row in self._e]

    def __iter__(self):
        return iter(self._e)

    # -- structure --------------------------------------------------------

    def submatrix(self, rows: Iterable[int], cols: Iterable[int] | None = None) -> "FieldMatrix":
        rows = list(rows)
        cols = list(range(self.cols)) if cols is None else list(cols)
        return FieldMatrix([[self._e[i][j] for j in cols] for i in rows], self.domain, cols=len(cols))

    def block(self, r0: int, r1: int, c0: int, c1: int) -> "FieldMatrix":
        return self.submatrix(range(r0, r1), range(c0, c1))

    def delete_rows(self, start: int, stop: int | None = None) -> "FieldMatrix":
        """Drop rows ``start`` .. ``stop - 1`` (0-based); a single row if ``stop`` is None."""
        stop = start + 1 if stop is None else stop
        if not 0 <= start <= stop <= self.rows:
            raise DimensionMismatch(f"row range {start}:{stop} outside {self.rows} rows")
        return self.submatrix([i for i in range(self.rows) if not start <= i < stop])

    def insert_zero_column(self, position: int) -> "FieldMatrix":
        z = self.domain.zero
        return FieldMatrix(
            [row[:position] + (z,) + row[position:] for row in self._e], self.domain, cols=self.cols + 1
        )

    def pad_rows(self, total: int) -> "FieldMatrix":
        if total < self.rows:
            raise DimensionMismatch("cannot pad to fewer rows")
        z = self.domain.zero
        return FieldMatrix(self.tolist() + [[z] * self.cols for _ in range(total - self.rows)],
                           self.domain, cols=self.cols)

    def transpose(self) -> "FieldMatrix":
        return FieldMatrix([list(col) for col in zip(*self._e)], self.domain, cols=self.rows)

    @staticmethod
    def from_blocks(blocks: Sequence[Sequence["FieldMatrix"]]) -> "FieldMatrix":
        out = []
        for brow in blocks:
            height = brow[0].rows
            if any(b.rows != height for b in brow):
                raise DimensionMismatch("block row heights differ")
            for i in range(height):
                out.append([v for b in brow for v in b._e[i]])
        return FieldMatrix(out, blocks[0][0].domain)

    # -- arithmetic -------------------------------------------------------

    def map(self, fn: Callable) -> "FieldMatrix":
        return FieldMatrix([[fn(v) for v in row] for row in self._e], self.domain, cols=self.cols)

    def diff(self, axis: str) -> "FieldMatrix":
        return self.map(lambda v: v.diff(axis))

    def _check_same_shape(self, other: "FieldMatrix") -> None:
        if self.shape != other.shape:
            raise DimensionMismatch(f"shapes {self.shape} and {other.shape} differ")

    def __add__(self, other: "FieldMatrix") -> "FieldMatrix":
        self._check_same_shape(other)
        return FieldMatrix(
            [[_add(a, b) for a, b in zip(r, s)] for r, s in zip(self._e, other._e)], self.domain, cols=self.cols
        )

    def __sub__(self, other: "FieldMatrix") -> "FieldMatrix":
        self._check_same_shape(other)
        return FieldMatrix(
            [[_sub(a, b) for a, b in zip(r, s)] for r, s in zip(self._e, other._e)], self.domain, cols=self.cols
        )

    def __neg__(self) -> "FieldMatrix":
        return self.map(lambda v: v if v.is_zero() else -v)

    def scale(self, factor) -> "FieldMatrix":
        if isinstance(factor, int):
            if factor == 1:
                return self
            factor = self.domain.from_int(factor)
        if factor.is_zero():
            return FieldMatrix.zeros(self.rows, self.cols, self.domain)
        return self.map(lambda v: v if v.is_zero() else v * factor)

    def __matmul__(self, other: "FieldMatrix") -> "FieldMatrix":
        if self.cols != other.rows:
            raise DimensionMismatch(f"cannot multiply {self.shape} by {other.shape}")
        zero = self.domain.zero
        other_cols = [other.column(j) for j in range(other.cols)]
        out = []
        for row in self._e:
            nz = [(k, a) for k, a in enumerate(row) if not a.is_zero()]
            new_row = []
            for col in other_cols:
                acc = None
                for k, a in nz:
                    b = col[k]
                    if b.is_zero():
                        continue
                    term = a * b
                    acc = term if acc is None else acc + term
                new_row.append(zero if acc is None else acc)
            out.append(new_row)
        return FieldMatrix(out, self.domain, cols=other.cols)

    # -- predicates -------------------------------------------------------

    def is_zero(self) -> bool:
        return all(v.is_zero() for row in self._e for v in row)

    def nonzero_positions(self) -> list[tuple[int, int]]:
        return [(i, j) for i, row in enumerate(self._e) for j, v in enumerate(row) if not v.is_zero()]

    def __eq__(self, other) -> bool:
        if not isinstance(other, FieldMatrix) or self.shape != other.shape:
            return False
        return all((a - b).is_zero() for r, s in zip(self._e, other._e) for a, b in zip(r, s))

    __hash__ = None

    def __repr__(self) -> str:
        body = "; ".join(", ".join(str(v) for v in row) for row in self._e)
        return f"FieldMatrix({self.rows}x{self.cols}: [{body}])"

    # -- elimination ------------------------------------------------------

    def inverse(self) -> "FieldMatrix":
        """Gauss-Jordan inverse, pivoting on the first unit entry of each column."""
        if self.rows != self.cols:
            raise DimensionMismatch(f"cannot invert a {self.rows}x{self.cols} matrix")
        n = self.rows
        dom = self.domain
        a = self.tolist()
        inv = FieldMatrix.identity(n, dom).tolist()
        for c in range(n):
            piv = next((r for r in range(c, n) if a[r][c].is_unit()), None)
            if piv is None:
                if dom.name == "jet" and any(not a[r][c].is_zero() for r in range(c, n)):
                    raise JetDivisionByZero("no pivot with nonzero constant term; point too special")
                raise SingularMatrix("matrix is singular")
            if piv != c:
                a[c], a[piv] = a[piv], a[c]
                inv[c], inv[piv] = inv[piv], inv[c]
            p = a[c][c]
            if not _is_one(p, dom):
                pinv = dom.one / p
                a[c] = [_mul(v, pinv) for v in a[c]]
                inv[c] = [_mul(v, pinv) for v in inv[c]]
            for r in range(n):
                if r == c:
                    continue
                f = a[r][c]
                if f.is_zero():
                    continue
                a[r] = [_sub(v, _mul(f, w)) for v, w in zip(a[r], a[c])]
                inv[r] = [_sub(v, _mul(f, w)) for v, w in zip(inv[r], inv[c])]
        return FieldMatrix(inv, dom, cols=n)

    def _echelon(self) -> tuple[list[list], int, int]:
        """Row-reduce a copy; returns (rows, rank, number of swaps)."""
        a = self.tolist()
        rank = 0
        swaps = 0
        for c in range(self.cols):
            piv = next((r for r in range(rank, self.rows) if a[r][c].is_unit()), None)
            if piv is None:
                continue
            if piv != rank:
                a[rank], a[piv] = a[piv], a[rank]
                swaps += 1
            p = a[rank][c]
            for r in range(rank + 1, self.rows):
                f = a[r][c]
                if f.is_zero():
                    continue
                q = f / p
                a[r] = [_sub(v, _mul(q, w)) for v, w in zip(a[r], a[rank])]
            rank += 1
            if rank == self.rows:
                break
        return a, rank, swaps

    def rank(self) -> int:
        """Rank over the fraction field (exact zero tests)."""
        return self._echelon()[1]

    def determinant(self):
        if self.rows != self.cols:
            raise DimensionMismatch("determinant of a non-square matrix")
        a, rank, swaps = self._echelon()
        if rank < self.rows:
            return self.domain.zero
        det = self.domain.one
        for i in range(self.rows):
            det = det * a[i][i]
        return -det if swaps % 2 else det


def _is_one(v, dom) -> bool:
    return (v - dom.one).is_zero()


def _add(a, b):
    if b.is_zero():
        return a
    if a.is_zero():
        return b
    return a + b


def _sub(a, b):
    if b.is_zero():
        return a
    if a.is_zero():
        return -b
    return a - b


def _mul(a, b):
    if a.is_zero():
        return a
    if b.is_zero():
        return b
    return a * b
