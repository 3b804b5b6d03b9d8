"""Prolongations of I0 r_x + I^0 r_y = M r and the adapted trivialization.

Differentiating the seed equation a times in x and b times in y gives

    I0 u[a+1, b] + I^0 u[a, b+1] = sum C(a,g) C(b,e) (d^(a-g, b-e) M) u[g, e],

where u[a, b] stands for the (a, b) partial derivative of r.  Three tables
come out of it:

* ``E[h, a, b]`` expresses u[a, b] through v[h] = u[0, h]:
  u[a, b] = sum_h E[h, a, b] v[h];
* ``G[h, a, b]`` does the same for the right-hand side above;
* the square 0/1 system P u^(d-2) = Q v of the top order, whose column block h
  is the unknown u[d-2-h, h].

Sections sigma_a set one free component (h, j), j <= d-3-h, of v to 1 and the
remaining free ones to 0; the bound components j > d-3-h are then forced.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import comb

from .matrix import FieldMatrix

Key = tuple[int, int, int]


class DerivativeCache:
    """Memoised partial derivatives d^(a+b) M / dx^a dy^b."""

    def __init__(self, M: FieldMatrix):
        self._cache = {(0, 0): M}

    def __call__(self, a: int, b: int) -> FieldMatrix:
        key = (a, b)
        hit = self._cache.get(key)
        if hit is not None:
            return hit
        if b > 0:
            value = self(a, b - 1).diff("y")
        else:
            value = self(a - 1, b).diff("x")
        self._cache[key] = value
        return value


def m_derivative(M: FieldMatrix, a: int, b: int) -> FieldMatrix:
    if a < 0 or b < 0:
        raise ValueError("derivative orders must be nonnegative")
    return DerivativeCache(M)(a, b)


# -- constant selector matrices -------------------------------------------


def lower_identity(d: int, dom) -> FieldMatrix:
    """I0: (d-1) x (d-2), identity on top of a zero row."""
    return FieldMatrix.from_function(d - 1, d - 2, lambda i, j: dom.one if i == j else dom.zero, dom)


def upper_identity(d: int, dom) -> FieldMatrix:
    """I^0: (d-1) x (d-2), a zero row on top of the identity."""
    return FieldMatrix.from_function(d - 1, d - 2, lambda i, j: dom.one if i == j + 1 else dom.zero, dom)


def keep_first(d: int, dom) -> FieldMatrix:
    """J0 = [Id_(d-2) | 0]."""
    return FieldMatrix.from_function(d - 2, d - 1, lambda i, j: dom.one if i == j else dom.zero, dom)


def keep_last(d: int, dom) -> FieldMatrix:
    """(0)J = [0 | Id_(d-2)]."""
    return FieldMatrix.from_function(d - 2, d - 1, lambda i, j: dom.one if j == i + 1 else dom.zero, dom)


def shift_matrix(d: int, dom) -> FieldMatrix:
    """Kmat = (0)J . I0, the shift (w_0..w_(d-3)) -> (w_1..w_(d-3), 0)."""
    return keep_last(d, dom) @ lower_identity(d, dom)


# -- E and G tables --------------------------------------------------------


@dataclass
class TensorTables:
    d: int
    E: dict[Key, FieldMatrix]
    G: dict[Key, FieldMatrix]
    dM: DerivativeCache

    def e(self, h: int, a: int, b: int) -> FieldMatrix:
        """E[h, a, b], with the implicit zero/identity cases filled in."""
        dom = self.dM(0, 0).domain
        n = self.d - 2
        if h > a + b:
            return FieldMatrix.zeros(n, n, dom)
        if a == 0:
            return FieldMatrix.identity(n, dom) if h == b else FieldMatrix.zeros(n, n, dom)
        return self.E[h, a, b]


def tensor_tables(M: FieldMatrix, d: int) -> TensorTables:
    """Fill E for a + b <= d - 2 and G for a + b <= d - 3.

    Order of evaluation: k = a + b ascending, then a ascending.  The sum in the
    E recurrence is J0 applied to G[h, a, b], so G is built first and reused.
    """
    dom = M.domain
    n = d - 2
    dM = DerivativeCache(M)
    tables = TensorTables(d, {}, {}, dM)
    shift_down = keep_first(d, dom) @ upper_identity(d, dom)  # J0 . I^0
    for k in range(d - 2):
        for a in range(k + 1):
            b = k - a
            for h in range(k + 1):
                acc = FieldMatrix.zeros(d - 1, n, dom)
                for g in range(a + 1):
                    for e in range(b + 1):
                        if h > g + e:
                            continue
                        term = dM(a - g, b - e) @ tables.e(h, g, e)
                        acc = acc + term.scale(comb(a, g) * comb(b, e))
                tables.G[h, a, b] = acc
            for h in range(k + 2):
                value = -(shift_down @ tables.e(h, a, b + 1))
                if h <= k:
                    value = value + tables.G[h, a, b].delete_rows(d - 2, d - 1)
                tables.E[h, a + 1, b] = value
    return tables


def e_tensor_table(M: FieldMatrix, d: int) -> dict[Key, FieldMatrix]:
    tables = tensor_tables(M, d)
    return {(h, a, b): tables.e(h, a, b)
            for a in range(d - 1) for b in range(d - 1 - a) for h in range(d - 1)}


def g_tensor_table(M: FieldMatrix, d: int) -> dict[Key, FieldMatrix]:
    return dict(tensor_tables(M, d).G)


# -- Cramer system -----------------------------------------------------------


@dataclass
class CramerSystem:
    P: FieldMatrix
    Pinv: FieldMatrix
    Q: FieldMatrix
    U: FieldMatrix


def cramer_matrix(d: int, dom) -> FieldMatrix:
    """P: row block b has I0 at column block b and I^0 at column block b + 1."""
    n = d - 2
    I0, Iu = lower_identity(d, dom), upper_identity(d, dom)
    zero = FieldMatrix.zeros(d - 1, n, dom)
    blocks = [[I0 if h == b else Iu if h == b + 1 else zero for h in range(d - 1)] for b in range(d - 2)]
    return FieldMatrix.from_blocks(blocks)


def assemble_cramer(tables: TensorTables) -> CramerSystem:
    d = tables.d
    dom = tables.dM(0, 0).domain
    P = cramer_matrix(d, dom)
    Pinv = P.inverse()
    Q = FieldMatrix.from_blocks(
        [[tables.G[h, d - 3 - b, b] for h in range(d - 2)] for b in range(d - 2)]
    )
    return CramerSystem(P, Pinv, Q, Pinv @ Q)


# -- index maps ----------------------------------------------------------------


@dataclass(frozen=True)
class IndexMaps:
    d: int

    @property
    def m(self) -> int:
        return (self.d - 1) * (self.d - 2) // 2

    def free(self, h: int, j: int) -> int:
        """1-based number of the free slot (h, j), 0 <= j <= d-3-h."""
        if not (0 <= h <= self.d - 3 and 0 <= j <= self.d - 3 - h):
            raise ValueError(f"({h}, {j}) is not a free slot for d={self.d}")
        return h * (2 * self.d - 3 - h) // 2 + j + 1

    def full(self, h: int, j: int) -> int:
        """1-based number of the slot (h, j), 0 <= j <= d-3."""
        if not (0 <= h and 0 <= j <= self.d - 3):
            raise ValueError(f"({h}, {j}) is not a slot for d={self.d}")
        return h * (self.d - 2) + j + 1

    def hh(self, a: int) -> int:
        for h in range(self.d - 2):
            if h * (2 * self.d - 3 - h) // 2 < a <= (h + 1) * (2 * self.d - 4 - h) // 2:
                return h
        raise ValueError(f"free index {a} outside 1..{self.m}")

    def jj(self, a: int) -> int:
        h = self.hh(a)
        return a - 1 - h * (2 * self.d - 3 - h) // 2

    def hhh(self, a: int) -> int:
        if a < 1:
            raise ValueError("full index is 1-based")
        return (a - 1) // (self.d - 2)

    def jjj(self, a: int) -> int:
        return a - 1 - self.hhh(a) * (self.d - 2)

    def free_slots(self) -> list[tuple[int, int]]:
        return [(self.hh(a), self.jj(a)) for a in range(1, self.m + 1)]


def index_maps(d: int) -> IndexMaps:
    if d < 3:
        raise ValueError("d must be at least 3")
    return IndexMaps(d)


# -- sections ------------------------------------------------------------------


@dataclass
class SectionTable:
    d: int
    s: list[list[list]]  # s[a-1][h][j]
    domain: object

    def WW(self, a: int, h: int) -> FieldMatrix:
        return FieldMatrix.column_vector(self.s[a - 1][h], self.domain)

    def WWW(self, a: int) -> FieldMatrix:
        return FieldMatrix.column_vector([v for level in self.s[a - 1] for v in level], self.domain)


def bound_component_operators(tables: TensorTables) -> dict[tuple[int, int], FieldMatrix]:
    """W[h, n] = sum_k (-1)^k Kmat^k (0)J G[n, k, h-1-k], so that the bound part of
    v[h] is the sum over n < h of W[h, n] v[n]."""
    d = tables.d
    dom = tables.dM(0, 0).domain
    oJ = keep_last(d, dom)
    K = shift_matrix(d, dom)
    powers = [FieldMatrix.identity(d - 2, dom)]
    for _ in range(d - 3):
        powers.append(powers[-1] @ K)
    ops = {}
    for h in range(1, d - 2):
        for n in range(h):
            acc = FieldMatrix.zeros(d - 2, d - 2, dom)
            for k in range(h):
                term = powers[k] @ (oJ @ tables.G[n, k, h - 1 - k])
                acc = acc + (term if k % 2 == 0 else -term)
            ops[h, n] = acc
    return ops


def build_sections(tables: TensorTables, maps: IndexMaps) -> SectionTable:
    d = tables.d
    dom = tables.dM(0, 0).domain
    ops = bound_component_operators(tables)
    s = []
    for a in range(1, maps.m + 1):
        ha, ja = maps.hh(a), maps.jj(a)
        levels = []
        for h in range(d - 2):
            level = [dom.zero] * (d - 2)
            if h == ha:
                level[ja] = dom.one
            for j in range(d - 2 - h, d - 2):
                acc = dom.zero
                for n in range(h):
                    row = ops[h, n].row(j)
                    for r, coeff in enumerate(row):
                        v = levels[n][r]
                        if coeff.is_zero() or v.is_zero():
                            continue
                        acc = acc + coeff * v
                level[j] = acc
            levels.append(level)
        s.append(levels)
    return SectionTable(d, s, dom)
