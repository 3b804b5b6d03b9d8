"""Structural quantities of F and elimination of the auxiliary polynomial c.

Closedness of (r / F_p)(dy - p dx) on F = 0 is the polynomial identity

    (F_p)^2 (r_x + p r_y) + H r - L r_p = c F,     deg c <= 2d - 4,

with K = F_x + p F_y, H = K F_pp - K_p F_p and L = K F_p.  Splitting its
3d - 3 coefficient equations into the first d ("+") and last 2d - 3 ("-") rows
and solving the lower block for c leaves

    B (I0 r_x + I^0 r_y) + E r = 0,

and any left inverse T of B turns this into I0 r_x + I^0 r_y = M r, M = -T E.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

from .algebra import QXY
from .errors import NoValidPivotRow, SingularMatrix
from .matrix import FieldMatrix
from .slope import SlopePolynomial, convolution_matrix
from .web import WebSpec


@dataclass(frozen=True)
class StructuralQuantities:
    d: int
    F: SlopePolynomial
    F_p: SlopePolynomial
    F_x: SlopePolynomial
    F_y: SlopePolynomial
    K: SlopePolynomial
    H: SlopePolynomial
    L: SlopePolynomial

    @property
    def domain(self):
        return self.F.domain


@dataclass(frozen=True)
class EliminationData:
    MF: FieldMatrix
    MF2p: FieldMatrix
    ML: FieldMatrix
    MH: FieldMatrix
    N: FieldMatrix
    B: FieldMatrix
    Emat: FieldMatrix
    Finf_inv: FieldMatrix
    i0: int | None = None  # 1-based deleted row of B
    T: FieldMatrix | None = None
    M: FieldMatrix | None = None

    @property
    def d(self) -> int:
        return self.B.rows


def structural_quantities(spec: WebSpec, domain=QXY) -> StructuralQuantities:
    d = spec.d
    F = spec.polynomial(domain)
    F_p = F.diff_p()
    F_x = F.diff("x")
    F_y = F.diff("y")
    K = (F_x + F_y.shift()).with_width(d + 1)
    H = (K * F_p.diff_p() - K.diff_p() * F_p).with_width(2 * d - 1)
    L = (K * F_p).with_width(2 * d)
    return StructuralQuantities(d, F, F_p, F_x, F_y, K, H, L)


def derivative_matrix(d: int, domain) -> FieldMatrix:
    """N, the (d-2)x(d-2) matrix of d/dp on polynomials of degree <= d-3."""
    return FieldMatrix.from_function(
        d - 2, d - 2, lambda i, j: domain.from_int(j) if j == i + 1 else domain.zero, domain
    )


def elimination_matrices(q: StructuralQuantities) -> EliminationData:
    d = q.d
    dom = q.domain
    rows = 3 * d - 3
    MF = convolution_matrix(q.F, 2 * d - 4)
    MF2p = convolution_matrix((q.F_p * q.F_p).with_width(2 * d - 1), d - 2)
    ML = convolution_matrix(q.L, d - 3).pad_rows(rows)
    MH = convolution_matrix(q.H, d - 3).pad_rows(rows)
    N = derivative_matrix(d, dom)

    Fsup = MF.delete_rows(d, rows)
    Finf = MF.delete_rows(0, d)
    try:
        Finf_inv = Finf.inverse()
    except SingularMatrix as exc:  # unit lower triangular whenever a_0 = 1
        raise AssertionError("M^-(F) is not invertible; leading coefficient of F must be 1") from exc
    coupling = Fsup @ Finf_inv

    B = MF2p.delete_rows(d, rows) - coupling @ MF2p.delete_rows(0, d)
    MHL = MH - ML @ N
    Emat = MHL.delete_rows(d, rows) - coupling @ MHL.delete_rows(0, d)
    return EliminationData(MF, MF2p, ML, MH, N, B, Emat, Finf_inv)


def pivot_order(d: int) -> list[int]:
    """Rows of B (1-based) to try deleting: d-2 first, then 1..d."""
    return [d - 2] + [i for i in range(1, d + 1) if i != d - 2]


def pivot_and_left_inverse(B: FieldMatrix, i0: int | None = None) -> tuple[int, FieldMatrix]:
    """Pick a row i0 (1-based) whose deletion leaves B invertible; T is that
    inverse with a zero column inserted at position i0, so T B = Id."""
    d = B.rows
    candidates = [i0] if i0 is not None else pivot_order(d)
    last_error: Exception | None = None
    for i in candidates:
        if not 1 <= i <= d:
            raise NoValidPivotRow(f"pivot row {i} outside 1..{d}")
        try:
            inv = B.delete_rows(i - 1).inverse()
        except SingularMatrix as exc:
            last_error = exc
            continue
        return i, inv.insert_zero_column(i - 1)
    if last_error is not None and type(last_error) is not SingularMatrix:
        raise last_error
    raise NoValidPivotRow("no row deletion of B yields an invertible matrix; degenerate web?")


def seed_matrix(T: FieldMatrix, Emat: FieldMatrix) -> FieldMatrix:
    """M = -T E, of size (d-1) x (d-2)."""
    return -(T @ Emat)


def compute_seed(spec: WebSpec, domain=QXY, i0: int | None = None) -> tuple[StructuralQuantities, EliminationData]:
    """Run the whole first stage; the returned EliminationData carries i0, T and M."""
    q = structural_quantities(spec, domain)
    elim = elimination_matrices(q)
    i0, T = pivot_and_left_inverse(elim.B, i0)
    M = seed_matrix(T, elim.Emat)
    return q, replace(elim, i0=i0, T=T, M=M)


def star_solution(M: FieldMatrix, r: FieldMatrix, free_ry) -> tuple[FieldMatrix, FieldMatrix]:
    """A pair (r_x, r_y) with I0 r_x + I^0 r_y = M r.

    The system has d - 1 equations in 2(d - 2) unknowns; ``free_ry`` fixes
    r_y[0 .. d-4] and the rest follows row by row.
    """
    dom = M.domain
    n = M.cols
    rhs = (M @ r).column(0)
    free_ry = [dom.convert(v) for v in free_ry]
    if len(free_ry) != n - 1:
        raise ValueError(f"expected {n - 1} free values, got {len(free_ry)}")
    ry = free_ry + [rhs[n]]
    rx = [rhs[0]] + [rhs[i] - ry[i - 1] for i in range(1, n)]
    return FieldMatrix.column_vector(rx, dom), FieldMatrix.column_vector(ry, dom)


def reconstruct_c(elim: EliminationData, r: FieldMatrix, rx: FieldMatrix, ry: FieldMatrix) -> SlopePolynomial:
    """Solve the lower 2d - 3 coefficient equations of the closedness identity for c."""
    d = elim.d
    dom = r.domain
    n = d - 2
    I0 = FieldMatrix.from_function(d - 1, n, lambda i, j: dom.one if i == j else dom.zero, dom)
    Iu = FieldMatrix.from_function(d - 1, n, lambda i, j: dom.one if i == j + 1 else dom.zero, dom)
    w = I0 @ rx + Iu @ ry
    MHL = elim.MH - elim.ML @ elim.N
    lower = elim.MF2p.delete_rows(0, d) @ w + MHL.delete_rows(0, d) @ r
    c = elim.Finf_inv @ lower
    return SlopePolynomial(c.column(0), dom)


def closedness_residual(
    q: StructuralQuantities, r: FieldMatrix, rx: FieldMatrix, ry: FieldMatrix, c: SlopePolynomial
) -> SlopePolynomial:
    """(F_p)^2 (r_x + p r_y) + H r - L r_p - c F, by direct polynomial products."""
    dom = q.domain
    rp = SlopePolynomial(r.column(0), dom)
    lhs = (q.F_p * q.F_p) * (SlopePolynomial(rx.column(0), dom) + SlopePolynomial(ry.column(0), dom).shift())
    lhs = lhs + q.H * rp - q.L * rp.diff_p()
    return lhs - c * q.F
