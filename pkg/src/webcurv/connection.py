"""Connection matrices in the adapted trivialization and their curvature."""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from fractions import Fraction

from .algebra import QXY, RationalFunction, as_rational
from .errors import JetDivisionByZero, NoValidPivotRow, PoleAtPoint, SingularMatrix, WrongDegree
from .seed import EliminationData, StructuralQuantities, compute_seed
from .jets import JetAlgebra
from .matrix import FieldMatrix
from .prolongation import (
    CramerSystem,
    IndexMaps,
    SectionTable,
    TensorTables,
    assemble_cramer,
    build_sections,
    index_maps,
    tensor_tables,
)
from .web import WebSpec


@dataclass
class ConnectionPair:
    Ax: FieldMatrix
    Ay: FieldMatrix


@dataclass
class ConcentrationReport:
    ok: bool
    violations: list[tuple[int, int]]  # 1-based (row, col) outside the last row

    def to_dict(self) -> dict:
        return {"ok": self.ok, "violations": [list(v) for v in self.violations]}


@dataclass
class CurvatureResult:
    KK: FieldMatrix
    i0_used: int | None = None
    concentration_ok: bool = True
    nonzero_row_index: int | None = None  # 1-based; None when KK = 0
    connection: ConnectionPair | None = None


def covariant_derivatives(
    sections: SectionTable, tables: TensorTables, U: FieldMatrix, maps: IndexMaps
) -> ConnectionPair:
    """Ax[b][a], Ay[b][a]: component on sigma_b of the covariant derivative of sigma_a."""
    d = maps.d
    m = maps.m
    top = d - 3
    slots = maps.free_slots()
    nab_x = [[None] * m for _ in range(m)]
    nab_y = [[None] * m for _ in range(m)]
    for a in range(1, m + 1):
        s = sections.s[a - 1]
        top_jet = U @ sections.WWW(a)  # stacked u[d-2-h, h], h = 0..d-2
        for b, (h, j) in enumerate(slots):
            sx = s[h][j].diff("x")
            sy = s[h][j].diff("y")
            if h < top:
                acc = None
                for k in range(h + 2):
                    row = tables.e(k, 1, h).row(j)
                    for r, coeff in enumerate(row):
                        v = s[k][r]
                        if coeff.is_zero() or v.is_zero():
                            continue
                        t = coeff * v
                        acc = t if acc is None else acc + t
                nab_x[b][a - 1] = sx if acc is None else sx - acc
                nab_y[b][a - 1] = sy - s[h + 1][j]
            else:
                nab_x[b][a - 1] = sx - top_jet[(d - 3) * (d - 2) + j, 0]
                nab_y[b][a - 1] = sy - top_jet[(d - 2) ** 2 + j, 0]
    dom = sections.domain
    return ConnectionPair(FieldMatrix(nab_x, dom), FieldMatrix(nab_y, dom))


def check_concentration(KK: FieldMatrix) -> ConcentrationReport:
    """Every row but the last must vanish identically."""
    bad = [(i + 1, j + 1) for i, j in KK.nonzero_positions() if i < KK.rows - 1]
    return ConcentrationReport(not bad, bad)


def curvature(conn: ConnectionPair) -> CurvatureResult:
    Ax, Ay = conn.Ax, conn.Ay
    KK = (Ay.diff("x") - Ax.diff("y")) + (Ax @ Ay - Ay @ Ax)
    report = check_concentration(KK)
    rows = sorted({i for i, _ in KK.nonzero_positions()})
    return CurvatureResult(
        KK,
        concentration_ok=report.ok,
        nonzero_row_index=rows[-1] + 1 if rows else None,
        connection=conn,
    )


@dataclass
class Pipeline:
    """All intermediate objects of one curvature computation."""

    spec: WebSpec
    quantities: StructuralQuantities
    elimination: EliminationData
    tables: TensorTables
    cramer: CramerSystem
    maps: IndexMaps
    sections: SectionTable
    connection: ConnectionPair
    result: CurvatureResult
    timing_ms: dict[str, int] = field(default_factory=dict)

    @property
    def M(self) -> FieldMatrix:
        return self.elimination.M

    @property
    def KK(self) -> FieldMatrix:
        return self.result.KK


def run_pipeline(spec: WebSpec, domain=QXY, i0: int | None = None) -> Pipeline:
    """Seed matrix -> prolongation tables -> sections -> connection -> curvature."""
    timing = {}
    t = time.perf_counter()

    def lap(name):
        nonlocal t
        now = time.perf_counter()
        timing[name] = int(round((now - t) * 1000))
        t = now

    q, elim = compute_seed(spec, domain, i0)
    lap("seed")
    tables = tensor_tables(elim.M, spec.d)
    cramer = assemble_cramer(tables)
    maps = index_maps(spec.d)
    sections = build_sections(tables, maps)
    lap("prolongation")
    conn = covariant_derivatives(sections, tables, cramer.U, maps)
    result = curvature(conn)
    result.i0_used = elim.i0
    lap("curvature")
    return Pipeline(spec, q, elim, tables, cramer, maps, sections, conn, result, timing)


def compute_curvature(spec: WebSpec, i0: int | None = None) -> CurvatureResult:
    return run_pipeline(spec, QXY, i0).result


def blaschke_d3(M: FieldMatrix) -> RationalFunction:
    """Scalar curvature (M_1)_y - (M_2)_x of a 3-web from its 2x1 seed matrix.

    The orientation matches the 1x1 matrix KK returned by the general pipeline.
    """
    if M.shape != (2, 1):
        raise WrongDegree(f"the closed form needs d = 3 (a 2x1 seed matrix), got {M.shape}")
    return M[0, 0].diff("y") - M[1, 0].diff("x")


def evaluate_at(mat: FieldMatrix, point) -> list[list[Fraction]]:
    x0, y0 = as_rational(point[0]), as_rational(point[1])
    out = []
    for i, row in enumerate(mat):
        vals = []
        for j, v in enumerate(row):
            try:
                vals.append(v.evaluate(x0, y0))
            except PoleAtPoint as exc:
                raise PoleAtPoint(f"entry ({i + 1}, {j + 1}): {exc}", (i + 1, j + 1)) from None
        out.append(vals)
    return out


def jet_order(d: int) -> int:
    """Truncation order for the jet backend.

    The coefficients a_i are differentiated at most d - 1 times on the way to
    the curvature (once inside H and L, d - 3 times in the E/G tables, once in
    the curvature itself), so order d leaves one spare degree.
    """
    return d


def jet_curvature_at(spec: WebSpec, point, i0: int | None = None) -> list[list[Fraction]]:
    """Curvature at ``point`` computed on truncated Taylor expansions."""
    alg = JetAlgebra(point, jet_order(spec.d))
    try:
        KK = run_pipeline(spec, alg, i0).KK
    except (SingularMatrix, NoValidPivotRow):
        if i0 is None:
            raise
        # the preferred row deletion is singular at this particular point
        KK = run_pipeline(spec, alg, None).KK
    out = []
    for row in KK:
        if any(v.order < 0 for v in row):
            raise JetDivisionByZero("jet order exhausted before the curvature")
        out.append([v.value for v in row])
    return out
