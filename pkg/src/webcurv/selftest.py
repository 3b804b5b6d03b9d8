"""Built-in invariant corpus run by ``webcurv selftest``."""

from __future__ import annotations

import contextlib
from dataclasses import replace
from typing import Callable, Iterator

from . import seed as seed_module
from .algebra import QXY, parse_expression
from .connection import blaschke_d3, evaluate_at, jet_curvature_at, run_pipeline
from .seed import closedness_residual, reconstruct_c, star_solution
from .matrix import FieldMatrix
from .prolongation import cramer_matrix, shift_matrix
from .web import WebSpec

CONSTANT_SLOPES = ["0", "1", "-1", "2", "-2", "3"]


def constant_web(d: int) -> WebSpec:
    return WebSpec.from_slopes(CONSTANT_SLOPES[:d])


def sheared_web(d: int) -> WebSpec:
    """Constant-slope web pushed through (x, y) -> (x, y + x^2); flat but not constant."""
    return WebSpec.from_slopes([f"{s}+2*x" for s in CONSTANT_SLOPES[:d]])


D3_WEBS = {
    "p^3 - y": WebSpec.from_coefficients(["0", "0", "-y"]),
    "p^3 - p + x*y": WebSpec.from_coefficients(["0", "-1", "x*y"]),
}
D4_WEB = WebSpec.from_coefficients(["x", "y^2-1", "x*y+2", "x^2+3"])


def _check_constant_webs() -> bool:
    return all(run_pipeline(constant_web(d)).KK.is_zero() for d in range(3, 7))


def _check_sheared_webs() -> bool:
    return all(run_pipeline(sheared_web(d)).KK.is_zero() for d in (3, 4))


def _check_d3_dual_path() -> bool:
    for spec in D3_WEBS.values():
        pipe = run_pipeline(spec)
        if blaschke_d3(pipe.M) != pipe.KK[0, 0]:
            return False
    return True


def _check_hand_seed() -> bool:
    """For F = p^3 - y: K = -p, H = -3p^2, L = -3p^3, and M = [0; 1/(3y)] by hand."""
    q, elim = seed_module.compute_seed(D3_WEBS["p^3 - y"])
    y = parse_expression("y")
    expected = FieldMatrix.column_vector([QXY.zero, 1 / (3 * y)], QXY)
    return elim.M == expected and q.H.evaluate_p(1) == -3 * y.diff("y")


def _check_d4_concentration() -> bool:
    return run_pipeline(D4_WEB).result.concentration_ok


def _check_left_inverse() -> bool:
    for spec in [*D3_WEBS.values(), D4_WEB, sheared_web(4)]:
        _, elim = seed_module.compute_seed(spec)
        d = spec.d
        if elim.T @ elim.B != FieldMatrix.identity(d - 1, QXY) or elim.B.rank() != d - 1:
            return False
    return True


def _check_cramer_matrix() -> bool:
    for d in range(3, 7):
        P = cramer_matrix(d, QXY)
        if any(not (v.is_zero() or v == 1) for row in P for v in row):
            return False
        if P.inverse() @ P != FieldMatrix.identity(P.rows, QXY):
            return False
    return True


def _check_shift_nilpotent() -> bool:
    for d in range(3, 7):
        K = shift_matrix(d, QXY)
        power = FieldMatrix.identity(d - 2, QXY)
        for _ in range(d - 2):
            power = power @ K
        if not power.is_zero():
            return False
    return True


def _check_closedness() -> bool:
    for spec in (D3_WEBS["p^3 - p + x*y"], D4_WEB):
        q, elim = seed_module.compute_seed(spec)
        n = spec.d - 2
        r = FieldMatrix.column_vector([parse_expression(t) for t in ("x+2", "3*y-1")[:n]], QXY)
        rx, ry = star_solution(elim.M, r, ["x*y"][: n - 1])
        c = reconstruct_c(elim, r, rx, ry)
        if not closedness_residual(q, r, rx, ry, c).is_zero():
            return False
    return True


def _check_jet_backend() -> bool:
    point = (1, 2)
    return jet_curvature_at(D4_WEB, point) == evaluate_at(run_pipeline(D4_WEB).KK, point)


CHECKS: list[tuple[str, Callable[[], bool]]] = [
    ("constant webs d=3..6 are flat", _check_constant_webs),
    ("sheared constant webs d=3,4 are flat", _check_sheared_webs),
    ("d=3 closed form equals 1x1 curvature", _check_d3_dual_path),
    ("p^3 - y seed matrix matches hand value", _check_hand_seed),
    ("d=4 curvature concentrated on last row", _check_d4_concentration),
    ("T.B = Id and rank B = d-1", _check_left_inverse),
    ("P is 0/1 and invertible, d=3..6", _check_cramer_matrix),
    ("Kmat^(d-2) = 0, d=3..6", _check_shift_nilpotent),
    ("closedness identity reconstructs c", _check_closedness),
    ("jet backend matches symbolic value", _check_jet_backend),
]


@contextlib.contextmanager
def injected_fault(name: str | None) -> Iterator[None]:
    """Negative controls used to prove the corpus can fail."""
    if name is None:
        yield
        return
    if name != "h-sign":
        raise ValueError(f"unknown fault {name!r}")
    original = seed_module.structural_quantities

    def flipped(spec, domain=QXY):
        q = original(spec, domain)
        return replace(q, H=-q.H)

    seed_module.structural_quantities = flipped
    try:
        yield
    finally:
        seed_module.structural_quantities = original


def run_selftest(fault: str | None = None) -> list[tuple[str, bool, str]]:
    results = []
    with injected_fault(fault):
        for name, check in CHECKS:
            try:
                ok = bool(check())
                detail = ""
            except Exception as exc:  # a crash is a failed check, reported in the table
                ok = False
                detail = f"{type(exc).__name__}: {exc}"
            results.append((name, ok, detail))
    return results


def format_table(results: list[tuple[str, bool, str]]) -> str:
    width = max(len(name) for name, _, _ in results)
    lines = []
    for name, ok, detail in results:
        line = f"{'PASS' if ok else 'FAIL'}  {name:<{width}}"
        if detail:
            line += f"  ({detail})"
        lines.append(line.rstrip())
    passed = sum(ok for _, ok, _ in results)
    lines.append(f"{passed}/{len(results)} checks passed")
    return "\n".join(lines)
