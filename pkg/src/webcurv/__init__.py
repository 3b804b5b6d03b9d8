"""Exact curvature of planar d-webs given implicitly by F(x, y, y') = 0."""

from .algebra import QXY, BiPoly, RationalFunction, parse_expression
from .connection import (
    blaschke_d3,
    check_concentration,
    compute_curvature,
    curvature,
    evaluate_at,
    jet_curvature_at,
    run_pipeline,
)
from .errors import WebCurvatureError
from .matrix import FieldMatrix
from .slope import SlopePolynomial, convolution_matrix
from .web import WebSpec, interpolation_r, parse_web_spec, slopes_to_coefficients, validate_web

__all__ = [
    "QXY",
    "BiPoly",
    "FieldMatrix",
    "RationalFunction",
    "SlopePolynomial",
    "WebCurvatureError",
    "WebSpec",
    "blaschke_d3",
    "check_concentration",
    "compute_curvature",
    "convolution_matrix",
    "curvature",
    "evaluate_at",
    "interpolation_r",
    "jet_curvature_at",
    "parse_expression",
    "parse_web_spec",
    "run_pipeline",
    "slopes_to_coefficients",
    "validate_web",
]
