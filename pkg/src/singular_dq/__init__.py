"""Exact deformation quantization of (possibly singular) analytic spaces:
a modified Fedosov construction on cotangent bundles, Moyal normal forms,
left-ideal normalizers and quotient algebras."""

from .superalgebra import (
    GaussianRational,
    I,
    Var,
    WeylElement,
    Grading,
    superproduct,
    partial,
    restrict_00,
    grade_split,
)
from .starproducts import (
    Kind,
    StarConfig,
    WEYL,
    MOYAL,
    star,
    commutator,
    opposite_check,
    lambda_to_hbar,
    hbar_to_lambda,
)
from .exprio import ParseError, parse, evaluate, parse_element, print_canonical

__version__ = "0.1.0"
