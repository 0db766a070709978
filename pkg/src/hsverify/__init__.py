"""Numerical checks of Hilbert-Schmidt criteria for weighted composition and
radial composition-differentiation operators on Hardy and Bergman spaces of
the ball and polydisk."""

from .errors import (
    DimensionMismatch,
    ExponentOverflow,
    ExpressionSyntaxError,
    HSError,
    InvalidWeight,
    NonFiniteSample,
    ParseError,
    SchemaError,
    UnknownVariable,
    UnsupportedPairing,
    UnsupportedSpace,
    ValidationError,
)
from .hs import HSJob, HSReport, Tolerances, Verdict, make_job, verify
from .multiindex import MultiIndex, enumerate_degree
from .parser import format_poly, parse_poly
from .series import PolynomialMap, Target, VectorSymbol, radial_derivative
from .spaces import OperatorKind, OpKind, SourceSpace, SpaceKind, target_beta

__version__ = "0.1.0"
