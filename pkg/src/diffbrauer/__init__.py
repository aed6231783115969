"""Differential forms, Cartier operators and p-torsion Brauer pairings over F_q(t)."""
from .ff import FieldSpec, FqElem, get_field, parse_field
from .poly import Poly, RationalFunction
from .series import DiffForm, LaurentSeries, NotExact, PrecisionLoss

__all__ = ["DiffForm", "FieldSpec", "FqElem", "LaurentSeries", "NotExact", "Poly",
           "PrecisionLoss", "RationalFunction", "get_field", "parse_field"]
__version__ = "0.1.0"
