"""Schema 定义"""
from .common import ErrorResponse, ArrayModel
from .grid import ChebyshevGrid, MappedGrid
from .linalg import SvdFactorization, SolveReport
from .quadrature import (
    Oscillator,
    IntegralProblem,
    QuadratureResult,
    ReferenceValue,
)
from .records import CsvRecord, ProblemEntry, ProblemPiece, TableBlock, CSV_COLUMNS

__all__ = [
    "ErrorResponse",
    "ArrayModel",
    "ChebyshevGrid",
    "MappedGrid",
    "SvdFactorization",
    "SolveReport",
    "Oscillator",
    "IntegralProblem",
    "QuadratureResult",
    "ReferenceValue",
    "CsvRecord",
    "ProblemEntry",
    "ProblemPiece",
    "TableBlock",
    "CSV_COLUMNS",
]
