"""Connection matrices of poset-graded chain complexes over prime fields."""

from .field import FieldElement, PrimeField
from .poset import Poset, build_poset
from .complex import Generator, GradedComplex, ValidationError, ValidationReport, validate
from .reduction import ReducedState, SeparatingBasis, clearing_reduce, conley_index_dims
from .connect import ConleyComplex, compute_connection_matrix, extract, global_reduce, prune

__all__ = [
    "ConleyComplex",
    "FieldElement",
    "Generator",
    "GradedComplex",
    "Poset",
    "PrimeField",
    "ReducedState",
    "SeparatingBasis",
    "ValidationError",
    "ValidationReport",
    "build_poset",
    "clearing_reduce",
    "compute_connection_matrix",
    "conley_index_dims",
    "extract",
    "global_reduce",
    "prune",
    "validate",
]
