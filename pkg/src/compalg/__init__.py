"""Exact-arithmetic toolkit for compatible associative algebras.

Algebras are given by structure constants over the rationals; the package
computes their cohomology and homology, Gerstenhaber-type brackets,
Maurer-Cartan checks, abelian extensions, Nijenhuis / Rota-Baxter operator
checks and finite-order deformations.
"""

from compalg.algebra import (
    CompatibleAlgebra,
    CompatibleBimodule,
    adjoint_bimodule,
    dual_bimodule,
    semidirect_product,
    validate_compatible_algebra,
    validate_compatible_bimodule,
)
from compalg.errors import (
    CompalgError,
    ContainmentError,
    DimensionMismatch,
    InvalidStructure,
    NotACocycle,
)
from compalg.fixtures import FIXTURES, fixture

__all__ = [
    "CompatibleAlgebra",
    "CompatibleBimodule",
    "adjoint_bimodule",
    "dual_bimodule",
    "semidirect_product",
    "validate_compatible_algebra",
    "validate_compatible_bimodule",
    "CompalgError",
    "ContainmentError",
    "DimensionMismatch",
    "InvalidStructure",
    "NotACocycle",
    "FIXTURES",
    "fixture",
]
