"""Small hand-checkable algebras used throughout the tests and the CLI.

F1  the ground field, both products ordinary multiplication
F2  dual numbers k[x]/(x^2) on (1, x), second product zero
F3  dual numbers with second product (a, b) -> x a b, the product deformed
    by the Nijenhuis operator "multiply by x"
F4  two orthogonal idempotents: e1 e1 = e1 for mu1, e2 e2 = e2 for mu2
NC  non-commutative: e1 e1 = e1, e1 e2 = e2 for mu1, mu2 = 0
"""

from __future__ import annotations

from compalg.algebra import CompatibleAlgebra
from compalg import linalg

_DUAL = [(0, 0, 0, 1), (0, 1, 1, 1), (1, 0, 1, 1)]

_SPECS = {
    "F1": (1, [(0, 0, 0, 1)], [(0, 0, 0, 1)]),
    "F2": (2, _DUAL, []),
    "F3": (2, _DUAL, [(0, 0, 1, 1)]),
    "F4": (2, [(0, 0, 0, 1)], [(1, 1, 1, 1)]),
    "NC": (2, [(0, 0, 0, 1), (0, 1, 1, 1)], []),
}

BASIS_NAMES = {"F2": ["1", "x"], "F3": ["1", "x"]}

FIXTURES = tuple(_SPECS)


def fixture(name: str) -> CompatibleAlgebra:
    try:
        dim, mu1, mu2 = _SPECS[name]
    except KeyError:
        raise KeyError(f"unknown fixture {name!r}; choose from {', '.join(FIXTURES)}") from None
    return CompatibleAlgebra.from_triples(dim, mu1, mu2, name=name)


def mult_by_x():
    """Left multiplication by x on the dual numbers: 1 -> x, x -> 0."""
    return linalg.as_array([[0, 0], [1, 0]])
