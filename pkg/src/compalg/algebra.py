"""Structure-constant algebras and bimodules.

Index conventions (all tensors are numpy object arrays of Fractions):

* product ``mu[k, i, j]``:    e_i . e_j = sum_k mu[k, i, j] e_k
* left action ``l[k, i, m]``:  e_i . m_m = sum_k l[k, i, m] m_k
* right action ``r[k, m, i]``: m_m . e_i = sum_k r[k, m, i] m_k

In each case axis 0 is the output and the remaining axes follow argument
order, so products and actions compose with the same helpers.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable

import numpy as np

from compalg import linalg
from compalg.errors import DimensionMismatch, InvalidStructure, NotACocycle


def tensor_from_triples(triples: Iterable, shape) -> np.ndarray:
    """Dense tensor from sparse ``(i, j, k, c)`` entries: e_i * e_j += c e_k."""
    t = linalg.zeros(*shape)
    for entry in triples:
        if isinstance(entry, dict):
            i, j, k, c = entry["i"], entry["j"], entry["k"], entry["c"]
        else:
            i, j, k, c = entry
        t[k, i, j] += linalg.frac(c)
    return t


def tensor_to_triples(t: np.ndarray) -> list[tuple[int, int, int, object]]:
    out = []
    for i in range(t.shape[1]):
        for j in range(t.shape[2]):
            for k in range(t.shape[0]):
                if t[k, i, j] != 0:
                    out.append((i, j, k, t[k, i, j]))
    return out


def bil(t: np.ndarray, x, y) -> np.ndarray:
    """Evaluate a bilinear tensor on coordinate vectors."""
    x = np.asarray(x, dtype=object)
    y = np.asarray(y, dtype=object)
    return np.tensordot(np.tensordot(t, y, axes=([2], [0])), x, axes=([1], [0]))


def compose_left(outer: np.ndarray, inner: np.ndarray) -> np.ndarray:
    """(x, y, z) -> outer(inner(x, y), z)."""
    t = np.tensordot(outer, inner, axes=([1], [0]))  # (o, z, x, y)
    return np.transpose(t, (0, 2, 3, 1))


def compose_right(outer: np.ndarray, inner: np.ndarray) -> np.ndarray:
    """(x, y, z) -> outer(x, inner(y, z))."""
    return np.tensordot(outer, inner, axes=([2], [0]))


def first_nonzero(residual: np.ndarray):
    """First argument multi-index (lexicographic) where ``residual`` is nonzero."""
    for idx in np.ndindex(*residual.shape[1:]):
        col = residual[(slice(None),) + idx]
        if any(x != 0 for x in col):
            return tuple(int(i) for i in idx)
    return None


@dataclass
class Check:
    name: str
    passed: bool
    witness: dict | None = None

    def as_dict(self) -> dict:
        d = {"name": self.name, "passed": self.passed}
        if self.witness is not None:
            d["witness"] = self.witness
        return d


@dataclass
class ValidationReport:
    checks: list[Check] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def __bool__(self) -> bool:
        return self.passed

    def first_failure(self) -> Check | None:
        return next((c for c in self.checks if not c.passed), None)

    def get(self, name: str) -> Check:
        return next(c for c in self.checks if c.name == name)

    def as_dict(self) -> dict:
        return {"status": "PASS" if self.passed else "FAIL",
                "checks": [c.as_dict() for c in self.checks]}


def _check(name: str, residual: np.ndarray, labels: tuple[str, ...]) -> Check:
    idx = first_nonzero(residual)
    if idx is None:
        return Check(name, True)
    value = [str(x) for x in residual[(slice(None),) + idx]]
    return Check(name, False, {**dict(zip(labels, idx)), "residual": value})


def _expect_shape(t: np.ndarray, shape, what: str) -> None:
    if tuple(t.shape) != tuple(shape):
        raise DimensionMismatch(f"{what} has shape {t.shape}, expected {shape}")


@dataclass(eq=False)
class AssociativeAlgebra:
    dim: int
    product: np.ndarray

    def __post_init__(self):
        self.product = linalg.as_array(self.product)
        _expect_shape(self.product, (self.dim,) * 3, "product")


@dataclass(eq=False)
class Bimodule:
    """Left/right actions of a single product on a space of dimension ``dim``."""

    dim: int
    left: np.ndarray
    right: np.ndarray


@dataclass(eq=False)
class CompatibleAlgebra:
    dim: int
    mu1: np.ndarray
    mu2: np.ndarray
    name: str = ""

    def __post_init__(self):
        self.mu1 = linalg.as_array(self.mu1)
        self.mu2 = linalg.as_array(self.mu2)
        _expect_shape(self.mu1, (self.dim,) * 3, "mu1")
        _expect_shape(self.mu2, (self.dim,) * 3, "mu2")

    @classmethod
    def from_triples(cls, dim, mu1, mu2, name=""):
        shape = (dim, dim, dim)
        return cls(dim, tensor_from_triples(mu1, shape), tensor_from_triples(mu2, shape), name)

    def product(self, which: int) -> np.ndarray:
        return self.mu1 if which == 1 else self.mu2

    def __eq__(self, other):
        return (isinstance(other, CompatibleAlgebra) and self.dim == other.dim
                and np.array_equal(self.mu1, other.mu1)
                and np.array_equal(self.mu2, other.mu2))


@dataclass(eq=False)
class CompatibleBimodule:
    dim: int
    dim_a: int
    l1: np.ndarray
    r1: np.ndarray
    l2: np.ndarray
    r2: np.ndarray

    def __post_init__(self):
        for name in ("l1", "l2"):
            setattr(self, name, linalg.as_array(getattr(self, name)))
            _expect_shape(getattr(self, name), (self.dim, self.dim_a, self.dim), name)
        for name in ("r1", "r2"):
            setattr(self, name, linalg.as_array(getattr(self, name)))
            _expect_shape(getattr(self, name), (self.dim, self.dim, self.dim_a), name)

    def actions(self, which: int) -> tuple[np.ndarray, np.ndarray]:
        return (self.l1, self.r1) if which == 1 else (self.l2, self.r2)

    def __eq__(self, other):
        return (isinstance(other, CompatibleBimodule) and self.dim == other.dim
                and self.dim_a == other.dim_a
                and all(np.array_equal(getattr(self, n), getattr(other, n))
                        for n in ("l1", "r1", "l2", "r2")))


def associativity_residual(mu: np.ndarray) -> np.ndarray:
    return compose_left(mu, mu) - compose_right(mu, mu)


def compatibility_residual(mu1: np.ndarray, mu2: np.ndarray) -> np.ndarray:
    lhs = compose_left(mu2, mu1) + compose_left(mu1, mu2)
    rhs = compose_right(mu1, mu2) + compose_right(mu2, mu1)
    return lhs - rhs


def validate_associative(mu: np.ndarray) -> ValidationReport:
    return ValidationReport([_check("assoc", associativity_residual(mu), ("a", "b", "c"))])


def validate_compatible_algebra(A: CompatibleAlgebra) -> ValidationReport:
    """Axiom-by-axiom check plus the Gerstenhaber bracket criterion.

    The bracket test is computed independently and must agree with the
    direct axioms; a disagreement is reported as its own failed check.
    """
    from compalg.gerstenhaber import bracket

    labels = ("a", "b", "c")
    axioms = [
        _check("assoc1", associativity_residual(A.mu1), labels),
        _check("assoc2", associativity_residual(A.mu2), labels),
        _check("compatibility", compatibility_residual(A.mu1, A.mu2), labels),
    ]
    brackets = [
        _check("[mu1,mu1]_G", bracket(A.mu1, A.mu1), labels),
        _check("[mu2,mu2]_G", bracket(A.mu2, A.mu2), labels),
        _check("[mu1,mu2]_G", bracket(A.mu1, A.mu2), labels),
    ]
    agree = all(c.passed for c in axioms) == all(c.passed for c in brackets)
    report = ValidationReport(axioms)
    report.checks.append(Check("bracket_criterion", all(c.passed for c in brackets),
                               None if all(c.passed for c in brackets)
                               else next(c for c in brackets if not c.passed).as_dict()))
    report.checks.append(Check("criteria_agree", agree))
    return report


def _bimodule_checks(mu, l, r, suffix: str) -> list[Check]:
    return [
        _check("left" + suffix, compose_left(l, mu) - compose_right(l, l), ("a", "b", "m")),
        _check("middle" + suffix, compose_left(r, l) - compose_right(l, r), ("a", "m", "b")),
        _check("right" + suffix, compose_left(r, r) - compose_right(r, mu), ("m", "a", "b")),
    ]


def validate_bimodule(mu: np.ndarray, M: Bimodule) -> ValidationReport:
    return ValidationReport(_bimodule_checks(mu, M.left, M.right, ""))


def _check_bimodule_shapes(A: CompatibleAlgebra, M: CompatibleBimodule) -> None:
    if M.dim_a != A.dim:
        raise DimensionMismatch(f"bimodule is over a {M.dim_a}-dim algebra, not {A.dim}")


def validate_compatible_bimodule(A: CompatibleAlgebra, M: CompatibleBimodule) -> ValidationReport:
    _check_bimodule_shapes(A, M)
    checks = _bimodule_checks(A.mu1, M.l1, M.r1, "1") + _bimodule_checks(A.mu2, M.l2, M.r2, "2")
    comp1 = (compose_left(M.l2, A.mu1) + compose_left(M.l1, A.mu2)
             - compose_right(M.l1, M.l2) - compose_right(M.l2, M.l1))
    comp2 = (compose_left(M.r2, M.l1) + compose_left(M.r1, M.l2)
             - compose_right(M.l1, M.r2) - compose_right(M.l2, M.r1))
    comp3 = (compose_left(M.r2, M.r1) + compose_left(M.r1, M.r2)
             - compose_right(M.r1, A.mu2) - compose_right(M.r2, A.mu1))
    checks += [
        _check("compat_left", comp1, ("a", "b", "m")),
        _check("compat_middle", comp2, ("a", "m", "b")),
        _check("compat_right", comp3, ("m", "a", "b")),
    ]
    return ValidationReport(checks)


def require_valid(A: CompatibleAlgebra, M: CompatibleBimodule | None = None) -> None:
    rep = validate_compatible_algebra(A)
    if not rep.passed:
        raise InvalidStructure("not a compatible associative algebra", rep)
    if M is not None:
        rep = validate_compatible_bimodule(A, M)
        if not rep.passed:
            raise InvalidStructure("not a compatible bimodule", rep)


def adjoint_bimodule(A: CompatibleAlgebra) -> CompatibleBimodule:
    return CompatibleBimodule(A.dim, A.dim, A.mu1.copy(), A.mu1.copy(), A.mu2.copy(), A.mu2.copy())


def zero_bimodule(A: CompatibleAlgebra, dim: int = 0) -> CompatibleBimodule:
    z_l = linalg.zeros(dim, A.dim, dim)
    z_r = linalg.zeros(dim, dim, A.dim)
    return CompatibleBimodule(dim, A.dim, z_l, z_r, z_l.copy(), z_r.copy())


def _dual_actions(l: np.ndarray, r: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    # (a.alpha)(m) = alpha(m.a), (alpha.a)(m) = alpha(a.m)
    return np.transpose(r, (1, 2, 0)).copy(), np.transpose(l, (2, 0, 1)).copy()


def dual_bimodule(A: CompatibleAlgebra, M: CompatibleBimodule) -> CompatibleBimodule:
    """The dual space with transposed actions, in the dual basis."""
    _check_bimodule_shapes(A, M)
    l1, r1 = _dual_actions(M.l1, M.r1)
    l2, r2 = _dual_actions(M.l2, M.r2)
    return CompatibleBimodule(M.dim, A.dim, l1, r1, l2, r2)


def _square_zero_extension(mu, l, r, f=None) -> np.ndarray:
    da, dm = mu.shape[0], l.shape[0]
    n = da + dm
    out = linalg.zeros(n, n, n)
    out[:da, :da, :da] = mu
    out[da:, :da, da:] = l
    out[da:, da:, :da] = r
    if f is not None:
        out[da:, :da, :da] += f
    return out


def semidirect_product(A: CompatibleAlgebra, M: CompatibleBimodule) -> CompatibleAlgebra:
    _check_bimodule_shapes(A, M)
    return CompatibleAlgebra(
        A.dim + M.dim,
        _square_zero_extension(A.mu1, M.l1, M.r1),
        _square_zero_extension(A.mu2, M.l2, M.r2),
    )


def twisted_pair(A: AssociativeAlgebra, M: Bimodule, f: np.ndarray) -> CompatibleAlgebra:
    """(A + M, untwisted semidirect product, f-twisted semidirect product)."""
    from compalg.cohomology import hochschild_apply

    f = linalg.as_array(f)
    _expect_shape(f, (M.dim, A.dim, A.dim), "twist")
    if not linalg.is_zero(hochschild_apply(A.product, M.left, M.right, f)):
        raise NotACocycle("twist is not a Hochschild 2-cocycle")
    return CompatibleAlgebra(
        A.dim + M.dim,
        _square_zero_extension(A.product, M.left, M.right),
        _square_zero_extension(A.product, M.left, M.right, f),
    )


def sum_algebra(A: CompatibleAlgebra, k=1, l=1) -> AssociativeAlgebra:
    k, l = linalg.frac(k), linalg.frac(l)
    return AssociativeAlgebra(A.dim, k * A.mu1 + l * A.mu2)


def sum_bimodule(M: CompatibleBimodule, k=1, l=1) -> Bimodule:
    k, l = linalg.frac(k), linalg.frac(l)
    return Bimodule(M.dim, k * M.l1 + l * M.l2, k * M.r1 + l * M.r2)
