"""Hochschild coboundaries, the compatible cochain complex and its cohomology,
derivations, the comparison map to the sum algebra, and abelian extensions.

Coordinates: an n-cochain f: A^n -> M is an array of shape
``(dim M,) + (dim A,) * n`` flattened in C order, i.e. lexicographic in
(M index, A multi-index).  An element of C^n_c (n >= 1) is the
concatenation of its n component vectors.  Degree 0 uses coordinates with
respect to :func:`c0c_basis`.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Sequence

import numpy as np

from compalg import linalg
from compalg.algebra import (
    CompatibleAlgebra,
    CompatibleBimodule,
    _square_zero_extension,
    adjoint_bimodule,
    require_valid,
    validate_compatible_algebra,
)
from compalg.errors import DimensionMismatch, InvalidStructure, NotACocycle


def hochschild_apply(mu, l, r, f: np.ndarray) -> np.ndarray:
    """Hochschild coboundary of one cochain tensor ``f`` of arity n."""
    n = f.ndim - 1
    out = np.tensordot(l, f, axes=([2], [0]))  # a_1 . f(a_2, ...)
    for i in range(1, n + 1):
        t = np.tensordot(f, mu, axes=([i], [0]))
        t = np.moveaxis(t, [t.ndim - 2, t.ndim - 1], [i, i + 1])
        out = out - t if i % 2 else out + t
    t = np.moveaxis(np.tensordot(f, r, axes=([0], [1])), n, 0)  # f(...) . a_{n+1}
    return out - t if (n + 1) % 2 else out + t


def _matrix_of(fn, in_shape: tuple[int, ...], out_size: int) -> np.ndarray:
    size = int(np.prod(in_shape, dtype=int)) if in_shape else 1
    mat = linalg.zeros(out_size, size)
    for j in range(size):
        e = linalg.zeros(size)
        e[j] = linalg.ONE
        mat[:, j] = fn(e.reshape(in_shape)).reshape(-1)
    return mat


def hochschild_delta(mu, l, r, n: int) -> np.ndarray:
    """Matrix of the Hochschild coboundary C^n(A, M) -> C^{n+1}(A, M)."""
    dm, da = l.shape[0], mu.shape[0]
    return _matrix_of(lambda f: hochschild_apply(mu, l, r, f),
                      (dm,) + (da,) * n, dm * da ** (n + 1))


@dataclass
class DegreeReport:
    degree: int
    dim_cochains: int
    dim_cocycles: int
    dim_coboundaries: int
    dim_cohomology: int
    representatives: list = field(default_factory=list)

    def as_dict(self) -> dict:
        return {"degree": self.degree, "C": self.dim_cochains, "Z": self.dim_cocycles,
                "B": self.dim_coboundaries, "H": self.dim_cohomology}


@dataclass
class CochainComplexReport:
    degrees: list[DegreeReport]

    def dims(self) -> list[int]:
        return [d.dim_cohomology for d in self.degrees]

    def __getitem__(self, n: int) -> DegreeReport:
        return self.degrees[n]


class CompatibleCochainComplex:
    """Cached coboundary matrices of C*_c(A, M)."""

    def __init__(self, A: CompatibleAlgebra, M: CompatibleBimodule | None = None, check=True):
        M = adjoint_bimodule(A) if M is None else M
        if check:
            require_valid(A, M)
        self.A, self.M = A, M
        self._d1: dict[int, np.ndarray] = {}
        self._d2: dict[int, np.ndarray] = {}
        self._dc: dict[int, np.ndarray] = {}

    def size(self, n: int) -> int:
        """Dimension of C^n(A, M) (one component)."""
        return self.M.dim * self.A.dim ** n

    def dim(self, n: int) -> int:
        return self.c0c_matrix.shape[1] if n == 0 else n * self.size(n)

    def delta1(self, n: int) -> np.ndarray:
        if n not in self._d1:
            self._d1[n] = hochschild_delta(self.A.mu1, self.M.l1, self.M.r1, n)
        return self._d1[n]

    def delta2(self, n: int) -> np.ndarray:
        if n not in self._d2:
            self._d2[n] = hochschild_delta(self.A.mu2, self.M.l2, self.M.r2, n)
        return self._d2[n]

    @cached_property
    def c0c_matrix(self) -> np.ndarray:
        """Columns span {m : a.1 m - m.1 a = a.2 m - m.2 a for all a}."""
        M = self.M
        rows = []
        for a in range(self.A.dim):
            cond = M.l1[:, a, :] - M.r1[:, :, a] - M.l2[:, a, :] + M.r2[:, :, a]
            rows.append(cond)
        stacked = (np.concatenate(rows, axis=0) if rows else linalg.zeros(0, M.dim))
        return linalg.columns(linalg.kernel_basis(stacked), M.dim)

    def delta_c(self, n: int) -> np.ndarray:
        if n in self._dc:
            return self._dc[n]
        if n == 0:
            mat = linalg.matmul(self.delta1(0), self.c0c_matrix)
        else:
            s, t = self.size(n), self.size(n + 1)
            d1, d2 = self.delta1(n), self.delta2(n)
            mat = linalg.zeros((n + 1) * t, n * s)
            for j in range(n):
                mat[j * t:(j + 1) * t, j * s:(j + 1) * s] = d1
                mat[(j + 1) * t:(j + 2) * t, j * s:(j + 1) * s] = d2
        self._dc[n] = mat
        return mat

    def split(self, n: int, vec) -> tuple[np.ndarray, ...]:
        """Component tensors of a flat C^n_c vector (n >= 1)."""
        vec = np.asarray(vec, dtype=object).reshape(-1)
        s = self.size(n)
        shape = (self.M.dim,) + (self.A.dim,) * n
        return tuple(vec[j * s:(j + 1) * s].reshape(shape).copy() for j in range(n))

    def join(self, components: Sequence[np.ndarray]) -> np.ndarray:
        n = len(components)
        for c in components:
            if c.shape != (self.M.dim,) + (self.A.dim,) * n:
                raise DimensionMismatch(f"component of shape {c.shape} is not an {n}-cochain")
        return np.concatenate([np.asarray(c, dtype=object).reshape(-1) for c in components])

    def apply(self, components: Sequence[np.ndarray]) -> tuple[np.ndarray, ...]:
        n = len(components)
        return self.split(n + 1, linalg.matvec(self.delta_c(n), self.join(components)))

    def is_cocycle(self, components: Sequence[np.ndarray]) -> bool:
        return linalg.is_zero(linalg.matvec(self.delta_c(len(components)), self.join(components)))

    def subquotient(self, n: int) -> linalg.Subquotient:
        """Z^n_c / B^n_c in C^n_c coordinates (degree 0: M coordinates)."""
        z = linalg.kernel_basis(self.delta_c(n))
        if n == 0:
            z = [linalg.matvec(self.c0c_matrix, v) for v in z]
            return linalg.subquotient(linalg.SubquotientPresentation(self.M.dim, tuple(z)))
        b = linalg.image_basis(self.delta_c(n - 1))
        return linalg.subquotient(linalg.SubquotientPresentation(self.dim(n), tuple(z), tuple(b)))

    def report(self, n_max: int) -> CochainComplexReport:
        degrees = []
        for n in range(n_max + 1):
            q = self.subquotient(n)
            degrees.append(DegreeReport(n, self.dim(n), len(q.numerator_basis),
                                        len(q.denominator_basis), q.dim, q.representatives))
        return CochainComplexReport(degrees)

    def coboundary_preimage(self, components: Sequence[np.ndarray]):
        """Some g with delta_c g equal to the given tuple, or None."""
        n = len(components)
        x = linalg.solve(self.delta_c(n - 1), self.join(components))
        if x is None:
            return None
        if n == 1:
            return linalg.matvec(self.c0c_matrix, x)
        return self.split(n - 1, x)


def c0c_basis(A: CompatibleAlgebra, M: CompatibleBimodule) -> list[np.ndarray]:
    cx = CompatibleCochainComplex(A, M)
    return [cx.c0c_matrix[:, j].copy() for j in range(cx.c0c_matrix.shape[1])]


def delta_c_matrix(A: CompatibleAlgebra, M: CompatibleBimodule, n: int) -> np.ndarray:
    return CompatibleCochainComplex(A, M).delta_c(n)


def cohomology(A: CompatibleAlgebra, M: CompatibleBimodule | None = None,
               n_max: int = 3) -> CochainComplexReport:
    return CompatibleCochainComplex(A, M).report(n_max)


@dataclass
class Derivations:
    derivations: list[np.ndarray]
    inner: list[np.ndarray]
    h1_dim: int


def derivations(A: CompatibleAlgebra, M: CompatibleBimodule | None = None) -> Derivations:
    """Derivations for both products, inner ones, and dim Der / InnDer."""
    cx = CompatibleCochainComplex(A, M)
    shape = (cx.M.dim, A.dim)
    der = [v.reshape(shape) for v in linalg.kernel_basis(cx.delta_c(1))]
    inner = [v.reshape(shape) for v in linalg.image_basis(cx.delta_c(0))]
    return Derivations(der, inner, len(der) - len(inner))


# -- comparison with the sum algebra ---------------------------------------

@dataclass
class ChainMapReport:
    residuals: dict[int, np.ndarray]

    @property
    def passed(self) -> bool:
        return all(linalg.is_zero(r) for r in self.residuals.values())


def phi_matrix(cx: CompatibleCochainComplex, n: int) -> np.ndarray:
    """Component sum C^n_c -> C^n.  In degree 0 it is half the inclusion of
    C^0_c, the scaling that makes the degree-0 square commute (on C^0_c the
    sum-algebra coboundary is twice delta_1)."""
    if n == 0:
        return cx.c0c_matrix * linalg.Fraction(1, 2)
    s = cx.size(n)
    return np.concatenate([linalg.identity(s)] * n, axis=1)


def phi_chain_map_check(A: CompatibleAlgebra, n_max: int = 2) -> ChainMapReport:
    cx = CompatibleCochainComplex(A)
    mu = A.mu1 + A.mu2
    residuals = {}
    for n in range(n_max + 1):
        d_sum = hochschild_delta(mu, mu, mu, n)
        lhs = linalg.matmul(d_sum, phi_matrix(cx, n))
        rhs = linalg.matmul(phi_matrix(cx, n + 1), cx.delta_c(n))
        residuals[n] = lhs - rhs
    return ChainMapReport(residuals)


# -- abelian extensions -----------------------------------------------------

@dataclass(eq=False)
class ExtensionDatum:
    """0 -> M --i--> B --j--> A -> 0 with a section s of j."""

    base: CompatibleAlgebra
    total: CompatibleAlgebra
    i: np.ndarray
    j: np.ndarray
    s: np.ndarray

    @property
    def dim_m(self) -> int:
        return self.i.shape[1]

    def m_coords(self, v) -> np.ndarray:
        x = linalg.solve(self.i, v)
        if x is None:
            raise InvalidStructure("element is not in the image of the inclusion")
        return x


def validate_extension(E: ExtensionDatum) -> list[str]:
    """Names of violated extension invariants (empty when valid)."""
    A, B = E.base, E.total
    problems = []
    if not linalg.is_zero(linalg.matmul(E.j, E.i)):
        problems.append("j o i != 0")
    if not np.array_equal(linalg.matmul(E.j, E.s), linalg.identity(A.dim)):
        problems.append("j o s != id")
    if linalg.rank(E.i) != E.i.shape[1]:
        problems.append("i not injective")
    if linalg.rank(E.j) != A.dim or B.dim != A.dim + E.dim_m:
        problems.append("sequence not exact")
    if not validate_compatible_algebra(B).passed:
        problems.append("total algebra invalid")
    for which in (1, 2):
        muB, mu = B.product(which), A.product(which)
        # j is a morphism: j mu_B(x, y) = mu(j x, j y)
        lhs = np.tensordot(E.j, muB, axes=([1], [0]))
        rhs = np.tensordot(np.tensordot(mu, E.j, axes=([1], [0])), E.j, axes=([1], [0]))
        if not np.array_equal(lhs, rhs):
            problems.append(f"j not multiplicative for mu{which}")
        mm = np.tensordot(np.tensordot(muB, E.i, axes=([1], [0])), E.i, axes=([1], [0]))
        if not linalg.is_zero(mm):
            problems.append(f"M not square-zero for mu{which}")
    return problems


def _pull(muB, x_map, y_map) -> np.ndarray:
    """(u, v) -> muB(x_map u, y_map v) as a tensor (out in B, u, v)."""
    t = np.tensordot(muB, x_map, axes=([1], [0]))  # (o, yB, u)
    t = np.tensordot(t, y_map, axes=([1], [0]))  # (o, u, v)
    return t


def induced_bimodule(E: ExtensionDatum, s: np.ndarray | None = None) -> CompatibleBimodule:
    s = E.s if s is None else s
    acts = []
    for which in (1, 2):
        muB = E.total.product(which)
        l = _pull(muB, s, E.i)
        r = _pull(muB, E.i, s)
        acts.append(tuple(np.apply_along_axis(E.m_coords, 0, t) for t in (l, r)))
    return CompatibleBimodule(E.dim_m, E.base.dim, acts[0][0], acts[0][1], acts[1][0], acts[1][1])


def extension_from_cocycle(A: CompatibleAlgebra, M: CompatibleBimodule,
                           pair: Sequence[np.ndarray]) -> ExtensionDatum:
    cx = CompatibleCochainComplex(A, M)
    if len(pair) != 2 or not cx.is_cocycle(pair):
        raise NotACocycle("pair is not a compatible 2-cocycle")
    B = CompatibleAlgebra(
        A.dim + M.dim,
        _square_zero_extension(A.mu1, M.l1, M.r1, pair[0]),
        _square_zero_extension(A.mu2, M.l2, M.r2, pair[1]),
    )
    n = A.dim + M.dim
    i = linalg.zeros(n, M.dim)
    i[A.dim:, :] = linalg.identity(M.dim)
    j = linalg.zeros(A.dim, n)
    j[:, :A.dim] = linalg.identity(A.dim)
    s = linalg.zeros(n, A.dim)
    s[:A.dim, :] = linalg.identity(A.dim)
    return ExtensionDatum(A, B, i, j, s)


def cocycle_from_extension(E: ExtensionDatum, s: np.ndarray | None = None) -> tuple[np.ndarray, ...]:
    problems = validate_extension(E)
    if problems:
        raise InvalidStructure("invalid extension: " + "; ".join(problems))
    s = E.s if s is None else linalg.as_array(s)
    if not np.array_equal(linalg.matmul(E.j, s), linalg.identity(E.base.dim)):
        raise InvalidStructure("s is not a section of j")
    pair = []
    for which in (1, 2):
        defect = _pull(E.total.product(which), s, s)
        defect = defect - np.tensordot(s, E.base.product(which), axes=([1], [0]))
        pair.append(np.apply_along_axis(E.m_coords, 0, defect))
    return tuple(pair)


def equivalence_morphism(E1: ExtensionDatum, E2: ExtensionDatum) -> np.ndarray | None:
    """A morphism B1 -> B2 over id_A and id_M, or None if none exists.

    Writing both extensions in section coordinates, such a map has the form
    (a, m) -> (a, m + g(a)) and exists exactly when the two cocycles differ
    by the coboundary of g.
    """
    M1, M2 = induced_bimodule(E1), induced_bimodule(E2)
    if M1 != M2 or E1.base != E2.base:
        return None
    cx = CompatibleCochainComplex(E1.base, M1)
    f1, f2 = cocycle_from_extension(E1), cocycle_from_extension(E2)
    g = cx.coboundary_preimage(tuple(a - b for a, b in zip(f1, f2)))
    if g is None:
        return None
    g = g[0]
    # pi: B1 -> M, b = s j b + i pi b
    proj = np.apply_along_axis(E1.m_coords, 0,
                               linalg.identity(E1.total.dim) - linalg.matmul(E1.s, E1.j))
    phi = (linalg.matmul(E2.s, E1.j) + linalg.matmul(E2.i, proj)
           + linalg.matmul(E2.i, linalg.matmul(g, E1.j)))
    for which in (1, 2):
        lhs = np.tensordot(phi, E1.total.product(which), axes=([1], [0]))
        rhs = _pull(E2.total.product(which), phi, phi)
        if not np.array_equal(lhs, rhs):  # pragma: no cover - guarded by the cocycle algebra
            raise AssertionError("constructed equivalence is not multiplicative")
    return phi


def extensions_equivalent(E1: ExtensionDatum, E2: ExtensionDatum) -> bool:
    return equivalence_morphism(E1, E2) is not None


def cohomology_class(A: CompatibleAlgebra, M: CompatibleBimodule | None,
                     components: Sequence[np.ndarray]) -> np.ndarray:
    """Coordinates of a cocycle's class along the H^n_c representatives."""
    cx = CompatibleCochainComplex(A, M)
    if not cx.is_cocycle(components):
        raise NotACocycle("not a cocycle")
    return cx.subquotient(len(components)).coordinates(cx.join(components))
