"""Skew-symmetrization to compatible Lie algebras and the compatible
Chevalley-Eilenberg complex.

Lie cochains of arity n are stored by their values on strictly increasing
index tuples: coordinate (v, i_1 < ... < i_n).  Internally they are expanded
to full alternating tensors of shape ``(dim V,) + (dim g,) * n``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from itertools import combinations, permutations

import numpy as np

from compalg import linalg
from compalg.algebra import (
    Check,
    CompatibleAlgebra,
    CompatibleBimodule,
    ValidationReport,
    _check,
    adjoint_bimodule,
    compose_left,
    compose_right,
)
from compalg.cohomology import CompatibleCochainComplex, ChainMapReport, _matrix_of
from compalg.errors import DimensionMismatch, InvalidStructure


@dataclass(eq=False)
class CompatibleLieAlgebra:
    dim: int
    bracket1: np.ndarray
    bracket2: np.ndarray

    def bracket(self, which: int) -> np.ndarray:
        return self.bracket1 if which == 1 else self.bracket2


@dataclass(eq=False)
class CompatibleLieRep:
    """``rho[k, x, v]``: coefficient of v_k in rho(e_x) v_v."""

    dim: int
    dim_g: int
    rho1: np.ndarray
    rho2: np.ndarray

    def rho(self, which: int) -> np.ndarray:
        return self.rho1 if which == 1 else self.rho2


def _cyclic(t: np.ndarray) -> np.ndarray:
    return t + np.transpose(t, (0, 3, 1, 2)) + np.transpose(t, (0, 2, 3, 1))


def validate_compatible_lie(L: CompatibleLieAlgebra) -> ValidationReport:
    labels = ("x", "y", "z")
    checks = []
    for which in (1, 2):
        b = L.bracket(which)
        skew = b + np.transpose(b, (0, 2, 1))
        checks.append(_check(f"skew{which}", skew, ("x", "y")))
        checks.append(_check(f"jacobi{which}", _cyclic(compose_right(b, b)), labels))
    mixed = _cyclic(compose_right(L.bracket2, L.bracket1)) + _cyclic(compose_right(L.bracket1, L.bracket2))
    checks.append(_check("compatibility", mixed, labels))
    return ValidationReport(checks)


def _commutator(t: np.ndarray) -> np.ndarray:
    return t - np.transpose(t, (0, 2, 1))


def validate_compatible_rep(L: CompatibleLieAlgebra, V: CompatibleLieRep) -> ValidationReport:
    labels = ("x", "y", "v")
    checks = []
    for which in (1, 2):
        rho, b = V.rho(which), L.bracket(which)
        rr = compose_right(rho, rho)
        res = compose_left(rho, b) - (rr - np.transpose(rr, (0, 2, 1, 3)))
        checks.append(_check(f"rep{which}", res, labels))
    r12 = compose_right(V.rho1, V.rho2)
    r21 = compose_right(V.rho2, V.rho1)
    lhs = compose_left(V.rho2, L.bracket1) + compose_left(V.rho1, L.bracket2)
    rhs = r12 - np.transpose(r12, (0, 2, 1, 3)) + r21 - np.transpose(r21, (0, 2, 1, 3))
    checks.append(_check("compatibility", lhs - rhs, labels))
    return ValidationReport(checks)


def skew_symmetrize_algebra(A: CompatibleAlgebra) -> CompatibleLieAlgebra:
    return CompatibleLieAlgebra(A.dim, _commutator(A.mu1), _commutator(A.mu2))


def skew_symmetrize_bimodule(A: CompatibleAlgebra, M: CompatibleBimodule) -> CompatibleLieRep:
    # rho(a) m = a . m - m . a
    rho = [l - np.transpose(r, (0, 2, 1)) for l, r in ((M.l1, M.r1), (M.l2, M.r2))]
    return CompatibleLieRep(M.dim, A.dim, rho[0], rho[1])


def _sign(perm) -> int:
    sign, seen = 1, list(perm)
    for i in range(len(seen)):
        while seen[i] != i:
            j = seen[i]
            seen[i], seen[j] = seen[j], seen[i]
            sign = -sign
    return sign


def skew(f: np.ndarray) -> np.ndarray:
    """Signed sum over all permutations of the arguments (no 1/n! factor)."""
    n = f.ndim - 1
    out = None
    for perm in permutations(range(n)):
        t = np.transpose(f, (0,) + tuple(p + 1 for p in perm))
        t = t if _sign(perm) > 0 else -t
        out = t if out is None else out + t
    return out


def ce_apply(bracket: np.ndarray, rho: np.ndarray, f: np.ndarray) -> np.ndarray:
    """Chevalley-Eilenberg coboundary of an alternating cochain tensor."""
    n = f.ndim - 1
    base = np.tensordot(rho, f, axes=([2], [0]))  # (o, x, rest)
    out = None
    for i in range(1, n + 2):
        t = np.moveaxis(base, 1, i)
        t = t if (i + 1) % 2 == 0 else -t
        out = t if out is None else out + t
    if n >= 1:
        inner = np.tensordot(f, bracket, axes=([1], [0]))  # (o, rest, xi, xj)
        nd = inner.ndim
        for j in range(1, n + 2):
            for i in range(1, j):
                t = np.moveaxis(inner, [nd - 2, nd - 1], [i, j])
                out = out + t if (i + j) % 2 == 0 else out - t
    return out


class LieCochainComplex:
    def __init__(self, L: CompatibleLieAlgebra, V: CompatibleLieRep, check=True):
        if V.dim_g != L.dim:
            raise DimensionMismatch("representation is over a different Lie algebra")
        if check:
            for rep in (validate_compatible_lie(L), validate_compatible_rep(L, V)):
                if not rep.passed:
                    raise InvalidStructure("invalid compatible Lie data", rep)
        self.L, self.V = L, V
        self._cache: dict = {}

    def index(self, n: int) -> list[tuple[int, ...]]:
        return list(combinations(range(self.L.dim), n))

    def size(self, n: int) -> int:
        return self.V.dim * len(self.index(n))

    def dim(self, n: int) -> int:
        return self.c0_matrix.shape[1] if n == 0 else n * self.size(n)

    def expand(self, n: int, coords) -> np.ndarray:
        """Alternating tensor from increasing-index coordinates."""
        coords = np.asarray(coords, dtype=object).reshape(self.V.dim, -1)
        t = linalg.zeros(*((self.V.dim,) + (self.L.dim,) * n))
        for col, idx in enumerate(self.index(n)):
            for perm in permutations(range(n)):
                t[(slice(None),) + tuple(idx[p] for p in perm)] = _sign(perm) * coords[:, col]
        return t

    def restrict(self, n: int, t: np.ndarray) -> np.ndarray:
        cols = [t[(slice(None),) + idx] for idx in self.index(n)]
        return linalg.columns(cols, self.V.dim).reshape(-1) if cols else linalg.zeros(0)

    def ce_matrix(self, n: int, which: int) -> np.ndarray:
        key = ("ce", n, which)
        if key not in self._cache:
            b, rho = self.L.bracket(which), self.V.rho(which)
            self._cache[key] = _matrix_of(
                lambda c: self.restrict(n + 1, ce_apply(b, rho, self.expand(n, c))),
                (self.size(n),), self.size(n + 1))
        return self._cache[key]

    @cached_property
    def c0_matrix(self) -> np.ndarray:
        """Columns span {v : rho1(x) v = rho2(x) v for all x}."""
        diff = self.V.rho1 - self.V.rho2
        stacked = np.concatenate([diff[:, x, :] for x in range(self.L.dim)], axis=0) \
            if self.L.dim else linalg.zeros(0, self.V.dim)
        return linalg.columns(linalg.kernel_basis(stacked), self.V.dim)

    def delta(self, n: int) -> np.ndarray:
        key = ("dc", n)
        if key in self._cache:
            return self._cache[key]
        if n == 0:
            mat = linalg.matmul(self.ce_matrix(0, 1), self.c0_matrix)
        else:
            s, t = self.size(n), self.size(n + 1)
            mat = linalg.zeros((n + 1) * t, n * s)
            for j in range(n):
                mat[j * t:(j + 1) * t, j * s:(j + 1) * s] = self.ce_matrix(n, 1)
                mat[(j + 1) * t:(j + 2) * t, j * s:(j + 1) * s] = self.ce_matrix(n, 2)
        self._cache[key] = mat
        return mat

    def report(self, n_max: int) -> list[dict]:
        out = []
        for n in range(n_max + 1):
            z = linalg.kernel_basis(self.delta(n))
            b = linalg.image_basis(self.delta(n - 1)) if n else []
            q = linalg.subquotient(linalg.SubquotientPresentation(self.dim(n), tuple(z), tuple(b)))
            out.append({"degree": n, "C": self.dim(n), "Z": len(z), "B": len(b), "H": q.dim})
        return out


def ce_delta_c(L: CompatibleLieAlgebra, V: CompatibleLieRep, n: int) -> np.ndarray:
    return LieCochainComplex(L, V).delta(n)


def lie_cohomology(L: CompatibleLieAlgebra, V: CompatibleLieRep, n_max: int = 3) -> list[dict]:
    return LieCochainComplex(L, V).report(n_max)


def skew_matrix(lx: LieCochainComplex, n: int) -> np.ndarray:
    """Skew-symmetrization C^n(A, M) -> alternating coordinates, one component."""
    shape = (lx.V.dim,) + (lx.L.dim,) * n
    return _matrix_of(lambda f: lx.restrict(n, skew(f)), shape, lx.size(n))


def phi_skew_chain_map(A: CompatibleAlgebra, M: CompatibleBimodule | None = None,
                       n_max: int = 2) -> ChainMapReport:
    """Residuals of delta_cL o Phi_n - Phi_{n+1} o delta_c for n <= n_max."""
    M = adjoint_bimodule(A) if M is None else M
    cx = CompatibleCochainComplex(A, M)
    lx = LieCochainComplex(skew_symmetrize_algebra(A), skew_symmetrize_bimodule(A, M))

    def phi(n):
        if n == 0:
            cols = [linalg.solve(lx.c0_matrix, cx.c0c_matrix[:, j])
                    for j in range(cx.c0c_matrix.shape[1])]
            if any(c is None for c in cols):
                raise InvalidStructure("C^0_c is not inside the Lie degree-0 space")
            return linalg.columns(cols, lx.c0_matrix.shape[1])
        block = skew_matrix(lx, n)
        out = linalg.zeros(n * block.shape[0], n * block.shape[1])
        for j in range(n):
            out[j * block.shape[0]:(j + 1) * block.shape[0],
                j * block.shape[1]:(j + 1) * block.shape[1]] = block
        return out

    residuals = {}
    for n in range(n_max + 1):
        lhs = linalg.matmul(lx.delta(n), phi(n))
        rhs = linalg.matmul(phi(n + 1), cx.delta_c(n))
        residuals[n] = lhs - rhs
    return ChainMapReport(residuals)


def alternation_defect(f: np.ndarray) -> bool:
    """True when swapping some adjacent pair of arguments fails to negate f."""
    n = f.ndim - 1
    for i in range(1, n):
        axes = list(range(n + 1))
        axes[i], axes[i + 1] = axes[i + 1], axes[i]
        if not np.array_equal(np.transpose(f, axes), -f):
            return True
    return False


__all__ = [
    "Check",
    "CompatibleLieAlgebra",
    "CompatibleLieRep",
    "validate_compatible_lie",
    "validate_compatible_rep",
    "skew_symmetrize_algebra",
    "skew_symmetrize_bimodule",
    "skew",
    "ce_apply",
    "ce_delta_c",
    "lie_cohomology",
    "phi_skew_chain_map",
    "LieCochainComplex",
    "alternation_defect",
]
