"""Exact rational linear algebra.

Matrices are numpy object arrays holding :class:`fractions.Fraction` entries.
Row reduction uses leftmost-nonzero pivoting so every result (kernel basis,
image basis, particular solution) is reproducible.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from compalg.errors import ContainmentError, DimensionMismatch

ZERO = Fraction(0)
ONE = Fraction(1)


def frac(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, str):
        return Fraction(x.strip())
    if isinstance(x, float):
        raise TypeError("floating point scalars are not accepted; use p/q strings")
    return Fraction(x)


def as_array(data, shape=None) -> np.ndarray:
    """Object array of Fractions from nested lists / an existing array."""
    arr = np.array(data, dtype=object)
    if shape is not None:
        arr = arr.reshape(shape)
    flat = arr.reshape(-1)
    for idx, x in enumerate(flat):
        flat[idx] = frac(x)
    return arr


def zeros(*shape) -> np.ndarray:
    arr = np.empty(shape, dtype=object)
    arr.fill(ZERO)
    return arr


def identity(n: int) -> np.ndarray:
    m = zeros(n, n)
    for i in range(n):
        m[i, i] = ONE
    return m


def is_zero(arr) -> bool:
    return all(x == 0 for x in np.asarray(arr, dtype=object).reshape(-1))


def hstack(blocks: Sequence[np.ndarray], rows: int) -> np.ndarray:
    blocks = [b for b in blocks if b.shape[1]]
    if not blocks:
        return zeros(rows, 0)
    return np.concatenate(blocks, axis=1)


def columns(vectors: Sequence, dim: int) -> np.ndarray:
    """Matrix whose columns are the given vectors."""
    m = zeros(dim, len(vectors))
    for j, v in enumerate(vectors):
        v = np.asarray(v, dtype=object).reshape(-1)
        if v.shape[0] != dim:
            raise DimensionMismatch(f"vector of length {v.shape[0]}, expected {dim}")
        m[:, j] = v
    return m


def _to_rows(m: np.ndarray) -> list[list[Fraction]]:
    return [[frac(x) for x in row] for row in m]


def rref(m: np.ndarray) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form and pivot columns."""
    m = np.asarray(m, dtype=object)
    rows = _to_rows(m)
    nrows = len(rows)
    ncols = m.shape[1] if m.ndim == 2 else 0
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        p = next((i for i in range(r, nrows) if rows[i][c] != 0), None)
        if p is None:
            continue
        rows[r], rows[p] = rows[p], rows[r]
        pv = rows[r][c]
        if pv != 1:
            rows[r] = [x / pv for x in rows[r]]
        pivot_row = rows[r]
        for i in range(nrows):
            if i != r:
                f = rows[i][c]
                if f != 0:
                    row_i = rows[i]
                    rows[i] = [a - f * b for a, b in zip(row_i, pivot_row)]
        pivots.append(c)
        r += 1
    return rows, pivots


def rank(m: np.ndarray) -> int:
    m = np.asarray(m, dtype=object)
    if m.size == 0:
        return 0
    return len(rref(m)[1])


def kernel_basis(m: np.ndarray) -> list[np.ndarray]:
    """Basis of the null space; one vector per free column, free entry 1."""
    m = np.asarray(m, dtype=object)
    ncols = m.shape[1]
    if m.shape[0] == 0:
        return [identity(ncols)[:, j].copy() for j in range(ncols)]
    rows, pivots = rref(m)
    pivot_set = set(pivots)
    basis = []
    for free in range(ncols):
        if free in pivot_set:
            continue
        v = zeros(ncols)
        v[free] = ONE
        for r, pc in enumerate(pivots):
            v[pc] = -rows[r][free]
        basis.append(v)
    return basis


def image_basis(m: np.ndarray) -> list[np.ndarray]:
    """Pivot columns of ``m``: a basis of the column space."""
    m = np.asarray(m, dtype=object)
    if m.size == 0:
        return []
    _, pivots = rref(m)
    return [m[:, c].copy() for c in pivots]


def solve(m: np.ndarray, rhs) -> np.ndarray | None:
    """A solution of ``m x = rhs`` (free variables zero), or None."""
    m = np.asarray(m, dtype=object)
    rhs = np.asarray(rhs, dtype=object).reshape(-1)
    nrows, ncols = m.shape
    if rhs.shape[0] != nrows:
        raise DimensionMismatch(f"rhs has length {rhs.shape[0]}, matrix has {nrows} rows")
    aug = np.concatenate([m, rhs.reshape(nrows, 1)], axis=1) if nrows else zeros(0, ncols + 1)
    rows, pivots = rref(aug)
    if ncols in pivots:
        return None
    x = zeros(ncols)
    for r, pc in enumerate(pivots):
        x[pc] = rows[r][ncols]
    return x


def matvec(m: np.ndarray, v) -> np.ndarray:
    v = np.asarray(v, dtype=object).reshape(-1)
    if m.shape[1] == 0:
        return zeros(m.shape[0])
    return m.dot(v)


def matmul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    if a.shape[1] != b.shape[0]:
        raise DimensionMismatch(f"cannot multiply {a.shape} by {b.shape}")
    if a.shape[1] == 0:
        return zeros(a.shape[0], b.shape[1])
    return a.dot(b)


@dataclass(frozen=True)
class SubquotientPresentation:
    ambient_dim: int
    numerator_span: tuple
    denominator_span: tuple = ()


@dataclass(frozen=True)
class Subquotient:
    dim: int
    representatives: list
    numerator_basis: list
    denominator_basis: list

    def coordinates(self, v) -> np.ndarray:
        """Coordinates of the class of ``v`` along the representatives."""
        n_den = len(self.denominator_basis)
        v = np.asarray(v, dtype=object).reshape(-1)
        mat = columns(list(self.denominator_basis) + list(self.representatives), v.shape[0])
        x = solve(mat, v)
        if x is None:
            raise ContainmentError("vector is not in the numerator span")
        return x[n_den:]


def subquotient(p: SubquotientPresentation) -> Subquotient:
    """span(numerator) / span(denominator), with containment checked."""
    n = p.ambient_dim
    num = columns(list(p.numerator_span), n)
    den = columns(list(p.denominator_span), n)
    num_basis = image_basis(num)
    den_basis = image_basis(den)
    both = hstack([columns(num_basis, n), columns(den_basis, n)], n)
    if rank(both) != len(num_basis):
        raise ContainmentError("denominator span is not contained in numerator span")
    # pivots past the denominator block pick a complement from the numerator
    stacked = hstack([columns(den_basis, n), columns(num_basis, n)], n)
    _, pivots = rref(stacked) if stacked.size else ([], [])
    k = len(den_basis)
    reps = [num_basis[c - k].copy() for c in pivots if c >= k]
    return Subquotient(len(num_basis) - len(den_basis), reps, num_basis, den_basis)


def subquotient_dim(p: SubquotientPresentation) -> tuple[int, list]:
    q = subquotient(p)
    return q.dim, q.representatives
