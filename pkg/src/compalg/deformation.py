"""Finite-order deformations: validation, gauge action, obstructions and
extension to the next order.

A deformation of order N is stored as the coefficient lists
``mu1_terms[0..N]`` and ``mu2_terms[0..N]`` of t^0..t^N; the constant terms
are the base products.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from compalg import linalg
from compalg.algebra import CompatibleAlgebra
from compalg.cohomology import CompatibleCochainComplex
from compalg.errors import DimensionMismatch, InvalidStructure
from compalg.gerstenhaber import bracket, compat_bracket, tuple_is_zero

HALF = Fraction(1, 2)


@dataclass(eq=False)
class TruncatedDeformation:
    base: CompatibleAlgebra
    mu1_terms: list[np.ndarray]
    mu2_terms: list[np.ndarray]

    def __post_init__(self):
        if len(self.mu1_terms) != len(self.mu2_terms) or not self.mu1_terms:
            raise DimensionMismatch("term lists must be nonempty and of equal length")
        shape = (self.base.dim,) * 3
        self.mu1_terms = [linalg.as_array(t) for t in self.mu1_terms]
        self.mu2_terms = [linalg.as_array(t) for t in self.mu2_terms]
        for t in self.mu1_terms + self.mu2_terms:
            if t.shape != shape:
                raise DimensionMismatch(f"term of shape {t.shape}, expected {shape}")

    @classmethod
    def from_terms(cls, base: CompatibleAlgebra, higher: Sequence[Sequence[np.ndarray]]):
        """Deformation with the given (mu1_k, mu2_k) for k = 1, 2, ..."""
        return cls(base, [base.mu1.copy()] + [p[0] for p in higher],
                   [base.mu2.copy()] + [p[1] for p in higher])

    @classmethod
    def undeformed(cls, base: CompatibleAlgebra, order: int = 1):
        z = linalg.zeros(*(base.dim,) * 3)
        return cls.from_terms(base, [(z.copy(), z.copy()) for _ in range(order)])

    @property
    def order(self) -> int:
        return len(self.mu1_terms) - 1

    def pair(self, k: int) -> tuple[np.ndarray, np.ndarray]:
        return self.mu1_terms[k], self.mu2_terms[k]

    def same_as(self, other: "TruncatedDeformation") -> bool:
        return (self.order == other.order
                and all(np.array_equal(a, b) for a, b in zip(self.mu1_terms, other.mu1_terms))
                and all(np.array_equal(a, b) for a, b in zip(self.mu2_terms, other.mu2_terms)))


@dataclass
class DeformationCheck:
    valid: bool
    failing_order: int | None
    forms_agree: bool

    def __bool__(self) -> bool:
        return self.valid


def _direct_failure(d: TruncatedDeformation) -> int | None:
    for k in range(d.order + 1):
        for xs, ys in ((d.mu1_terms, d.mu1_terms), (d.mu2_terms, d.mu2_terms),
                       (d.mu1_terms, d.mu2_terms)):
            total = sum((bracket(xs[i], ys[k - i]) for i in range(k + 1)),
                        start=linalg.zeros(*(d.base.dim,) * 4))
            if not linalg.is_zero(total):
                return k
    return None


def _compact_failure(d: TruncatedDeformation) -> int | None:
    theta = d.pair(0)
    if not tuple_is_zero(compat_bracket(theta, theta)):
        return 0
    for k in range(1, d.order + 1):
        lhs = compat_bracket(theta, d.pair(k))
        rhs = _half_square_sum(d, k)
        if not all(np.array_equal(a, -b) for a, b in zip(lhs, rhs)):
            return k
    return None


def _half_square_sum(d: TruncatedDeformation, k: int) -> tuple[np.ndarray, ...]:
    """1/2 sum over i + j = k, i, j >= 1 of [[theta_i, theta_j]]."""
    out = tuple(linalg.zeros(*(d.base.dim,) * 4) for _ in range(3))
    for i in range(1, k):
        out = tuple(a + b for a, b in zip(out, compat_bracket(d.pair(i), d.pair(k - i))))
    return tuple(HALF * a for a in out)


def validate_deformation(d: TruncatedDeformation) -> DeformationCheck:
    """Deformation equations through order N, in both the componentwise and
    the tuple-bracket form; the two must agree."""
    direct, compact = _direct_failure(d), _compact_failure(d)
    return DeformationCheck(direct is None, direct, direct == compact)


def _require_valid(d: TruncatedDeformation) -> None:
    chk = validate_deformation(d)
    if not chk.valid:
        raise InvalidStructure(f"deformation equations fail at order {chk.failing_order}")


@dataclass
class Infinitesimal:
    order: int
    pair: tuple[np.ndarray, np.ndarray]
    is_cocycle: bool


def infinitesimal(d: TruncatedDeformation) -> Infinitesimal | None:
    """First nonvanishing pair after the base; None for an undeformed series."""
    _require_valid(d)
    for p in range(1, d.order + 1):
        pair = d.pair(p)
        if not tuple_is_zero(pair):
            cx = CompatibleCochainComplex(d.base)
            return Infinitesimal(p, pair, cx.is_cocycle(pair))
    return None


# -- gauge action -----------------------------------------------------------

def _series_mul(a: Sequence[np.ndarray], b: Sequence[np.ndarray], n_terms: int) -> list[np.ndarray]:
    dim = a[0].shape[0]
    out = []
    for k in range(n_terms):
        acc = linalg.zeros(dim, dim)
        for i in range(k + 1):
            if i < len(a) and k - i < len(b):
                acc = acc + linalg.matmul(a[i], b[k - i])
        out.append(acc)
    return out


def series_inverse(phi: Sequence[np.ndarray], n_terms: int) -> list[np.ndarray]:
    """Inverse of a series with identity constant term, by Newton iteration."""
    dim = phi[0].shape[0]
    if not np.array_equal(phi[0], linalg.identity(dim)):
        raise InvalidStructure("gauge series must start with the identity")
    inv = [linalg.identity(dim)]
    prec = 1
    while prec < n_terms:
        prec = min(2 * prec, n_terms)
        prod = _series_mul(phi, inv, prec)
        two_minus = [2 * linalg.identity(dim) - prod[0]] + [-x for x in prod[1:]]
        inv = _series_mul(inv, two_minus, prec)
    return inv[:n_terms]


@dataclass(eq=False)
class GaugeSeries:
    terms: list[np.ndarray] = field(default_factory=list)

    def __post_init__(self):
        self.terms = [linalg.as_array(t) for t in self.terms]
        dim = self.terms[0].shape[0]
        if not np.array_equal(self.terms[0], linalg.identity(dim)):
            raise InvalidStructure("gauge series must start with the identity")

    @classmethod
    def single(cls, dim: int, order: int, power: int, op) -> "GaugeSeries":
        """id + t^power op, truncated at ``order``."""
        terms = [linalg.identity(dim)] + [linalg.zeros(dim, dim) for _ in range(order)]
        if power <= order:
            terms[power] = linalg.as_array(op)
        return cls(terms)

    @property
    def order(self) -> int:
        return len(self.terms) - 1

    def inverse(self) -> "GaugeSeries":
        return GaugeSeries(series_inverse(self.terms, len(self.terms)))

    def compose(self, other: "GaugeSeries") -> "GaugeSeries":
        """The series of self o other, truncated at the common order."""
        if self.order != other.order:
            raise DimensionMismatch("gauge orders differ")
        return GaugeSeries(_series_mul(self.terms, other.terms, len(self.terms)))


def _transform(terms: Sequence[np.ndarray], phi: Sequence[np.ndarray],
               inv: Sequence[np.ndarray]) -> list[np.ndarray]:
    n_terms = len(terms)
    dim = phi[0].shape[0]
    pulled = []
    for k in range(n_terms):
        acc = linalg.zeros(dim, dim, dim)
        for p in range(k + 1):
            for q in range(k - p + 1):
                r = k - p - q
                t = np.tensordot(terms[p], phi[q], axes=([1], [0]))  # (o, b, a)
                t = np.tensordot(t, phi[r], axes=([1], [0]))  # (o, a, b)
                acc = acc + t
        pulled.append(acc)
    out = []
    for k in range(n_terms):
        acc = linalg.zeros(dim, dim, dim)
        for s in range(k + 1):
            acc = acc + np.tensordot(inv[s], pulled[k - s], axes=([1], [0]))
        out.append(acc)
    return out


def apply_gauge(d: TruncatedDeformation, g: GaugeSeries) -> TruncatedDeformation:
    """mu'_t = phi_t^{-1} o mu_t o (phi_t x phi_t), truncated at order N."""
    if g.order != d.order:
        raise DimensionMismatch(f"gauge of order {g.order} for a deformation of order {d.order}")
    inv = g.inverse().terms
    mu1 = _transform(d.mu1_terms, g.terms, inv)
    mu2 = _transform(d.mu2_terms, g.terms, inv)
    return TruncatedDeformation(d.base, mu1, mu2)


# -- obstructions -----------------------------------------------------------

@dataclass
class Obstruction:
    cochain: tuple[np.ndarray, ...]
    is_cocycle: bool
    class_coordinates: list

    @property
    def vanishes(self) -> bool:
        return all(c == 0 for c in self.class_coordinates)


def obstruction(d: TruncatedDeformation) -> Obstruction:
    """-1/2 sum over i + j = N + 1, i, j >= 1 of [[theta_i, theta_j]]."""
    _require_valid(d)
    ob = tuple(-x for x in _half_square_sum(d, d.order + 1))
    cx = CompatibleCochainComplex(d.base)
    cocycle = cx.is_cocycle(ob)
    coords = list(cx.subquotient(3).coordinates(cx.join(ob))) if cocycle else []
    return Obstruction(ob, cocycle, coords)


@dataclass
class ExtensionResult:
    deformation: TruncatedDeformation | None
    obstruction: Obstruction

    @property
    def extended(self) -> bool:
        return self.deformation is not None


def extend(d: TruncatedDeformation) -> ExtensionResult:
    """Solve for the order N+1 pair, or report the obstruction class.

    With self coefficients the coboundary of a 2-cochain is minus its
    bracket with (mu1, mu2), so the new pair X solves delta_c X = -Ob.  Free
    variables are set to zero, which picks the solution supported on the
    pivot coordinates.
    """
    ob = obstruction(d)
    cx = CompatibleCochainComplex(d.base)
    x = linalg.solve(cx.delta_c(2), -cx.join(ob.cochain))
    if x is None:
        return ExtensionResult(None, ob)
    m1, m2 = cx.split(2, x)
    out = TruncatedDeformation(d.base, d.mu1_terms + [m1], d.mu2_terms + [m2])
    return ExtensionResult(out, ob)


def normalize(d: TruncatedDeformation) -> TruncatedDeformation:
    """Gauge away coboundary leading terms until the leading pair is a
    non-trivial class or every term through order N vanishes."""
    _require_valid(d)
    cx = CompatibleCochainComplex(d.base)
    p = 1
    while p <= d.order:
        pair = d.pair(p)
        if tuple_is_zero(pair):
            p += 1
            continue
        g = cx.coboundary_preimage(tuple(-x for x in pair))
        if g is None:
            break
        d = apply_gauge(d, GaugeSeries.single(d.base.dim, d.order, p, g[0]))
        assert tuple_is_zero(d.pair(p))
        p += 1
    return d


@dataclass
class RigidityReport:
    h2_dim: int
    representatives: list[tuple[np.ndarray, np.ndarray]]

    @property
    def rigid(self) -> bool:
        return self.h2_dim == 0


def rigidity_certificate(A: CompatibleAlgebra) -> RigidityReport:
    """H^2_c(A, A) = 0 certifies rigidity; otherwise its representatives are
    candidate non-trivial infinitesimal deformations."""
    if A.dim == 0:
        return RigidityReport(0, [])
    cx = CompatibleCochainComplex(A)
    q = cx.subquotient(2)
    return RigidityReport(q.dim, [cx.split(2, v) for v in q.representatives])
