"""Nijenhuis and Rota-Baxter operators.

Operators are square matrices acting on coordinate column vectors:
``N e_j = sum_i N[i, j] e_i``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from compalg import linalg
from compalg.algebra import CompatibleAlgebra, first_nonzero, validate_compatible_algebra
from compalg.cohomology import CompatibleCochainComplex
from compalg.errors import DimensionMismatch, InvalidStructure


def _apply_in(t: np.ndarray, op: np.ndarray, slot: int) -> np.ndarray:
    """Precompose argument ``slot`` (1-based) of a bilinear tensor with ``op``."""
    moved = np.tensordot(t, op, axes=([slot], [0]))  # op's input axis goes last
    return np.moveaxis(moved, -1, slot)


def _apply_out(op: np.ndarray, t: np.ndarray) -> np.ndarray:
    return np.tensordot(op, t, axes=([1], [0]))


def _as_operator(op, dim: int) -> np.ndarray:
    op = linalg.as_array(op)
    if op.shape != (dim, dim):
        raise DimensionMismatch(f"operator has shape {op.shape}, expected {(dim, dim)}")
    return op


@dataclass
class OperatorCheck:
    holds: bool
    witness: dict | None = None

    def __bool__(self) -> bool:
        return self.holds


def _witness(residual: np.ndarray, product: str) -> dict | None:
    idx = first_nonzero(residual)
    if idx is None:
        return None
    return {"product": product, "a": idx[0], "b": idx[1],
            "residual": [str(x) for x in residual[(slice(None),) + idx]]}


def deformed_product(mu: np.ndarray, N: np.ndarray) -> np.ndarray:
    """a ._N b = N(a) . b + a . N(b) - N(a . b)."""
    return _apply_in(mu, N, 1) + _apply_in(mu, N, 2) - _apply_out(N, mu)


def nijenhuis_residual(mu: np.ndarray, N: np.ndarray) -> np.ndarray:
    lhs = _apply_in(_apply_in(mu, N, 1), N, 2)
    return lhs - _apply_out(N, deformed_product(mu, N))


def is_nijenhuis(A: CompatibleAlgebra, N) -> OperatorCheck:
    N = _as_operator(N, A.dim)
    for which, mu in ((1, A.mu1), (2, A.mu2)):
        w = _witness(nijenhuis_residual(mu, N), f"mu{which}")
        if w is not None:
            return OperatorCheck(False, w)
    return OperatorCheck(True)


def nijenhuis_product(mu: np.ndarray, N) -> np.ndarray:
    mu = linalg.as_array(mu)
    N = _as_operator(N, mu.shape[0])
    w = _witness(nijenhuis_residual(mu, N), "mu")
    if w is not None:
        raise InvalidStructure(f"not a Nijenhuis operator: {w}")
    return deformed_product(mu, N)


def rota_baxter_product(mu: np.ndarray, R: np.ndarray) -> np.ndarray:
    """a ._R b = R(a) . b + a . R(b)."""
    return _apply_in(mu, R, 1) + _apply_in(mu, R, 2)


def _rb_residual(mu, R, S) -> np.ndarray:
    lhs = _apply_in(_apply_in(mu, R, 1), S, 2) + _apply_in(_apply_in(mu, S, 1), R, 2)
    rhs = _apply_out(R, rota_baxter_product(mu, S)) + _apply_out(S, rota_baxter_product(mu, R))
    return lhs - rhs


def is_rota_baxter(mu, R) -> OperatorCheck:
    mu = linalg.as_array(mu)
    R = _as_operator(R, mu.shape[0])
    residual = _apply_in(_apply_in(mu, R, 1), R, 2) - _apply_out(R, rota_baxter_product(mu, R))
    w = _witness(residual, "mu")
    return OperatorCheck(w is None, w)


def are_compatible_rb(mu, R, S) -> OperatorCheck:
    mu = linalg.as_array(mu)
    R, S = _as_operator(R, mu.shape[0]), _as_operator(S, mu.shape[0])
    for name, op in (("R", R), ("S", S)):
        chk = is_rota_baxter(mu, op)
        if not chk:
            return OperatorCheck(False, {**chk.witness, "operator": name})
    w = _witness(_rb_residual(mu, R, S), "mu")
    if w is not None:
        w["operator"] = "mixed"
    return OperatorCheck(w is None, w)


def rb_compatible_pair_algebras(mu, R, S) -> CompatibleAlgebra:
    mu = linalg.as_array(mu)
    chk = are_compatible_rb(mu, R, S)
    if not chk:
        raise InvalidStructure(f"not a compatible pair of Rota-Baxter operators: {chk.witness}")
    R, S = linalg.as_array(R), linalg.as_array(S)
    return CompatibleAlgebra(mu.shape[0], rota_baxter_product(mu, R), rota_baxter_product(mu, S))


@dataclass
class TrivialDeformation:
    omega: tuple[np.ndarray, np.ndarray]
    equals_coboundary: bool
    is_cocycle: bool
    conditions_hold: bool
    compatible: bool

    @property
    def verified(self) -> bool:
        return self.equals_coboundary and self.is_cocycle and self.conditions_hold and self.compatible


def nijenhuis_trivial_deformation(A: CompatibleAlgebra, N) -> TrivialDeformation:
    """The pair omega_i = (mu_i)_N generated by a Nijenhuis operator, with the
    checks that it is the coboundary of N and a trivial linear deformation."""
    N = _as_operator(N, A.dim)
    chk = is_nijenhuis(A, N)
    if not chk:
        raise InvalidStructure(f"not a Nijenhuis operator: {chk.witness}")
    omega = tuple(deformed_product(mu, N) for mu in (A.mu1, A.mu2))
    cx = CompatibleCochainComplex(A)
    coboundary = cx.apply((N.copy(),))
    equals = all(np.array_equal(o, c) for o, c in zip(omega, coboundary))
    # N omega_i(a, b) = N(a) ._i N(b)
    conditions = all(
        np.array_equal(_apply_out(N, o), _apply_in(_apply_in(mu, N, 1), N, 2))
        for o, mu in zip(omega, (A.mu1, A.mu2))
    )
    compatible = validate_compatible_algebra(CompatibleAlgebra(A.dim, *omega)).passed
    return TrivialDeformation(omega, equals, cx.is_cocycle(omega), conditions, compatible)
