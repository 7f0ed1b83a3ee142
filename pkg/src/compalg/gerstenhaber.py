"""Gerstenhaber circle product and bracket, cup products, and the bracket on
tuples of cochains whose Maurer-Cartan elements are compatible pairs.

A cochain of arity ``p`` on an n-dimensional space is an object array of
shape ``(n,) * (p + 1)``: axis 0 is the output, axes 1..p the arguments.
Graded degree is arity - 1.  A tuple cochain of graded degree ``k`` is a
tuple of ``k + 1`` cochains of arity ``k + 1``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from compalg import linalg
from compalg.algebra import first_nonzero
from compalg.errors import DimensionMismatch


def arity(f: np.ndarray) -> int:
    return f.ndim - 1


def circle(f: np.ndarray, g: np.ndarray) -> np.ndarray:
    """Insertion product: sum over slots i of (-1)^((i-1)n) f(..., g(...), ...)."""
    p, q = arity(f), arity(g)
    if p < 1 or q < 1:
        raise DimensionMismatch("circle product needs cochains of arity >= 1")
    n = q - 1
    out = None
    for i in range(1, p + 1):
        t = np.tensordot(f, g, axes=([i], [0]))
        t = np.moveaxis(t, list(range(t.ndim - q, t.ndim)), list(range(i, i + q)))
        if ((i - 1) * n) % 2:
            t = -t
        out = t if out is None else out + t
    return out


def bracket(f: np.ndarray, g: np.ndarray) -> np.ndarray:
    m, n = arity(f) - 1, arity(g) - 1
    if (m * n) % 2:
        return circle(f, g) + circle(g, f)
    return circle(f, g) - circle(g, f)


bracket_g = bracket


def cup(f: np.ndarray, g: np.ndarray, product: np.ndarray) -> np.ndarray:
    """(f cup g)(a_1..a_{m+n}) = f(a_1..a_m) . g(a_{m+1}..a_{m+n})."""
    t = np.tensordot(product, f, axes=([1], [0]))
    return np.tensordot(t, g, axes=([1], [0]))


def _check_tuple(F: Sequence[np.ndarray]) -> int:
    if not F:
        raise DimensionMismatch("empty cochain tuple")
    p = arity(F[0])
    if any(arity(f) != p or f.shape != F[0].shape for f in F):
        raise DimensionMismatch("tuple components must share arity and shape")
    if len(F) != p:
        raise DimensionMismatch(f"graded degree {p - 1} needs {p} components, got {len(F)}")
    return p


def compat_bracket(F: Sequence[np.ndarray], G: Sequence[np.ndarray]) -> tuple[np.ndarray, ...]:
    """i-th component is the sum of [f_q, g_r] over q + r = i + 1."""
    _check_tuple(F)
    _check_tuple(G)
    size = len(F) + len(G) - 1
    out = [None] * size
    for q, f in enumerate(F):
        for r, g in enumerate(G):
            b = bracket(f, g)
            out[q + r] = b if out[q + r] is None else out[q + r] + b
    return tuple(out)


def phi(F: Sequence[np.ndarray]) -> np.ndarray:
    total = F[0].copy()
    for f in F[1:]:
        total = total + f
    return total


def tuple_is_zero(F: Sequence[np.ndarray]) -> bool:
    return all(linalg.is_zero(f) for f in F)


@dataclass
class MaurerCartanResult:
    is_mc: bool
    witness: dict | None = None

    def __bool__(self) -> bool:
        return self.is_mc


def is_maurer_cartan(mu1: np.ndarray, mu2: np.ndarray) -> MaurerCartanResult:
    """Whether [[(mu1, mu2), (mu1, mu2)]] vanishes; witness names the first
    nonzero component (1-based) and argument triple."""
    sq = compat_bracket((mu1, mu2), (mu1, mu2))
    for pos, comp in enumerate(sq, start=1):
        idx = first_nonzero(comp)
        if idx is not None:
            value = [str(x) for x in comp[(slice(None),) + idx]]
            return MaurerCartanResult(False, {"component": pos, "args": list(idx), "value": value})
    return MaurerCartanResult(True)


def d_mu(A, F: Sequence[np.ndarray]) -> tuple[np.ndarray, ...]:
    """Differential of the graded Lie algebra twisted by (mu1, mu2)."""
    return compat_bracket((A.mu1, A.mu2), F)
