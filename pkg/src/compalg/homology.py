"""Compatible presimplicial vector spaces, the Hochschild instance, the
associated chain complex and its homology, and the Kahler-differential check.

Chains in C_n = M (x) A^n are arrays of shape ``(dim M,) + (dim A,) * n``
flattened in C order (M index, then A multi-index).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from compalg import linalg
from compalg.algebra import CompatibleAlgebra, CompatibleBimodule, adjoint_bimodule, require_valid
from compalg.cohomology import _matrix_of
from compalg.errors import DimensionMismatch, InvalidStructure


@dataclass(eq=False)
class PresimplicialPair:
    """Face maps ``faces[n][i]`` and ``faces2[n][i]``: C_n -> C_{n-1}, i = 0..n.

    ``dims[n]`` is dim C_n; ``faces[0]`` is unused and left empty.
    """

    dims: list[int]
    faces: list[list[np.ndarray]]
    faces2: list[list[np.ndarray]]

    @property
    def top(self) -> int:
        return len(self.dims) - 1

    def boundary(self, n: int, second: bool = False) -> np.ndarray:
        fam = (self.faces2 if second else self.faces)[n]
        out = linalg.zeros(self.dims[n - 1], self.dims[n])
        for i, f in enumerate(fam):
            out = out - f if i % 2 else out + f
        return out


@dataclass
class PresimplicialReport:
    failures: list[dict] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures

    def as_dict(self) -> dict:
        return {"status": "PASS" if self.passed else "FAIL", "failures": self.failures}


def validate_presimplicial_pair(p: PresimplicialPair) -> PresimplicialReport:
    """Simplicial identities for both families, the mixed identity, and
    anticommutation of the two boundaries.  Reports the first failure of each
    identity family."""
    for n in range(1, p.top + 1):
        for fam in (p.faces, p.faces2):
            if len(fam[n]) != n + 1:
                raise DimensionMismatch(f"level {n} needs {n + 1} face maps")
            for f in fam[n]:
                if f.shape != (p.dims[n - 1], p.dims[n]):
                    raise DimensionMismatch(f"face map at level {n} has shape {f.shape}")
    report = PresimplicialReport()
    families = {
        "simplicial": lambda n, i, j: (linalg.matmul(p.faces[n - 1][i], p.faces[n][j]),
                                       linalg.matmul(p.faces[n - 1][j - 1], p.faces[n][i])),
        "simplicial'": lambda n, i, j: (linalg.matmul(p.faces2[n - 1][i], p.faces2[n][j]),
                                        linalg.matmul(p.faces2[n - 1][j - 1], p.faces2[n][i])),
        "mixed": lambda n, i, j: (
            linalg.matmul(p.faces[n - 1][i], p.faces2[n][j])
            + linalg.matmul(p.faces2[n - 1][i], p.faces[n][j]),
            linalg.matmul(p.faces[n - 1][j - 1], p.faces2[n][i])
            + linalg.matmul(p.faces2[n - 1][j - 1], p.faces[n][i])),
    }
    for name, pair in families.items():
        failure = None
        for n in range(2, p.top + 1):
            for j in range(n + 1):
                for i in range(j):
                    lhs, rhs = pair(n, i, j)
                    if not np.array_equal(lhs, rhs):
                        failure = {"identity": name, "level": n, "i": i, "j": j}
                        break
                if failure:
                    break
            if failure:
                break
        if failure:
            report.failures.append(failure)
    for n in range(2, p.top + 1):
        d, d2 = p.boundary, lambda k: p.boundary(k, True)
        anti = (linalg.matmul(d(n - 1), d2(n)) + linalg.matmul(d2(n - 1), d(n)))
        if not linalg.is_zero(anti):
            report.failures.append({"identity": "anticommute", "level": n})
            break
    return report


def _face_fns(mu, l, r, n: int):
    """The n + 1 Hochschild face maps on M (x) A^n as tensor functions."""

    def first(x):  # m a_1 (x) a_2 ...
        return np.tensordot(r, x, axes=([1, 2], [0, 1]))

    def middle(i):
        def face(x):  # ... a_i a_{i+1} ...
            t = np.tensordot(x, mu, axes=([i, i + 1], [1, 2]))
            return np.moveaxis(t, -1, i)
        return face

    def last(x):  # a_n m (x) a_1 ... a_{n-1}
        return np.tensordot(l, x, axes=([1, 2], [n, 0]))

    return [first] + [middle(i) for i in range(1, n)] + [last]


def hochschild_faces(A: CompatibleAlgebra, M: CompatibleBimodule | None = None,
                     n_max: int = 3) -> PresimplicialPair:
    M = adjoint_bimodule(A) if M is None else M
    require_valid(A, M)
    dims = [M.dim * A.dim ** n for n in range(n_max + 1)]
    faces: list[list[np.ndarray]] = [[]]
    faces2: list[list[np.ndarray]] = [[]]
    for n in range(1, n_max + 1):
        shape = (M.dim,) + (A.dim,) * n
        for fam, (mu, l, r) in ((faces, (A.mu1, M.l1, M.r1)), (faces2, (A.mu2, M.l2, M.r2))):
            fam.append([_matrix_of(fn, shape, dims[n - 1]) for fn in _face_fns(mu, l, r, n)])
    return PresimplicialPair(dims, faces, faces2)


def _quotient_projection(dim: int, sub: list[np.ndarray]) -> np.ndarray:
    """Matrix C -> C / span(sub) in coordinates of a standard-vector complement."""
    basis = list(linalg.image_basis(linalg.columns(sub, dim))) if sub else []
    k = len(basis)
    full = linalg.hstack([linalg.columns(basis, dim), linalg.identity(dim)], dim)
    _, pivots = linalg.rref(full)
    chosen = linalg.columns([full[:, c] for c in pivots], dim)
    inv = _inverse(chosen)
    return inv[k:, :]


def _inverse(m: np.ndarray) -> np.ndarray:
    n = m.shape[0]
    cols = [linalg.solve(m, linalg.identity(n)[:, j]) for j in range(n)]
    return linalg.columns(cols, n)


@dataclass
class CompatChainComplex:
    """Boundary matrices ``boundaries[n]``: (C^c)_n -> (C^c)_{n-1}, n >= 1."""

    dims: list[int]
    boundaries: dict[int, np.ndarray]
    quotient_projection: np.ndarray

    def squares_to_zero(self) -> bool:
        return all(linalg.is_zero(linalg.matmul(self.boundaries[n - 1], self.boundaries[n]))
                   for n in self.boundaries if n - 1 in self.boundaries)


def compat_chain_complex(p: PresimplicialPair) -> CompatChainComplex:
    """(C^c)_0 is C_0 modulo the image of (d - d') on C_1, so x -> [d x] is
    well defined in degree 1; in degree n >= 2 the k-th output component is
    d x_k + d' x_{k+1}."""
    rep = validate_presimplicial_pair(p)
    if not rep.passed:
        raise InvalidStructure(f"not a compatible presimplicial space: {rep.failures[0]}")
    if p.top < 1:
        raise DimensionMismatch("need at least level 1")
    d1 = p.boundary(1)
    diff = d1 - p.boundary(1, True)
    proj = _quotient_projection(p.dims[0], linalg.image_basis(diff))
    dims = [proj.shape[0]] + [n * p.dims[n] for n in range(1, p.top + 1)]
    boundaries = {1: linalg.matmul(proj, d1)}
    for n in range(2, p.top + 1):
        s, t = p.dims[n], p.dims[n - 1]
        d, d2 = p.boundary(n), p.boundary(n, True)
        mat = linalg.zeros((n - 1) * t, n * s)
        for k in range(n - 1):
            mat[k * t:(k + 1) * t, k * s:(k + 1) * s] = d
            mat[k * t:(k + 1) * t, (k + 1) * s:(k + 2) * s] = d2
        boundaries[n] = mat
    cc = CompatChainComplex(dims, boundaries, proj)
    if not cc.squares_to_zero():  # pragma: no cover - excluded by validation
        raise InvalidStructure("boundary does not square to zero")
    return cc


@dataclass
class HomologyDegree:
    degree: int
    dim_chains: int
    dim_cycles: int
    dim_boundaries: int
    dim_homology: int
    representatives: list = field(default_factory=list)

    def as_dict(self) -> dict:
        return {"degree": self.degree, "C": self.dim_chains, "Z": self.dim_cycles,
                "B": self.dim_boundaries, "H": self.dim_homology}


@dataclass
class ChainComplexReport:
    degrees: list[HomologyDegree]

    def dims(self) -> list[int]:
        return [d.dim_homology for d in self.degrees]

    def __getitem__(self, n: int) -> HomologyDegree:
        return self.degrees[n]


def homology_of(cc: CompatChainComplex, n_max: int) -> ChainComplexReport:
    degrees = []
    for n in range(n_max + 1):
        dim = cc.dims[n]
        if n == 0:
            z = list(linalg.identity(dim).T) if dim else []
        else:
            z = linalg.kernel_basis(cc.boundaries[n])
        b = linalg.image_basis(cc.boundaries[n + 1])
        q = linalg.subquotient(linalg.SubquotientPresentation(dim, tuple(z), tuple(b)))
        degrees.append(HomologyDegree(n, dim, len(q.numerator_basis), len(q.denominator_basis),
                                      q.dim, q.representatives))
    return ChainComplexReport(degrees)


def homology(A: CompatibleAlgebra, M: CompatibleBimodule | None = None,
             n_max: int = 3) -> ChainComplexReport:
    cc = compat_chain_complex(hochschild_faces(A, M, n_max + 1))
    return homology_of(cc, n_max)


# -- Kahler differentials ---------------------------------------------------

@dataclass
class KahlerReport:
    h1_dim: int
    presentation_dim: int
    relation_dim: int
    boundary_dim: int
    spans_coincide: bool
    action_well_defined: bool
    relation_span: list = field(default_factory=list)
    boundary_span: list = field(default_factory=list)

    @property
    def dims_match(self) -> bool:
        return self.h1_dim == self.presentation_dim


def _is_commutative(mu: np.ndarray) -> bool:
    return np.array_equal(mu, np.transpose(mu, (0, 2, 1)))


def kahler_relations(A: CompatibleAlgebra) -> list[np.ndarray]:
    """a.b (x) c - a (x) b.c + c.a (x) b for both products, over basis triples."""
    n = A.dim
    rels = []
    for a in range(n):
        for b in range(n):
            for c in range(n):
                v = linalg.zeros(n, n)
                for mu in (A.mu1, A.mu2):
                    v[:, c] += mu[:, a, b]
                    v[a, :] -= mu[:, b, c]
                    v[:, b] += mu[:, c, a]
                rels.append(v.reshape(-1))
    return rels


def kahler_check(A: CompatibleAlgebra) -> KahlerReport:
    """Compare H_1 with the quotient of A (x) A by the Kahler relations, and
    check that left multiplication by mu1 + mu2 preserves the relations."""
    if not (_is_commutative(A.mu1) and _is_commutative(A.mu2)):
        raise InvalidStructure("Kahler check needs both products commutative")
    n = A.dim
    dim = n * n
    rel_basis = linalg.image_basis(linalg.columns(kahler_relations(A), dim))
    presentation_dim = dim - len(rel_basis)

    h = homology(A, n_max=1)
    cc_b = linalg.image_basis(compat_chain_complex(hochschild_faces(A, None, 2)).boundaries[2])
    both = linalg.columns(list(rel_basis) + list(cc_b), dim) if dim else linalg.zeros(0, 0)
    coincide = linalg.rank(both) == len(rel_basis) == len(cc_b)

    well_defined = True
    mu = A.mu1 + A.mu2
    rel_mat = linalg.columns(rel_basis, dim)
    for a in range(n):
        # a (x) [b (x) c] -> [a.b (x) c]: left multiplication on the first factor
        act = np.kron(mu[:, a, :], linalg.identity(n))
        for v in rel_basis:
            w = linalg.matvec(act, v)
            if not linalg.is_zero(w) and (not rel_basis or linalg.solve(rel_mat, w) is None):
                well_defined = False
    return KahlerReport(h[1].dim_homology, presentation_dim, len(rel_basis), len(cc_b),
                        coincide, well_defined, rel_basis, cc_b)
