import json
from pathlib import Path

import numpy as np
import pytest

from compalg import fixture, linalg
from compalg.algebra import (
    adjoint_bimodule,
    dual_bimodule,
    semidirect_product,
    validate_compatible_algebra,
    zero_bimodule,
)
from compalg.cohomology import (
    CompatibleCochainComplex,
    ExtensionDatum,
    c0c_basis,
    cocycle_from_extension,
    cohomology,
    cohomology_class,
    derivations,
    equivalence_morphism,
    extension_from_cocycle,
    extensions_equivalent,
    hochschild_delta,
    induced_bimodule,
    phi_chain_map_check,
    validate_extension,
)
from compalg.errors import InvalidStructure, NotACocycle
from compalg.gerstenhaber import compat_bracket

from conftest import ALL_FIXTURES, FIXTURE_NAMES, random_cochain, random_tuple

GOLDEN = json.loads((Path(__file__).parent / "golden" / "dims.json").read_text())["dims"]


def test_hochschild_examples():
    F1 = fixture("F1")
    assert linalg.is_zero(hochschild_delta(F1.mu1, F1.mu1, F1.mu1, 0))
    F2 = fixture("F2")
    d = hochschild_delta(F2.mu1, F2.mu1, F2.mu1, 1)
    image = linalg.matvec(d, linalg.identity(2).reshape(-1)).reshape(2, 2, 2)
    assert np.array_equal(image, F2.mu1)


@pytest.mark.parametrize("name", ALL_FIXTURES)
def test_hochschild_squares_to_zero(name):
    A = fixture(name)
    for mu in (A.mu1, A.mu2):
        for n in range(3):
            d0, d1 = hochschild_delta(mu, mu, mu, n), hochschild_delta(mu, mu, mu, n + 1)
            assert linalg.is_zero(linalg.matmul(d1, d0))


def _c0c_oracle(A):
    rows = []
    for a in range(A.dim):
        for k in range(A.dim):
            rows.append([A.mu1[k, a, m] - A.mu1[k, m, a] - A.mu2[k, a, m] + A.mu2[k, m, a]
                         for m in range(A.dim)])
    import sympy
    return len(sympy.Matrix(rows).nullspace())


@pytest.mark.parametrize("name", ALL_FIXTURES)
def test_c0c_dimension(name):
    A = fixture(name)
    assert len(c0c_basis(A, adjoint_bimodule(A))) == _c0c_oracle(A)


def test_c0c_examples():
    assert len(c0c_basis(fixture("F1"), adjoint_bimodule(fixture("F1")))) == 1
    assert len(c0c_basis(fixture("F2"), adjoint_bimodule(fixture("F2")))) == 2
    F1 = fixture("F1")
    assert linalg.is_zero(CompatibleCochainComplex(F1).delta_c(0))


@pytest.mark.parametrize("name", ALL_FIXTURES)
def test_delta_c_squares_to_zero_and_anticommutation(name):
    A = fixture(name)
    cx = CompatibleCochainComplex(A)
    for n in range(3):
        assert linalg.is_zero(linalg.matmul(cx.delta_c(n + 1), cx.delta_c(n)))
    for n in range(3):
        anti = (linalg.matmul(cx.delta1(n + 1), cx.delta2(n))
                + linalg.matmul(cx.delta2(n + 1), cx.delta1(n)))
        assert linalg.is_zero(anti)


@pytest.mark.parametrize("name", ["F2", "F4", "NC"])
def test_delta_c_squares_to_zero_other_coefficients(name):
    A = fixture(name)
    M = adjoint_bimodule(A)
    for coeff in (dual_bimodule(A, M), zero_bimodule(A, 1)):
        cx = CompatibleCochainComplex(A, coeff)
        for n in range(3):
            assert linalg.is_zero(linalg.matmul(cx.delta_c(n + 1), cx.delta_c(n)))
    B = semidirect_product(A, M)
    assert validate_compatible_algebra(B).passed


@pytest.mark.parametrize("name", FIXTURE_NAMES)
def test_self_coefficients_match_bracket(name, rng):
    A = fixture(name)
    cx = CompatibleCochainComplex(A)
    theta = (A.mu1, A.mu2)
    for n in (1, 2, 3):
        for _ in range(3):
            F = random_tuple(rng, A.dim, n, n)
            lhs = cx.apply(F)
            rhs = compat_bracket(theta, F)
            sign = (-1) ** (n - 1)
            assert all(np.array_equal(a, sign * b) for a, b in zip(lhs, rhs))


def test_leibniz_rule(rng):
    A = fixture("F3")
    cx = CompatibleCochainComplex(A)
    for p, q in [(1, 1), (1, 2), (2, 1)]:
        F, G = random_tuple(rng, 2, p, p), random_tuple(rng, 2, q, q)
        lhs = tuple((-1) ** (p + q) * x for x in cx.apply(compat_bracket(F, G)))
        dF = tuple((-1) ** (p - 1) * x for x in cx.apply(F))
        dG = tuple((-1) ** (q - 1) * x for x in cx.apply(G))
        rhs1 = compat_bracket(dF, G)
        rhs2 = compat_bracket(F, dG)
        rhs = tuple(a + (-1) ** (p - 1) * b for a, b in zip(rhs1, rhs2))
        assert all(np.array_equal(a, b) for a, b in zip(lhs, rhs))


def test_bracket_of_cocycles_is_cocycle():
    A = fixture("F2")
    cx = CompatibleCochainComplex(A)
    reps1 = [cx.split(1, v) for v in cx.subquotient(1).representatives]
    reps2 = [cx.split(2, v) for v in cx.subquotient(2).representatives]
    for f in reps1:
        for g in reps2:
            assert cx.is_cocycle(compat_bracket(f, g))


@pytest.mark.parametrize("name", ALL_FIXTURES)
def test_dims_match_golden(name):
    assert cohomology(fixture(name), n_max=3).dims() == GOLDEN[name]["cohomology"]


def test_low_degree_examples():
    rep = cohomology(fixture("F1"), n_max=1)
    assert rep[0].dim_cohomology == 1 and rep[1].dim_cohomology == 0
    for deg in cohomology(fixture("F4"), n_max=3).degrees:
        assert deg.dim_cohomology == deg.dim_cocycles - deg.dim_coboundaries


def test_derivations():
    d = derivations(fixture("F1"))
    assert d.derivations == [] and d.inner == [] and d.h1_dim == 0
    assert derivations(fixture("F2")).inner == []
    F4 = fixture("F4")
    assert derivations(F4).h1_dim == cohomology(F4, n_max=1)[1].dim_cohomology
    nc = derivations(fixture("NC"))
    assert nc.h1_dim == 2
    for D in nc.derivations:
        cx = CompatibleCochainComplex(fixture("NC"))
        assert cx.is_cocycle((D,))


@pytest.mark.parametrize("name", ALL_FIXTURES)
def test_phi_chain_map(name):
    assert phi_chain_map_check(fixture(name), n_max=3 if name in ("F1", "F3") else 2).passed


# -- extensions -------------------------------------------------------------

def _h2_reps(A, M=None):
    cx = CompatibleCochainComplex(A, M)
    return cx, [cx.split(2, v) for v in cx.subquotient(2).representatives]


def test_zero_cocycle_gives_semidirect_product():
    A = fixture("F4")
    M = adjoint_bimodule(A)
    z = linalg.zeros(2, 2, 2)
    E = extension_from_cocycle(A, M, (z, z.copy()))
    assert E.total == semidirect_product(A, M)
    assert all(linalg.is_zero(f) for f in cocycle_from_extension(E))


def test_f1_scaling_cocycle_extension():
    A = fixture("F1")
    M = adjoint_bimodule(A)
    E = extension_from_cocycle(A, M, (A.mu1, A.mu2))
    assert validate_extension(E) == []
    assert induced_bimodule(E) == M


def test_non_cocycle_rejected():
    A = fixture("F2")
    f = linalg.zeros(2, 2, 2)
    f[0, 1, 0] = 1
    with pytest.raises(NotACocycle):
        extension_from_cocycle(A, adjoint_bimodule(A), (f, linalg.zeros(2, 2, 2)))


@pytest.mark.parametrize("name", ["F2", "F3", "F4"])
def test_extension_round_trip_and_classification(name, rng):
    A = fixture(name)
    M = adjoint_bimodule(A)
    cx, reps = _h2_reps(A)
    exts = []
    for pair in reps:
        E = extension_from_cocycle(A, M, pair)
        assert validate_extension(E) == []
        back = cocycle_from_extension(E)
        assert all(np.array_equal(a, b) for a, b in zip(back, pair))
        # cohomologous cocycle: add a random coboundary
        g = random_cochain(rng, A.dim, A.dim, 1)
        shifted = tuple(a + b for a, b in zip(pair, cx.apply((g,))))
        E2 = extension_from_cocycle(A, M, shifted)
        phi = equivalence_morphism(E, E2)
        assert phi is not None
        assert extensions_equivalent(E, E)
        exts.append(E)
    for i in range(len(exts)):
        for j in range(i + 1, len(exts)):
            assert not extensions_equivalent(exts[i], exts[j])


def test_coboundary_extension_is_trivial(rng):
    A = fixture("F3")
    M = adjoint_bimodule(A)
    cx = CompatibleCochainComplex(A)
    g = random_cochain(rng, 2, 2, 1)
    E = extension_from_cocycle(A, M, cx.apply((g,)))
    z = linalg.zeros(2, 2, 2)
    assert extensions_equivalent(E, extension_from_cocycle(A, M, (z, z.copy())))


def test_two_sections_give_cohomologous_cocycles(rng):
    A = fixture("F4")
    M = adjoint_bimodule(A)
    _, reps = _h2_reps(A)
    E = extension_from_cocycle(A, M, reps[0])
    gap = random_cochain(rng, 2, 2, 1)
    s2 = E.s + linalg.matmul(E.i, gap)
    f1, f2 = cocycle_from_extension(E), cocycle_from_extension(E, s2)
    cx = CompatibleCochainComplex(A)
    assert cx.coboundary_preimage(tuple(a - b for a, b in zip(f1, f2))) is not None
    assert all(c == 0 for c in cohomology_class(A, M, tuple(a - b for a, b in zip(f1, f2))))


def test_invalid_extension_reported():
    A = fixture("F1")
    M = adjoint_bimodule(A)
    E = extension_from_cocycle(A, M, (A.mu1, A.mu2))
    bad = ExtensionDatum(A, E.total, E.i, linalg.zeros(1, 2), E.s)
    assert validate_extension(bad)
    with pytest.raises(InvalidStructure):
        cocycle_from_extension(bad)
