"""Acceptance suite: one check per criterion, each printing a PASS/FAIL line.

    pytest tests/test_acceptance.py -v      # lines appear in the summary
    python tests/test_acceptance.py         # lines only
"""

import itertools
import json
import random
import sys
import time
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

import oracle  # noqa: E402
from compalg import fixture, linalg  # noqa: E402
from compalg.algebra import (  # noqa: E402
    CompatibleAlgebra,
    adjoint_bimodule,
    validate_compatible_algebra,
)
from compalg.cli import COMMANDS, render, run  # noqa: E402
from compalg.cohomology import (  # noqa: E402
    CompatibleCochainComplex,
    cocycle_from_extension,
    cohomology,
    extension_from_cocycle,
    extensions_equivalent,
    phi_chain_map_check,
)
from compalg.deformation import (  # noqa: E402
    TruncatedDeformation,
    extend,
    obstruction,
    validate_deformation,
)
from compalg.document import fixture_document, parse, serialize  # noqa: E402
from compalg.fixtures import mult_by_x  # noqa: E402
from compalg.gerstenhaber import (  # noqa: E402
    bracket,
    compat_bracket,
    is_maurer_cartan,
    phi,
    tuple_is_zero,
)
from compalg.homology import (  # noqa: E402
    compat_chain_complex,
    hochschild_faces,
    homology,
    kahler_check,
)
from compalg.lie import phi_skew_chain_map  # noqa: E402
from compalg.operators import is_nijenhuis, nijenhuis_trivial_deformation  # noqa: E402

from conftest import random_cochain, random_tensor, random_tuple  # noqa: E402

FIXTURES = ["F1", "F2", "F3", "F4"]
GOLDEN = json.loads((Path(__file__).parent / "golden" / "dims.json").read_text())
SEED = 20240611


class CriterionFailure(AssertionError):
    pass


def require(cond, detail):
    if not cond:
        raise CriterionFailure(detail)


# -- 1 ------------------------------------------------------------------------

def _random_pair(rng):
    choice = rng.random()
    if choice < 0.5:
        A = fixture(rng.choice(FIXTURES))
        mu1, mu2 = A.mu1.copy(), A.mu2.copy()
        if rng.random() < 0.6:
            target = mu1 if rng.random() < 0.5 else mu2
            idx = tuple(rng.randrange(s) for s in target.shape)
            target[idx] += rng.choice([-1, 1])
        return A.dim, mu1, mu2
    dim = rng.choice([1, 2])
    shape = (dim, dim, dim)
    return dim, random_tensor(rng, shape, -1, 1, 0.3), random_tensor(rng, shape, -1, 1, 0.3)


def criterion_1():
    rng = random.Random(SEED)
    start = time.perf_counter()
    outcomes = set()
    for n in range(200):
        dim, mu1, mu2 = _random_pair(rng)
        valid = validate_compatible_algebra(CompatibleAlgebra(dim, mu1, mu2)).passed
        mc = bool(is_maurer_cartan(mu1, mu2))
        require(valid == mc, f"pair {n}: validator says {valid}, bracket says {mc}")
        outcomes.add(valid)
    elapsed = time.perf_counter() - start
    require(outcomes == {True, False}, "sample did not contain both outcomes")
    require(elapsed < 10, f"took {elapsed:.1f} s")
    return f"200 pairs agree in {elapsed:.2f} s"


# -- 2 ------------------------------------------------------------------------

def criterion_2():
    for name in FIXTURES:
        A = fixture(name)
        cx = CompatibleCochainComplex(A)
        for n in range(3):
            anti = (linalg.matmul(cx.delta1(n + 1), cx.delta2(n))
                    + linalg.matmul(cx.delta2(n + 1), cx.delta1(n)))
            require(linalg.is_zero(anti), f"{name}: d1 d2 + d2 d1 != 0 in degree {n}")
            require(linalg.is_zero(linalg.matmul(cx.delta_c(n + 1), cx.delta_c(n))),
                    f"{name}: delta_c^2 != 0 in degree {n}")
        p = hochschild_faces(A, None, 4)
        for n in range(2, 5):
            anti = (linalg.matmul(p.boundary(n - 1), p.boundary(n, True))
                    + linalg.matmul(p.boundary(n - 1, True), p.boundary(n)))
            require(linalg.is_zero(anti), f"{name}: d d' + d' d != 0 at level {n}")
        require(compat_chain_complex(p).squares_to_zero(), f"{name}: boundary^2 != 0")
    return "all four identities exact on F1-F4 through degree 3"


# -- 3 ------------------------------------------------------------------------

def criterion_3():
    rng = random.Random(SEED)
    count = 0
    for name in FIXTURES:
        A = fixture(name)
        cx = CompatibleCochainComplex(A)
        theta = (A.mu1, A.mu2)
        for n in (1, 2, 3):
            for k in range(50):
                F = random_tuple(rng, A.dim, n, n, lo=-3, hi=3)
                sign = (-1) ** (n - 1)
                lhs, rhs = cx.apply(F), compat_bracket(theta, F)
                require(all(np.array_equal(a, sign * b) for a, b in zip(lhs, rhs)),
                        f"{name}, degree {n}, sample {k}")
                count += 1
    return f"{count} random tuples"


# -- 4 ------------------------------------------------------------------------

def criterion_4():
    rng = random.Random(SEED)
    deg = lambda f: f.ndim - 2  # noqa: E731
    for trial in range(8):
        dim = rng.choice([1, 2])
        fs = [random_cochain(rng, dim, dim, rng.choice([1, 2, 3]), density=0.5) for _ in range(3)]
        for f, g in itertools.permutations(fs, 2):
            s = (-1) ** (deg(f) * deg(g))
            require(linalg.is_zero(bracket(f, g) + s * bracket(g, f)), f"[.,.]_G antisymmetry, trial {trial}")
        f, g, h = fs
        a, b, c = deg(f), deg(g), deg(h)
        jac = ((-1) ** (a * c) * bracket(f, bracket(g, h))
               + (-1) ** (b * a) * bracket(g, bracket(h, f))
               + (-1) ** (c * b) * bracket(h, bracket(f, g)))
        require(linalg.is_zero(jac), f"[.,.]_G Jacobi, trial {trial}")

    tdeg = lambda F: len(F) - 1  # noqa: E731
    for trial in range(6):
        dim = rng.choice([1, 2])
        tuples = [random_tuple(rng, dim, k, k, density=0.5) for k in rng.sample([1, 2, 2, 3], 3)]
        for F, G in itertools.permutations(tuples, 2):
            s = (-1) ** (tdeg(F) * tdeg(G))
            require(tuple_is_zero(tuple(x + s * y for x, y in zip(compat_bracket(F, G), compat_bracket(G, F)))),
                    f"compatible bracket antisymmetry, trial {trial}")
            require(np.array_equal(phi(compat_bracket(F, G)), bracket(phi(F), phi(G))),
                    f"phi morphism law, trial {trial}")
        F, G, H = tuples
        a, b, c = (tdeg(x) for x in tuples)
        terms = [
            tuple((-1) ** (a * c) * x for x in compat_bracket(F, compat_bracket(G, H))),
            tuple((-1) ** (b * a) * x for x in compat_bracket(G, compat_bracket(H, F))),
            tuple((-1) ** (c * b) * x for x in compat_bracket(H, compat_bracket(F, G))),
        ]
        require(tuple_is_zero(tuple(sum(xs) for xs in zip(*terms))), f"compatible bracket Jacobi, trial {trial}")
    return "antisymmetry, Jacobi and phi morphism law exact"


# -- 5 ------------------------------------------------------------------------

def criterion_5():
    fresh = oracle.table()
    n_max = GOLDEN["max_degree"]
    for name in FIXTURES:
        frozen = GOLDEN["dims"][name]
        require(fresh[name] == frozen, f"{name}: oracle now gives {fresh[name]}, frozen {frozen}")
        got = cohomology(fixture(name), n_max=n_max).dims()
        require(got == frozen["cohomology"], f"{name}: H^n_c {got} != {frozen['cohomology']}")
        got = homology(fixture(name), n_max=n_max).dims()
        require(got == frozen["homology"], f"{name}: H_n^c {got} != {frozen['homology']}")
    return "; ".join(f"{n} H^c={GOLDEN['dims'][n]['cohomology']} H_c={GOLDEN['dims'][n]['homology']}"
                     for n in FIXTURES)


# -- 6 ------------------------------------------------------------------------

def criterion_6():
    rng = random.Random(SEED)
    checked = 0
    for name in ("F2", "F3", "F4"):
        A = fixture(name)
        M = adjoint_bimodule(A)
        cx = CompatibleCochainComplex(A)
        reps = [cx.split(2, v) for v in cx.subquotient(2).representatives]
        zero = tuple(linalg.zeros(*A.mu1.shape) for _ in range(2))
        classes = [zero] + reps + [tuple(2 * f for f in rep) for rep in reps]
        exts = []
        for pair in classes:
            E = extension_from_cocycle(A, M, pair)
            back = cocycle_from_extension(E)
            require(all(np.array_equal(a, b) for a, b in zip(back, pair)), f"{name}: round trip changed the cocycle")
            g = random_cochain(rng, A.dim, A.dim, 1)
            shifted = tuple(a + b for a, b in zip(pair, cx.apply((g,))))
            require(extensions_equivalent(E, extension_from_cocycle(A, M, shifted)),
                    f"{name}: cohomologous cocycles gave inequivalent extensions")
            exts.append(E)
            checked += 1
        for i, j in itertools.combinations(range(len(exts)), 2):
            require(not extensions_equivalent(exts[i], exts[j]),
                    f"{name}: distinct classes {i}, {j} reported equivalent")
    return f"{checked} classes round-trip and classify correctly"


# -- 7 ------------------------------------------------------------------------

def criterion_7():
    A = fixture("F2")
    N = mult_by_x()
    require(bool(is_nijenhuis(A, N)), "N is not Nijenhuis on F2")
    td = nijenhuis_trivial_deformation(A, N)
    cx = CompatibleCochainComplex(A)
    require(all(np.array_equal(o, c) for o, c in zip(td.omega, cx.apply((N,)))), "omega != delta_c(N)")
    n = A.dim
    e = [[1 if i == j else 0 for i in range(n)] for j in range(n)]
    mul = lambda mu, u, v: [sum(mu[k, i, j] * u[i] * v[j] for i in range(n) for j in range(n))  # noqa: E731
                            for k in range(n)]
    op = lambda v: [sum(N[i, j] * v[j] for j in range(n)) for i in range(n)]  # noqa: E731
    for omega, mu in zip(td.omega, (A.mu1, A.mu2)):
        for a, b in itertools.product(range(n), repeat=2):
            w = list(omega[:, a, b])
            lin1 = [x + y - z for x, y, z in zip(mul(mu, e[a], op(e[b])), mul(mu, op(e[a]), e[b]),
                                                  op(mul(mu, e[a], e[b])))]
            require(w == lin1, f"first condition fails at ({a}, {b})")
            require(op(w) == mul(mu, op(e[a]), op(e[b])), f"second condition fails at ({a}, {b})")
    d = TruncatedDeformation.from_terms(A, [td.omega])
    require(validate_deformation(d).valid, "omega is not an order-1 deformation")
    return "N passes, omega = delta_c(N), conditions hold, order-1 deformation valid"


# -- 8 ------------------------------------------------------------------------

def _random_order_one(A, rng):
    cx = CompatibleCochainComplex(A)
    v = linalg.zeros(cx.dim(2))
    for r in cx.subquotient(2).representatives:
        v = v + rng.randint(-2, 2) * r
    v = v + linalg.matvec(cx.delta_c(1), random_cochain(rng, A.dim, A.dim, 1).reshape(-1))
    return TruncatedDeformation.from_terms(A, [cx.split(2, v)])


def criterion_8():
    rng = random.Random(SEED)
    extended = obstructed = 0
    for name in ("F2", "F4"):
        A = fixture(name)
        for k in range(20):
            d = _random_order_one(A, rng)
            require(validate_deformation(d).valid, f"{name} sample {k} is not a valid deformation")
            require(obstruction(d).is_cocycle, f"{name} sample {k}: delta_c(Ob) != 0")
            res = extend(d)
            if res.extended:
                require(validate_deformation(res.deformation).valid, f"{name} sample {k}: extension invalid")
                extended += 1
            else:
                obstructed += 1
    for name in FIXTURES:
        A = fixture(name)
        d = TruncatedDeformation.from_terms(A, [(A.mu1.copy(), A.mu2.copy())])
        for order in range(2, 5):
            res = extend(d)
            require(res.extended, f"{name}: scaling deformation stuck at order {order - 1}")
            d = res.deformation
            require(validate_deformation(d).valid, f"{name}: scaling order {order} invalid")
    return f"40 obstructions are cocycles ({extended} extended, {obstructed} obstructed); scaling reaches order 4"


# -- 9 ------------------------------------------------------------------------

def criterion_9():
    for name in FIXTURES + ["NC"]:
        A = fixture(name)
        require(phi_chain_map_check(A, n_max=2).passed, f"{name}: phi residual nonzero")
        require(phi_skew_chain_map(A, n_max=2).passed, f"{name}: skew residual nonzero")
    return "zero residuals for F1-F4 and NC through degree 2"


# -- 10 -----------------------------------------------------------------------

def criterion_10():
    lines, failed = [], []
    for name in ("F1", "F2", "F3"):
        rep = kahler_check(fixture(name))
        lines.append(f"{name} H1={rep.h1_dim} quotient={rep.presentation_dim}")
        if not (rep.dims_match and rep.action_well_defined):
            failed.append(
                f"{name}: dim H_1^c = {rep.h1_dim} but dim (A(x)A)/R = {rep.presentation_dim}; "
                f"action well defined: {rep.action_well_defined}; "
                f"R spanned by {_span(rep.relation_span)}; "
                f"im of boundary spanned by {_span(rep.boundary_span)}")
    require(not failed, " | ".join(failed))
    return ", ".join(lines)


def _span(vectors):
    return "[" + ", ".join("(" + ", ".join(str(x) for x in v) + ")" for v in vectors) + "]"


# -- 11 -----------------------------------------------------------------------

def criterion_11():
    count = 0
    for name in FIXTURES + ["NC"]:
        for command in sorted(COMMANDS):
            argv = [command, "--fixture", name]
            first, second = run(argv), run(argv)
            require(first[1] == second[1] and render(first[0]) == render(second[0]),
                    f"{command} on {name} is not deterministic")
            count += 1
        doc = fixture_document(name)
        text = serialize(doc)
        require(parse(text) == doc and serialize(parse(text)) == text, f"{name}: round trip changed the document")
    return f"{count} command runs byte-identical; round trip is the identity"


CRITERIA = [
    (1, "axiom/bracket agreement", criterion_1),
    (2, "differential identities", criterion_2),
    (3, "self-coefficient identification", criterion_3),
    (4, "graded Lie laws", criterion_4),
    (5, "golden dimensions", criterion_5),
    (6, "extension round trip", criterion_6),
    (7, "Nijenhuis pipeline", criterion_7),
    (8, "obstruction calculus", criterion_8),
    (9, "chain maps", criterion_9),
    (10, "Kahler check", criterion_10),
    (11, "CLI determinism", criterion_11),
]


def evaluate(fn):
    try:
        return True, fn()
    except CriterionFailure as exc:
        return False, str(exc)


def line(number, title, ok, detail):
    return f"criterion {number:2d} {title}: {'PASS' if ok else 'FAIL'} ({detail})"


_LINES: dict[int, str] = {}


@pytest.fixture(scope="module", autouse=True)
def _report(request):
    yield
    reporter = request.config.pluginmanager.get_plugin("terminalreporter")
    if reporter is not None and _LINES:
        reporter.ensure_newline()
        reporter.write_sep("-", "acceptance criteria")
        for number in sorted(_LINES):
            reporter.write_line(_LINES[number])


@pytest.mark.parametrize("number, title, fn", CRITERIA, ids=[f"criterion_{c[0]}" for c in CRITERIA])
def test_criterion(number, title, fn):
    ok, detail = evaluate(fn)
    text = line(number, title, ok, detail)
    _LINES[number] = text
    print(text)
    assert ok, text


if __name__ == "__main__":
    results = [evaluate(fn) + (number, title) for number, title, fn in CRITERIA]
    for ok, detail, number, title in results:
        print(line(number, title, ok, detail))
    sys.exit(0 if all(r[0] for r in results) else 1)
