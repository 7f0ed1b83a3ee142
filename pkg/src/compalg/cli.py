"""Command line front end: ``compalg <command> [document] [options]``.

Reports are JSON on standard output (or ``--output``).  Exit status is 0 on
success, 1 when the mathematics fails (an axiom does not hold, an extension
is obstructed) and 2 for input errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from itertools import combinations

import numpy as np

from compalg.algebra import (
    validate_compatible_algebra,
    validate_compatible_bimodule,
)
from compalg.cohomology import (
    CompatibleCochainComplex,
    cocycle_from_extension,
    derivations,
    extension_from_cocycle,
    extensions_equivalent,
    validate_extension,
)
from compalg.deformation import (
    extend,
    normalize,
    obstruction,
    validate_deformation,
)
from compalg.document import (
    AlgebraDocument,
    DocumentError,
    FIXTURE_NAMES,
    fixture_document,
    matrix_out,
    parse,
    scalar_out,
    to_data,
    triples_out,
)
from compalg.errors import CompalgError, InvalidStructure, NotACocycle
from compalg.gerstenhaber import bracket, compat_bracket, is_maurer_cartan
from compalg.homology import homology, kahler_check
from compalg.lie import (
    LieCochainComplex,
    skew_symmetrize_algebra,
    skew_symmetrize_bimodule,
    validate_compatible_lie,
    validate_compatible_rep,
)
from compalg.operators import (
    are_compatible_rb,
    is_nijenhuis,
    is_rota_baxter,
    nijenhuis_trivial_deformation,
    rb_compatible_pair_algebras,
)

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2


def sparse(t: np.ndarray) -> list[dict]:
    """Nonzero entries of a multilinear map, output index first."""
    out = []
    for idx in np.ndindex(*t.shape):
        if t[idx] != 0:
            out.append({"out": int(idx[0]), "args": [int(i) for i in idx[1:]],
                        "c": scalar_out(t[idx])})
    return out


def _vector(v) -> list:
    return [scalar_out(x) for x in v]


def _status(ok: bool) -> str:
    return "PASS" if ok else "FAIL"


def _require_valid_algebra(doc: AlgebraDocument):
    rep = validate_compatible_algebra(doc.algebra())
    if not rep.passed:
        raise InvalidStructure("not a compatible associative algebra", rep)
    if doc.module is not None:
        mrep = validate_compatible_bimodule(doc.algebra(), doc.bimodule())
        if not mrep.passed:
            raise InvalidStructure("not a compatible bimodule", mrep)


def _coefficients(doc: AlgebraDocument) -> str:
    return "module" if doc.module is not None else "adjoint"


# -- commands ---------------------------------------------------------------
# Each returns (report fields, success flag).

def cmd_validate(doc, args):
    rep = validate_compatible_algebra(doc.algebra())
    out = {"algebra": rep.as_dict()}
    ok = rep.passed
    if doc.module is not None:
        mrep = validate_compatible_bimodule(doc.algebra(), doc.bimodule())
        out["module"] = mrep.as_dict()
        ok = ok and mrep.passed
    return out, ok


def cmd_cohomology(doc, args):
    _require_valid_algebra(doc)
    cx = CompatibleCochainComplex(doc.algebra(), doc.bimodule())
    table = []
    for deg in cx.report(args.max_degree).degrees:
        row = deg.as_dict()
        if deg.degree == 0:
            row["representatives"] = [_vector(v) for v in deg.representatives]
        else:
            row["representatives"] = [[sparse(c) for c in cx.split(deg.degree, v)]
                                      for v in deg.representatives]
        table.append(row)
    return {"coefficients": _coefficients(doc), "dims": [r["H"] for r in table],
            "table": table}, True


def cmd_homology(doc, args):
    _require_valid_algebra(doc)
    M = doc.bimodule() if doc.module is not None else None
    rep = homology(doc.algebra(), M, args.max_degree)
    table = []
    for deg in rep.degrees:
        row = deg.as_dict()
        row["representatives"] = [_vector(v) for v in deg.representatives]
        table.append(row)
    return {"coefficients": _coefficients(doc), "dims": rep.dims(), "table": table}, True


def cmd_derivations(doc, args):
    _require_valid_algebra(doc)
    d = derivations(doc.algebra(), doc.bimodule())
    return {"coefficients": _coefficients(doc),
            "derivations": [matrix_out(m) for m in d.derivations],
            "inner": [matrix_out(m) for m in d.inner],
            "outer_dim": d.h1_dim}, True


def cmd_mc_check(doc, args):
    res = is_maurer_cartan(doc.mu1, doc.mu2)
    out = {"maurer_cartan": res.is_mc}
    if res.witness is not None:
        out["witness"] = res.witness
    return out, res.is_mc


def cmd_bracket(doc, args):
    prods = {"mu1": doc.mu1, "mu2": doc.mu2}
    table = []
    for a, b in (("mu1", "mu1"), ("mu1", "mu2"), ("mu2", "mu2")):
        table.append({"left": a, "right": b, "value": sparse(bracket(prods[a], prods[b]))})
    square = compat_bracket((doc.mu1, doc.mu2), (doc.mu1, doc.mu2))
    return {"gerstenhaber": table,
            "compatible_square": [sparse(c) for c in square]}, True


def _operators(doc):
    if not doc.operators:
        raise DocumentError("command needs an operators block", "$.operators")
    return sorted(doc.operators.items())


def cmd_nijenhuis_check(doc, args):
    _require_valid_algebra(doc)
    A = doc.algebra()
    results, ok = [], True
    for name, N in _operators(doc):
        chk = is_nijenhuis(A, N)
        row = {"operator": name, "nijenhuis": chk.holds}
        if chk.holds:
            td = nijenhuis_trivial_deformation(A, N)
            row["trivial_deformation"] = {
                "omega": [triples_out(o) for o in td.omega],
                "equals_coboundary": td.equals_coboundary,
                "is_cocycle": td.is_cocycle,
                "conditions_hold": td.conditions_hold,
                "compatible": td.compatible,
            }
            ok = ok and td.verified
        else:
            row["witness"] = chk.witness
            ok = False
        results.append(row)
    return {"operators": results}, ok


def cmd_rb_check(doc, args):
    """Rota-Baxter checks against mu1; pairs of operators are also tested
    for compatibility."""
    ops = _operators(doc)
    results, ok = [], True
    for name, R in ops:
        chk = is_rota_baxter(doc.mu1, R)
        row = {"operator": name, "rota_baxter": chk.holds}
        if not chk.holds:
            row["witness"] = chk.witness
        ok = ok and chk.holds
        results.append(row)
    pairs = []
    for (n1, R), (n2, S) in combinations(ops, 2):
        chk = are_compatible_rb(doc.mu1, R, S)
        row = {"pair": [n1, n2], "compatible": chk.holds}
        if chk.holds:
            B = rb_compatible_pair_algebras(doc.mu1, R, S)
            row["algebra"] = {"mu1": triples_out(B.mu1), "mu2": triples_out(B.mu2),
                              "valid": validate_compatible_algebra(B).passed}
        else:
            row["witness"] = chk.witness
        pairs.append(row)
    return {"product": "mu1", "operators": results, "pairs": pairs}, ok


def _deformation_data(d) -> dict:
    return {"order": d.order, "terms": [{"mu1": triples_out(a), "mu2": triples_out(b)}
                                        for a, b in zip(d.mu1_terms[1:], d.mu2_terms[1:])]}


def cmd_deform_validate(doc, args):
    d = doc.truncated_deformation()
    chk = validate_deformation(d)
    return {"order": d.order, "valid": chk.valid, "failing_order": chk.failing_order,
            "forms_agree": chk.forms_agree}, chk.valid and chk.forms_agree


def _obstruction_data(ob) -> dict:
    return {"cochain": [sparse(c) for c in ob.cochain], "is_cocycle": ob.is_cocycle,
            "class_coordinates": _vector(ob.class_coordinates), "vanishes": ob.vanishes}


def cmd_deform_obstruction(doc, args):
    ob = obstruction(doc.truncated_deformation())
    return {"obstruction": _obstruction_data(ob)}, ob.is_cocycle


def cmd_deform_extend(doc, args):
    res = extend(doc.truncated_deformation())
    out = {"extended": res.extended, "obstruction": _obstruction_data(res.obstruction)}
    if res.extended:
        out["deformation"] = _deformation_data(res.deformation)
    return out, res.extended


def cmd_deform_normalize(doc, args):
    d = normalize(doc.truncated_deformation())
    return {"deformation": _deformation_data(d)}, True


def _cocycles(doc):
    if not doc.cocycles:
        raise DocumentError("command needs a cocycles block", "$.cocycles")
    return sorted(doc.cocycles.items())


def cmd_extension_from_cocycle(doc, args):
    _require_valid_algebra(doc)
    A, M = doc.algebra(), doc.bimodule()
    results, ok = [], True
    for name, pair in _cocycles(doc):
        try:
            E = extension_from_cocycle(A, M, pair)
        except NotACocycle:
            results.append({"cocycle": name, "is_cocycle": False})
            ok = False
            continue
        back = cocycle_from_extension(E)
        round_trip = all(np.array_equal(a, b) for a, b in zip(back, pair))
        problems = validate_extension(E)
        results.append({"cocycle": name, "is_cocycle": True,
                        "total": {"dim": E.total.dim, "mu1": triples_out(E.total.mu1),
                                  "mu2": triples_out(E.total.mu2)},
                        "valid": not problems, "problems": problems,
                        "round_trip": round_trip})
        ok = ok and round_trip and not problems
    return {"coefficients": _coefficients(doc), "extensions": results}, ok


def cmd_extension_classify(doc, args):
    _require_valid_algebra(doc)
    A, M = doc.algebra(), doc.bimodule()
    cx = CompatibleCochainComplex(A, M)
    q = cx.subquotient(2)
    classes, exts, ok = [], {}, True
    for name, pair in _cocycles(doc):
        if not cx.is_cocycle(pair):
            classes.append({"cocycle": name, "is_cocycle": False})
            ok = False
            continue
        coords = q.coordinates(cx.join(pair))
        classes.append({"cocycle": name, "is_cocycle": True, "class": _vector(coords),
                        "trivial": all(c == 0 for c in coords)})
        exts[name] = extension_from_cocycle(A, M, pair)
    pairs = [{"pair": [a, b], "equivalent": extensions_equivalent(exts[a], exts[b])}
             for a, b in combinations(sorted(exts), 2)]
    return {"coefficients": _coefficients(doc), "h2_dim": q.dim, "classes": classes,
            "equivalences": pairs}, ok


def cmd_lie_skew(doc, args):
    A, M = doc.algebra(), doc.bimodule()
    L = skew_symmetrize_algebra(A)
    V = skew_symmetrize_bimodule(A, M)
    lrep, vrep = validate_compatible_lie(L), validate_compatible_rep(L, V)
    return {"bracket1": triples_out(L.bracket1), "bracket2": triples_out(L.bracket2),
            "rho1": triples_out(V.rho1), "rho2": triples_out(V.rho2),
            "lie": lrep.as_dict(), "representation": vrep.as_dict()}, lrep.passed and vrep.passed


def cmd_lie_cohomology(doc, args):
    _require_valid_algebra(doc)
    A, M = doc.algebra(), doc.bimodule()
    lx = LieCochainComplex(skew_symmetrize_algebra(A), skew_symmetrize_bimodule(A, M))
    table = lx.report(args.max_degree)
    return {"coefficients": _coefficients(doc), "dims": [r["H"] for r in table],
            "table": table}, True


def cmd_kahler_check(doc, args):
    _require_valid_algebra(doc)
    rep = kahler_check(doc.algebra())
    n = doc.dim
    out = {"h1_dim": rep.h1_dim, "presentation_dim": rep.presentation_dim,
           "relation_dim": rep.relation_dim, "boundary_dim": rep.boundary_dim,
           "dims_match": rep.dims_match, "spans_coincide": rep.spans_coincide,
           "action_well_defined": rep.action_well_defined,
           "relation_span": [matrix_out(v.reshape(n, n)) for v in rep.relation_span],
           "boundary_span": [matrix_out(v.reshape(n, n)) for v in rep.boundary_span]}
    return out, rep.dims_match and rep.action_well_defined


COMMANDS = {
    "validate": cmd_validate,
    "cohomology": cmd_cohomology,
    "homology": cmd_homology,
    "derivations": cmd_derivations,
    "mc-check": cmd_mc_check,
    "bracket": cmd_bracket,
    "nijenhuis-check": cmd_nijenhuis_check,
    "rb-check": cmd_rb_check,
    "deform-validate": cmd_deform_validate,
    "deform-obstruction": cmd_deform_obstruction,
    "deform-extend": cmd_deform_extend,
    "deform-normalize": cmd_deform_normalize,
    "extension-from-cocycle": cmd_extension_from_cocycle,
    "extension-classify": cmd_extension_classify,
    "lie-skew": cmd_lie_skew,
    "lie-cohomology": cmd_lie_cohomology,
    "kahler-check": cmd_kahler_check,
}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="compalg", description=__doc__.splitlines()[0])
    p.add_argument("command", choices=sorted(COMMANDS))
    p.add_argument("document", nargs="?", help="JSON algebra document ('-' for stdin)")
    p.add_argument("--fixture", choices=FIXTURE_NAMES, help="use a built-in algebra")
    p.add_argument("--max-degree", type=int, default=3,
                   help="highest degree for (co)homology tables (default 3)")
    p.add_argument("--output", help="write the report here instead of stdout")
    p.add_argument("--dump-document", action="store_true",
                   help="echo the parsed document in the report")
    return p


def _load(args) -> tuple[AlgebraDocument, str]:
    if (args.fixture is None) == (args.document is None):
        raise DocumentError("give exactly one of a document path or --fixture", "argv")
    if args.fixture is not None:
        return fixture_document(args.fixture), f"fixture:{args.fixture}"
    if args.document == "-":
        return parse(sys.stdin.read()), "stdin"
    try:
        with open(args.document, encoding="utf-8") as fh:
            text = fh.read()
    except (OSError, UnicodeDecodeError) as exc:
        raise DocumentError(f"cannot read document: {exc}", "argv") from None
    return parse(text), args.document


def run(argv=None) -> tuple[dict, int]:
    """Parse arguments, run one command, return (report, exit code)."""
    args = build_parser().parse_args(argv)
    report: dict = {"format": 1, "command": args.command, "max_degree": args.max_degree}
    try:
        if args.max_degree < 0:
            raise DocumentError("--max-degree must be nonnegative", "argv")
        doc, source = _load(args)
        report["input"] = source
        if args.dump_document:
            report["document"] = to_data(doc)
        fields, ok = COMMANDS[args.command](doc, args)
    except DocumentError as exc:
        report.update(status="ERROR", error={"message": exc.message, "position": exc.position})
        return report, EXIT_INPUT
    except InvalidStructure as exc:
        report.update(status="FAIL", error={"message": str(exc)})
        if exc.report is not None:
            report["checks"] = exc.report.as_dict()["checks"]
        return report, EXIT_FAIL
    except CompalgError as exc:
        report.update(status="ERROR", error={"message": str(exc)})
        return report, EXIT_INPUT
    report["status"] = _status(ok)
    report.update(fields)
    return report, EXIT_OK if ok else EXIT_FAIL


def _default(x):
    if isinstance(x, Fraction):
        return scalar_out(x)
    if isinstance(x, np.integer):
        return int(x)
    raise TypeError(f"cannot serialize {type(x).__name__}")


def render(report: dict) -> str:
    return json.dumps(report, indent=2, default=_default) + "\n"


def main(argv=None) -> int:
    report, code = run(argv)
    text = render(report)
    args = build_parser().parse_args(argv)
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    if code == EXIT_INPUT:
        err = report.get("error", {})
        print(f"error: {err.get('position', '')}: {err.get('message', '')}", file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
