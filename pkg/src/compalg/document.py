"""JSON documents describing a compatible algebra and optional extra data.

A document looks like::

    {"format": 1, "dim": 2, "basis": ["1", "x"],
     "mu1": [{"i": 0, "j": 0, "k": 0, "c": 1}, ...], "mu2": [],
     "module": {"dim": 1, "l1": [...], "r1": [...], "l2": [...], "r2": [...]},
     "operators": {"N": [[0, 0], [1, 0]]},
     "deformation": {"order": 1, "terms": [{"mu1": [...], "mu2": [...]}]},
     "cocycles": {"f": {"f1": [...], "f2": [...]}}}

A triple {i, j, k, c} means e_i * e_j gains c e_k.  For module actions the
indices of the left action are (algebra, module, module) and of the right
action (module, algebra, module).  Scalars are integers or "p/q" strings.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from compalg import linalg
from compalg.algebra import CompatibleAlgebra, CompatibleBimodule, adjoint_bimodule
from compalg.deformation import TruncatedDeformation
from compalg.errors import CompalgError
from compalg.fixtures import BASIS_NAMES, FIXTURES, fixture, mult_by_x

FORMAT = 1


class DocumentError(CompalgError, ValueError):
    """Malformed document; ``position`` is a JSON path or a line/column."""

    def __init__(self, message: str, position: str = "$"):
        super().__init__(f"{position}: {message}")
        self.message = message
        self.position = position


@dataclass(eq=False)
class ModuleBlock:
    dim: int
    l1: np.ndarray
    r1: np.ndarray
    l2: np.ndarray
    r2: np.ndarray


@dataclass(eq=False)
class AlgebraDocument:
    dim: int
    mu1: np.ndarray
    mu2: np.ndarray
    basis: list[str] | None = None
    name: str | None = None
    module: ModuleBlock | None = None
    operators: dict[str, np.ndarray] = field(default_factory=dict)
    deformation: list[tuple[np.ndarray, np.ndarray]] | None = None
    cocycles: dict[str, tuple[np.ndarray, np.ndarray]] = field(default_factory=dict)

    def algebra(self) -> CompatibleAlgebra:
        return CompatibleAlgebra(self.dim, self.mu1, self.mu2, name=self.name or "")

    def bimodule(self) -> CompatibleBimodule:
        if self.module is None:
            return adjoint_bimodule(self.algebra())
        m = self.module
        return CompatibleBimodule(m.dim, self.dim, m.l1, m.r1, m.l2, m.r2)

    def truncated_deformation(self) -> TruncatedDeformation:
        if self.deformation is None:
            raise DocumentError("command needs a deformation block", "$.deformation")
        return TruncatedDeformation.from_terms(self.algebra(), self.deformation)

    def __eq__(self, other) -> bool:
        if not isinstance(other, AlgebraDocument):
            return NotImplemented
        return serialize(self) == serialize(other)


# -- parsing ----------------------------------------------------------------

def _scalar(x, path: str) -> Fraction:
    if isinstance(x, bool) or not isinstance(x, (int, str)):
        raise DocumentError(f"scalar must be an integer or a 'p/q' string, got {x!r}", path)
    if isinstance(x, int):
        return Fraction(x)
    try:
        return Fraction(x.strip())
    except ZeroDivisionError:
        raise DocumentError(f"zero denominator in {x!r}", path) from None
    except ValueError:
        raise DocumentError(f"not a rational number: {x!r}", path) from None


def _int(x, path: str, lo: int = 0, hi: int | None = None) -> int:
    if isinstance(x, bool) or not isinstance(x, int):
        raise DocumentError(f"expected an integer, got {x!r}", path)
    if x < lo or (hi is not None and x >= hi):
        bound = f"[{lo}, {hi})" if hi is not None else f">= {lo}"
        raise DocumentError(f"value {x} out of range {bound}", path)
    return x


def _obj(x, path: str, allowed: set[str], required: set[str] = frozenset()) -> dict:
    if not isinstance(x, dict):
        raise DocumentError("expected an object", path)
    for key in x:
        if key not in allowed:
            raise DocumentError(f"unknown key {key!r}", path)
    for key in sorted(required):
        if key not in x:
            raise DocumentError(f"missing key {key!r}", path)
    return x


def _mapping(x, path: str) -> dict:
    if not isinstance(x, dict):
        raise DocumentError("expected an object", path)
    return x


def _list(x, path: str) -> list:
    if not isinstance(x, list):
        raise DocumentError("expected a list", path)
    return x


def _triples(x, path: str, shape: tuple[int, int, int]) -> np.ndarray:
    """Sparse triples -> tensor of shape (out, first, second)."""
    t = linalg.zeros(*shape)
    seen = set()
    bounds = {"i": shape[1], "j": shape[2], "k": shape[0]}
    for n, entry in enumerate(_list(x, path)):
        p = f"{path}[{n}]"
        entry = _obj(entry, p, {"i", "j", "k", "c"}, {"i", "j", "k", "c"})
        idx = {}
        for key in ("i", "j", "k"):
            if isinstance(entry[key], int) and not isinstance(entry[key], bool) \
                    and not 0 <= entry[key] < bounds[key]:
                raise DocumentError(
                    f"index {key}={entry[key]} out of range for dimension {bounds[key]} "
                    f"in triple {_show(entry)}", f"{p}.{key}")
            idx[key] = _int(entry[key], f"{p}.{key}", 0, bounds[key])
        key = (idx["i"], idx["j"], idx["k"])
        if key in seen:
            raise DocumentError(f"duplicate triple for (i, j, k) = {key}", p)
        seen.add(key)
        t[idx["k"], idx["i"], idx["j"]] = _scalar(entry["c"], f"{p}.c")
    return t


def _show(entry: dict) -> str:
    return json.dumps(entry, sort_keys=True)


def _matrix(x, path: str, dim: int) -> np.ndarray:
    rows = _list(x, path)
    if len(rows) != dim:
        raise DocumentError(f"operator needs {dim} rows, got {len(rows)}", path)
    out = linalg.zeros(dim, dim)
    for r, row in enumerate(rows):
        row = _list(row, f"{path}[{r}]")
        if len(row) != dim:
            raise DocumentError(f"row needs {dim} entries, got {len(row)}", f"{path}[{r}]")
        for c, v in enumerate(row):
            out[r, c] = _scalar(v, f"{path}[{r}][{c}]")
    return out


_TOP = {"format", "name", "dim", "basis", "mu1", "mu2", "module", "operators",
        "deformation", "cocycles"}


def from_data(data) -> AlgebraDocument:
    data = _obj(data, "$", _TOP, {"format", "dim", "mu1", "mu2"})
    if data["format"] != FORMAT:
        raise DocumentError(f"unsupported format {data['format']!r}; expected {FORMAT}", "$.format")
    dim = _int(data["dim"], "$.dim")
    name = data.get("name")
    if name is not None and not isinstance(name, str):
        raise DocumentError("expected a string", "$.name")
    basis = data.get("basis")
    if basis is not None:
        basis = _list(basis, "$.basis")
        if len(basis) != dim or not all(isinstance(b, str) for b in basis):
            raise DocumentError(f"basis must be {dim} strings", "$.basis")
    cube = (dim, dim, dim)
    doc = AlgebraDocument(dim, _triples(data["mu1"], "$.mu1", cube),
                          _triples(data["mu2"], "$.mu2", cube), basis, name)

    dim_m = dim
    if "module" in data:
        m = _obj(data["module"], "$.module", {"dim", "l1", "r1", "l2", "r2"},
                 {"dim", "l1", "r1", "l2", "r2"})
        dim_m = _int(m["dim"], "$.module.dim")
        left, right = (dim_m, dim, dim_m), (dim_m, dim_m, dim)
        doc.module = ModuleBlock(dim_m, *(
            _triples(m[key], f"$.module.{key}", left if key[0] == "l" else right)
            for key in ("l1", "r1", "l2", "r2")))

    for key, value in _mapping(data.get("operators", {}), "$.operators").items():
        doc.operators[key] = _matrix(value, f"$.operators.{key}", dim)

    if "deformation" in data:
        d = _obj(data["deformation"], "$.deformation", {"order", "terms"}, {"order", "terms"})
        order = _int(d["order"], "$.deformation.order", 1)
        terms = _list(d["terms"], "$.deformation.terms")
        if len(terms) != order:
            raise DocumentError(f"order {order} needs {order} terms, got {len(terms)}",
                                "$.deformation.terms")
        doc.deformation = []
        for n, term in enumerate(terms):
            p = f"$.deformation.terms[{n}]"
            term = _obj(term, p, {"mu1", "mu2"}, {"mu1", "mu2"})
            doc.deformation.append((_triples(term["mu1"], f"{p}.mu1", cube),
                                    _triples(term["mu2"], f"{p}.mu2", cube)))

    for key, value in _mapping(data.get("cocycles", {}), "$.cocycles").items():
        p = f"$.cocycles.{key}"
        value = _obj(value, p, {"f1", "f2"}, {"f1", "f2"})
        doc.cocycles[key] = (_triples(value["f1"], f"{p}.f1", (dim_m, dim, dim)),
                             _triples(value["f2"], f"{p}.f2", (dim_m, dim, dim)))
    return doc


def parse(text: str) -> AlgebraDocument:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DocumentError(exc.msg, f"line {exc.lineno} column {exc.colno}") from None
    return from_data(data)


# -- serialization ----------------------------------------------------------

def scalar_out(x):
    x = Fraction(x)
    return x.numerator if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def triples_out(t: np.ndarray) -> list[dict]:
    out = []
    for i in range(t.shape[1]):
        for j in range(t.shape[2]):
            for k in range(t.shape[0]):
                if t[k, i, j] != 0:
                    out.append({"i": i, "j": j, "k": k, "c": scalar_out(t[k, i, j])})
    return out


def matrix_out(m: np.ndarray) -> list[list]:
    return [[scalar_out(x) for x in row] for row in m]


def to_data(doc: AlgebraDocument) -> dict:
    data: dict = {"format": FORMAT}
    if doc.name is not None:
        data["name"] = doc.name
    data["dim"] = doc.dim
    if doc.basis is not None:
        data["basis"] = list(doc.basis)
    data["mu1"] = triples_out(doc.mu1)
    data["mu2"] = triples_out(doc.mu2)
    if doc.module is not None:
        m = doc.module
        data["module"] = {"dim": m.dim, "l1": triples_out(m.l1), "r1": triples_out(m.r1),
                          "l2": triples_out(m.l2), "r2": triples_out(m.r2)}
    if doc.operators:
        data["operators"] = {k: matrix_out(doc.operators[k]) for k in sorted(doc.operators)}
    if doc.deformation is not None:
        data["deformation"] = {"order": len(doc.deformation), "terms": [
            {"mu1": triples_out(a), "mu2": triples_out(b)} for a, b in doc.deformation]}
    if doc.cocycles:
        data["cocycles"] = {k: {"f1": triples_out(doc.cocycles[k][0]),
                                "f2": triples_out(doc.cocycles[k][1])}
                            for k in sorted(doc.cocycles)}
    return data


def serialize(doc: AlgebraDocument) -> str:
    return json.dumps(to_data(doc), indent=2) + "\n"


# -- built-in documents -----------------------------------------------------

def fixture_document(name: str) -> AlgebraDocument:
    """A fixture with the scaling deformation mu_t = (1 + t) mu and the
    scaling cocycle (mu1, mu2); F2 and F3 also carry N = multiplication by x."""
    A = fixture(name)
    doc = AlgebraDocument(A.dim, A.mu1.copy(), A.mu2.copy(), BASIS_NAMES.get(name), name)
    doc.deformation = [(A.mu1.copy(), A.mu2.copy())]
    doc.cocycles = {"scaling": (A.mu1.copy(), A.mu2.copy())}
    if name in ("F2", "F3"):
        doc.operators = {"N": mult_by_x()}
    return doc


FIXTURE_NAMES = FIXTURES
