"""JSON file formats for algebras, matched pairs, flag datums and reports.

An algebra file looks like::

    {"field": "GF:3", "dim": 2, "basis": ["1", "x"], "unit": [1, 0],
     "mult": [{"i": 1, "j": 1, "coeffs": [0, 1]}],
     "bracket": [{"i": 0, "j": 1, "coeffs": [0, 1]}]}

Products are listed for ``i <= j`` and brackets for ``i < j``; everything
omitted is zero. Scalars are integers or strings such as ``"-3/4"``.
"""

from __future__ import annotations

import json
from fractions import Fraction
from pathlib import Path

from .algebra import AxiomReport, JacobiAlgebra
from .errors import AlgebraError, FileFormatError
from .extensions import FlagDatum
from .factorization import MatchedPair
from .field import Field
from .tensor import Tensor


def scalar_out(F: Field, x):
    """Canonical JSON form: an int when integral, otherwise ``"num/den"``."""
    x = F.norm(x)
    if isinstance(x, Fraction):
        return f"{x.numerator}/{x.denominator}"
    return x


def vector_out(F: Field, v) -> list:
    return [scalar_out(F, x) for x in v]


def matrix_out(F: Field, M) -> list:
    return [vector_out(F, row) for row in M]


def _scalar_in(F: Field, x, path: str):
    if isinstance(x, bool) or not isinstance(x, (int, str)):
        raise FileFormatError(path, f"scalar must be an integer or a string, got {x!r}")
    try:
        return F(x)
    except AlgebraError as exc:
        raise FileFormatError(path, str(exc)) from None


def _vector_in(F: Field, v, n: int | None, path: str) -> tuple:
    if not isinstance(v, list):
        raise FileFormatError(path, "expected a list of scalars")
    if n is not None and len(v) != n:
        raise FileFormatError(path, f"expected {n} entries, got {len(v)}")
    return tuple(_scalar_in(F, x, f"{path}[{k}]") for k, x in enumerate(v))


def matrix_in(F: Field, M, rows: int, cols: int, path: str = "matrix") -> tuple:
    if not isinstance(M, list) or len(M) != rows:
        raise FileFormatError(path, f"expected {rows} rows")
    return tuple(_vector_in(F, r, cols, f"{path}[{k}]") for k, r in enumerate(M))


def _require(obj, key: str, path: str):
    if not isinstance(obj, dict):
        raise FileFormatError(path, "expected an object")
    if key not in obj:
        raise FileFormatError(f"{path}.{key}", "missing")
    return obj[key]


# -- sparse tables ---------------------------------------------------------

def _table_out(F: Field, t: Tensor, rule: str) -> list:
    out = []
    n1, n2, _ = t.dims
    for i in range(n1):
        for j in range(n2):
            if (rule == "sym" and j < i) or (rule == "anti" and j <= i):
                continue
            v = t.coeffs[i][j]
            if any(v):
                out.append({"i": i, "j": j, "coeffs": vector_out(F, v)})
    return out


def _table_in(F: Field, entries, dims, rule: str | None, path: str) -> Tensor:
    if not isinstance(entries, list):
        raise FileFormatError(path, "expected a list of {i, j, coeffs} entries")
    n1, n2, n3 = dims
    table = {}
    for k, e in enumerate(entries):
        here = f"{path}[{k}]"
        i, j = _require(e, "i", here), _require(e, "j", here)
        if not (isinstance(i, int) and isinstance(j, int) and 0 <= i < n1 and 0 <= j < n2):
            raise FileFormatError(here, f"index ({i}, {j}) out of range")
        if rule == "sym" and i > j:
            raise FileFormatError(here, "products are listed with i <= j")
        if rule == "anti" and i >= j:
            raise FileFormatError(here, "brackets are listed with i < j")
        if (i, j) in table:
            raise FileFormatError(here, f"duplicate entry ({i}, {j})")
        table[(i, j)] = _vector_in(F, _require(e, "coeffs", here), n3, f"{here}.coeffs")
    return Tensor.from_entries(F, dims, table, complete=rule)


# -- algebras --------------------------------------------------------------

def algebra_to_dict(A: JacobiAlgebra) -> dict:
    F = A.field
    out = {"field": str(F), "dim": A.dim, "basis": list(A.labels),
           "mult": _table_out(F, A.mult, "sym"), "bracket": _table_out(F, A.bracket, "anti")}
    if A.unit is not None:
        out["unit"] = vector_out(F, A.unit)
    if A.name:
        out["name"] = A.name
    return out


def algebra_from_dict(obj, path: str = "algebra", field: Field | None = None) -> JacobiAlgebra:
    raw_field = obj.get("field") if isinstance(obj, dict) else None
    if raw_field is None:
        if field is None:
            _require(obj, "field", path)
        F = field
    else:
        try:
            F = Field.parse(str(raw_field))
        except AlgebraError as exc:
            raise FileFormatError(f"{path}.field", str(exc)) from None
    if "dim" not in obj and isinstance(obj.get("basis"), list):
        n = len(obj["basis"])
    else:
        n = _require(obj, "dim", path)
    if not isinstance(n, int) or isinstance(n, bool) or n < 0:
        raise FileFormatError(f"{path}.dim", "must be a non-negative integer")
    basis = obj.get("basis", [f"e{i}" for i in range(n)])
    if not isinstance(basis, list) or len(basis) != n:
        raise FileFormatError(f"{path}.basis", f"expected {n} labels")
    unit = obj.get("unit")
    if unit is not None:
        unit = _vector_in(F, unit, n, f"{path}.unit")
    mult = _table_in(F, obj.get("mult", []), (n, n, n), "sym", f"{path}.mult")
    brk = _table_in(F, obj.get("bracket", []), (n, n, n), "anti", f"{path}.bracket")
    return JacobiAlgebra(F, tuple(str(b) for b in basis), mult, brk, unit, str(obj.get("name", "")))


# -- matched pairs ---------------------------------------------------------

_ACTIONS = ("act_r", "act_out", "lie_r", "lie_out")


def matched_pair_to_dict(mp: MatchedPair) -> dict:
    F = mp.P.field
    out = {"P": algebra_to_dict(mp.P), "Q": algebra_to_dict(mp.Q)}
    for name in _ACTIONS:
        out[name] = _table_out(F, getattr(mp, name), "")
    return out


def matched_pair_from_dict(obj, path: str = "pair") -> MatchedPair:
    P = algebra_from_dict(_require(obj, "P", path), f"{path}.P")
    Q = algebra_from_dict(_require(obj, "Q", path), f"{path}.Q", field=P.field)
    if Q.field != P.field:
        raise FileFormatError(f"{path}.Q.field", "P and Q must share a field")
    n, m = P.dim, Q.dim
    dims = {"act_r": (m, n, m), "act_out": (m, n, n), "lie_r": (m, n, m), "lie_out": (m, n, n)}
    acts = {name: _table_in(P.field, obj.get(name, []), dims[name], None, f"{path}.{name}")
            for name in _ACTIONS}
    return MatchedPair(P, Q, **acts)


# -- flag datums -----------------------------------------------------------

def flag_datum_to_dict(F: Field, fd: FlagDatum) -> dict:
    return {"Lam": vector_out(F, fd.Lam), "Delta": matrix_out(F, fd.Delta), "f0": vector_out(F, fd.f0),
            "u": scalar_out(F, fd.u), "lam": vector_out(F, fd.lam), "D": matrix_out(F, fd.D)}


def flag_datum_from_dict(A: JacobiAlgebra, obj, path: str = "datum") -> FlagDatum:
    F, n = A.field, A.dim
    return FlagDatum(
        Lam=_vector_in(F, _require(obj, "Lam", path), n, f"{path}.Lam"),
        Delta=matrix_in(F, _require(obj, "Delta", path), n, n, f"{path}.Delta"),
        f0=_vector_in(F, _require(obj, "f0", path), n, f"{path}.f0"),
        u=_scalar_in(F, _require(obj, "u", path), f"{path}.u"),
        lam=_vector_in(F, _require(obj, "lam", path), n, f"{path}.lam"),
        D=matrix_in(F, _require(obj, "D", path), n, n, f"{path}.D"))


# -- files and reports -----------------------------------------------------

def read_json(path) -> object:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise FileFormatError(str(path), exc.strerror or "unreadable") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise FileFormatError(f"{path}:{exc.lineno}:{exc.colno}", exc.msg) from None


def load_algebra(path) -> JacobiAlgebra:
    return algebra_from_dict(read_json(path), str(path))


def load_matched_pair(path) -> MatchedPair:
    return matched_pair_from_dict(read_json(path), str(path))


def save_json(path, obj):
    Path(path).write_text(dumps(obj))


def dumps(obj) -> str:
    """Deterministic rendering: sorted keys, two-space indent, trailing newline."""
    return json.dumps(obj, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def axiom_report_out(A_or_F, rep: AxiomReport, labels=None, limit: int = 20) -> dict:
    """Summary of a report; witnesses are rendered with basis labels when given."""
    F = A_or_F.field if isinstance(A_or_F, JacobiAlgebra) else A_or_F
    if labels is None and isinstance(A_or_F, JacobiAlgebra):
        labels = A_or_F.labels
    shown = []
    for v in rep.violations[:limit]:
        w = [labels[i] if labels is not None and isinstance(i, int) and 0 <= i < len(labels) else i
             for i in v.witness]
        shown.append({"axiom": v.axiom, "witness": w, "lhs": vector_out(F, v.lhs), "rhs": vector_out(F, v.rhs)})
    return {"passed": rep.passed, "failed_axioms": rep.failed_axioms(),
            "violation_count": len(rep.violations), "violations": shown}
