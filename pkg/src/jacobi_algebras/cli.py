"""Command-line front end; every command prints one JSON report.

Exit codes: 0 when a check passes or a value is computed, 1 when a check
fails or the search finds nothing, 2 for usage, parse and budget errors.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time

from . import catalog, formats
from .algebra import (check_commutative_associative_unital, check_jacobi, check_lie, check_poisson,
                      conformal_deform, poissonization, yang_baxter_check)
from .errors import AlgebraError, BudgetExceeded, FileFormatError, NotADeformationMap
from .extensions import check_flag_datum, classify_flag, classify_flag_chain, flag_algebra
from .factorization import (bicrossed_product, check_matched_pair, complement_classes, deform,
                            deformation_report, extract_matched_pair)
from .field import Field
from .isoclass import find_isomorphism, verify_isomorphism
from .representations import frobenius_pair, gram_matrix, integral_space

FIELD_ENV = "JACOBI_DEFAULT_FIELD"


class UsageError(Exception):
    pass


def _default_field() -> Field:
    return Field.parse(os.environ.get(FIELD_ENV, "Q"))


def _field_arg(args) -> Field | None:
    return Field.parse(args.field) if getattr(args, "field", None) else None


def _parse_params(pairs) -> dict:
    out = {}
    for item in pairs or ():
        key, sep, val = item.partition("=")
        if not sep:
            raise UsageError(f"--param expects key=value, got {item!r}")
        out[key.strip()] = val.strip()
    return out


def _load_json_with_field(path: str, field: Field | None):
    obj = formats.read_json(path)
    if field is not None and isinstance(obj, dict):
        obj = dict(obj, field=str(field))
        for side in ("P", "Q"):
            if isinstance(obj.get(side), dict):
                obj[side] = dict(obj[side], field=str(field))
    return obj


def load_algebra_arg(source: str, field: Field | None = None, params=None):
    """A JSON file path, or ``catalog:NAME`` built with ``params`` (example values by default)."""
    if source.startswith("catalog:"):
        name = source[len("catalog:"):]
        F = field or _default_field()
        p = _parse_params(params)
        built = catalog.build(name, p, F) if p or not catalog.entry(name).params else \
            catalog.build_example(name, F)
        return built
    return formats.algebra_from_dict(_load_json_with_field(source, field), source)


def load_pair_arg(source: str, field: Field | None = None, params=None):
    if source.startswith("catalog:"):
        pair = load_algebra_arg(source, field, params)
        if not hasattr(pair, "act_r"):
            raise UsageError(f"{source} is not a matched pair")
        return pair
    return formats.matched_pair_from_dict(_load_json_with_field(source, field), source)


def _int_list(text: str) -> list[int]:
    try:
        return [int(x) for x in text.replace(" ", "").split(",") if x != ""]
    except ValueError:
        raise UsageError(f"expected comma-separated indices, got {text!r}") from None


def _vector_arg(F: Field, text: str) -> tuple:
    text = text.strip()
    if text.startswith("["):
        try:
            items = json.loads(text)
        except json.JSONDecodeError as exc:
            raise UsageError(f"cannot parse {text!r}: {exc.msg}") from None
    else:
        items = [x for x in text.replace(" ", "").split(",") if x != ""]
    return tuple(F(x if isinstance(x, str) else int(x)) for x in items)


def _matrix_arg(F: Field, text: str, rows: int, cols: int, what: str) -> tuple:
    try:
        M = json.loads(text)
    except json.JSONDecodeError as exc:
        raise UsageError(f"--{what} must be a JSON matrix: {exc.msg}") from None
    return formats.matrix_in(F, M, rows, cols, what)


# -- commands --------------------------------------------------------------
# Each returns (status, field, payload).

def cmd_verify(args):
    A = load_algebra_arg(args.algebra, _field_arg(args), args.param)
    mode = args.mode
    if args.poisson:
        rep = check_poisson(A)
        mode = "poisson"
    elif mode == "assoc":
        rep = check_commutative_associative_unital(A)
    elif mode == "lie":
        rep = check_lie(A)
    else:
        rep = check_jacobi(A)
    payload = {"algebra": A.name or args.algebra, "mode": mode, "report": formats.axiom_report_out(A, rep)}
    return ("pass" if rep.passed else "fail"), A.field, payload


def cmd_catalog(args):
    if args.action == "list":
        entries = [{"name": e.name, "kind": e.kind, "params": [list(p) for p in e.params],
                    "description": e.description} for e in catalog.list_entries()]
        return "value", None, {"entries": entries}
    if not args.name:
        raise UsageError("catalog show needs an entry name")
    F = _field_arg(args) or _default_field()
    obj = load_algebra_arg(f"catalog:{args.name}", F, args.param)
    if hasattr(obj, "act_r"):
        return "value", F, {"pair": formats.matched_pair_to_dict(obj)}
    return "value", F, {"algebra": formats.algebra_to_dict(obj)}


def cmd_integrals(args):
    A = load_algebra_arg(args.algebra, _field_arg(args), args.param)
    space = integral_space(A)
    return "value", A.field, {"dim": len(space), "basis": [formats.vector_out(A.field, v) for v in space]}


def cmd_frobenius(args):
    A = load_algebra_arg(args.algebra, _field_arg(args), args.param)
    F = A.field
    pair = frobenius_pair(A)
    if pair is None:
        return "fail", F, {"present": False, "exhaustive": F.is_finite}
    payload = {
        "present": True,
        "exhaustive": pair.exhaustive,
        "nu": formats.vector_out(F, pair.nu),
        "gram": formats.matrix_out(F, gram_matrix(A, pair.nu)),
        "casimir": [[formats.vector_out(F, a), formats.vector_out(F, b)] for a, b in pair.casimir],
        "euler_casimir": formats.vector_out(F, pair.euler_casimir),
    }
    return "pass", F, payload


def cmd_conformal(args):
    A = load_algebra_arg(args.algebra, _field_arg(args), args.param)
    u = _vector_arg(A.field, args.u)
    B = conformal_deform(A, u)
    return "value", A.field, {"u": formats.vector_out(A.field, u), "algebra": formats.algebra_to_dict(B)}


def cmd_poissonize(args):
    A = load_algebra_arg(args.algebra, _field_arg(args), args.param)
    B, ideal_dim = poissonization(A)
    return "value", A.field, {"ideal_dim": ideal_dim, "quotient_dim": B.dim,
                              "algebra": formats.algebra_to_dict(B)}


def cmd_yangbaxter(args):
    A = load_algebra_arg(args.algebra, _field_arg(args), args.param)
    rep = yang_baxter_check(A)
    return ("pass" if rep.passed else "fail"), A.field, {"report": formats.axiom_report_out(A.field, rep)}


def _flag_report_out(F, rep):
    return {
        "total_datums": rep.total_datums,
        "class_count": rep.class_count,
        "classes": [{"datum": formats.flag_datum_to_dict(F, fd), "size": size} for fd, size in rep.classes],
        "grouping": [{"Lam": formats.vector_out(F, Lam), "lam": formats.vector_out(F, lam),
                      "u": formats.scalar_out(F, u), "classes": count}
                     for (Lam, lam, u), count in rep.grouping.items()],
    }


def cmd_extend(args):
    F = _field_arg(args)
    A = load_algebra_arg(args.algebra, F, args.param)
    if args.action == "classify":
        if args.depth > 1:
            levels = classify_flag_chain(A, args.depth, jobs=args.jobs)
            out = [[{"base": formats.algebra_to_dict(B), "report": _flag_report_out(A.field, rep)}
                    for B, rep in level] for level in levels]
            return "value", A.field, {"depth": args.depth, "levels": out}
        rep = classify_flag(A, jobs=args.jobs)
        return "value", A.field, _flag_report_out(A.field, rep)
    if not args.datum:
        raise UsageError(f"extend {args.action} needs a datum file")
    fd = formats.flag_datum_from_dict(A, formats.read_json(args.datum), args.datum)
    rep = check_flag_datum(A, fd)
    if args.action == "check-datum" or not rep.passed:
        return ("pass" if rep.passed else "fail"), A.field, {"report": formats.axiom_report_out(A.field, rep)}
    return "value", A.field, {"algebra": formats.algebra_to_dict(flag_algebra(A, fd, check=False))}


def cmd_bicrossed(args):
    mp = load_pair_arg(args.pair, _field_arg(args), args.param)
    rep = check_matched_pair(mp)
    payload = {"report": formats.axiom_report_out(mp.P.field, rep)}
    if not rep.passed:
        return "fail", mp.P.field, payload
    payload["algebra"] = formats.algebra_to_dict(bicrossed_product(mp))
    return "value", mp.P.field, payload


def cmd_factorize(args):
    R = load_algebra_arg(args.algebra, _field_arg(args), args.param)
    mp = extract_matched_pair(R, _int_list(args.p), _int_list(args.q))
    return "value", R.field, {"pair": formats.matched_pair_to_dict(mp)}


def cmd_deform(args):
    mp = load_pair_arg(args.pair, _field_arg(args), args.param)
    F = mp.P.field
    r = _matrix_arg(F, args.r, mp.P.dim, mp.Q.dim, "r")
    try:
        Qr = deform(mp, r)
    except NotADeformationMap:
        return "fail", F, {"report": formats.axiom_report_out(F, deformation_report(mp, r), mp.Q.labels)}
    return "value", F, {"r": formats.matrix_out(F, r), "algebra": formats.algebra_to_dict(Qr)}


def cmd_complements(args):
    mp = load_pair_arg(args.pair, _field_arg(args), args.param)
    F = mp.P.field
    rep = complement_classes(mp, jobs=args.jobs)
    return "value", F, {
        "deformation_maps": rep.deformation_maps,
        "factorization_index": rep.factorization_index,
        "classes": [{"r": formats.matrix_out(F, r), "size": size} for r, size in rep.classes],
    }


def cmd_iso(args):
    F = _field_arg(args)
    A = load_algebra_arg(args.first, F)
    B = load_algebra_arg(args.second, F or A.field)
    if args.witness:
        obj = formats.read_json(args.witness)
        raw = obj.get("phi") if isinstance(obj, dict) else obj
        phi = formats.matrix_in(A.field, raw, A.dim, A.dim, f"{args.witness}.phi")
        ok = verify_isomorphism(A, B, phi, args.mode)
        return ("pass" if ok else "fail"), A.field, {"mode": args.mode, "verified": ok}
    phi = find_isomorphism(A, B, args.mode, jobs=args.jobs)
    if phi is None:
        return "fail", A.field, {"mode": args.mode, "isomorphic": False}
    return "pass", A.field, {"mode": args.mode, "isomorphic": True, "witness": formats.matrix_out(A.field, phi)}


# -- parser ----------------------------------------------------------------

def _add_source(p, dest="algebra", params=True):
    p.add_argument(dest, help="JSON file, or catalog:NAME")
    p.add_argument("--field", help="Q or GF:p (overrides the file's field)")
    if params:
        p.add_argument("--param", action="append", metavar="K=V", help="catalog parameter")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="jacobi", description="Exact computations with Jacobi and Poisson algebras.")
    parser.add_argument("--jobs", type=int, default=1, help="worker processes for enumerations")
    parser.add_argument("--timing", action="store_true", help="include wall-clock seconds in the report")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("verify", help="check the axioms of an algebra")
    _add_source(p)
    p.add_argument("--poisson", action="store_true", help="check the Poisson axioms instead")
    p.add_argument("--mode", choices=("jacobi", "assoc", "lie"), default="jacobi")
    p.set_defaults(run=cmd_verify)

    p = sub.add_parser("catalog", help="list or show catalog entries")
    p.add_argument("action", choices=("list", "show"))
    p.add_argument("name", nargs="?")
    p.add_argument("--param", action="append", metavar="K=V")
    p.add_argument("--field")
    p.set_defaults(run=cmd_catalog)

    for name, fn, text in (("integrals", cmd_integrals, "basis of the integral space"),
                           ("frobenius", cmd_frobenius, "search for a Frobenius pair"),
                           ("poissonize", cmd_poissonize, "largest Poisson quotient"),
                           ("yangbaxter", cmd_yangbaxter, "check the braid relation of the Poisson R-matrix")):
        p = sub.add_parser(name, help=text)
        _add_source(p)
        p.set_defaults(run=fn)

    p = sub.add_parser("conformal", help="conformal deformation by an invertible element")
    _add_source(p)
    p.add_argument("--u", required=True, help='coefficients, e.g. "1,-1" or "[1,\\"1/2\\"]"')
    p.set_defaults(run=cmd_conformal)

    p = sub.add_parser("extend", help="flag extensions")
    p.add_argument("action", choices=("classify", "check-datum", "build"))
    _add_source(p)
    p.add_argument("datum", nargs="?", help="flag datum JSON file (check-datum, build)")
    p.add_argument("--depth", type=int, default=1, help="length of the flag chain to classify")
    p.set_defaults(run=cmd_extend)

    p = sub.add_parser("bicrossed", help="bicrossed product of a matched pair")
    _add_source(p, "pair")
    p.set_defaults(run=cmd_bicrossed)

    p = sub.add_parser("factorize", help="matched pair of a factorization R = P + Q")
    _add_source(p)
    p.add_argument("--p", required=True, help="basis indices of P, e.g. 0")
    p.add_argument("--q", required=True, help="basis indices of Q, e.g. 1,2,3")
    p.set_defaults(run=cmd_factorize)

    p = sub.add_parser("deform", help="r-deformation of the second algebra of a matched pair")
    _add_source(p, "pair")
    p.add_argument("--r", required=True, help="dim P × dim Q matrix as JSON")
    p.set_defaults(run=cmd_deform)

    p = sub.add_parser("complements", help="classify deformation maps up to equivalence")
    _add_source(p, "pair")
    p.set_defaults(run=cmd_complements)

    p = sub.add_parser("iso", help="isomorphism search or witness check")
    p.add_argument("first")
    p.add_argument("second")
    p.add_argument("--field")
    p.add_argument("--mode", choices=("jacobi", "assoc", "lie"), default="jacobi")
    p.add_argument("--witness", help="JSON file with a matrix under 'phi'")
    p.set_defaults(run=cmd_iso)
    return parser


_EXIT = {"pass": 0, "value": 0, "fail": 1, "error": 2}


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    start = time.perf_counter()
    field = None
    try:
        status, field, payload = args.run(args)
    except (UsageError, FileFormatError, BudgetExceeded, AlgebraError, ZeroDivisionError) as exc:
        status = "error"
        payload = {"error": type(exc).__name__, "message": str(exc)}
    report = {"command": argv, "status": status, "field": str(field) if field is not None else None,
              "payload": payload}
    if args.timing:
        report["timing"] = round(time.perf_counter() - start, 6)
    sys.stdout.write(formats.dumps(report))
    return _EXIT[status]


if __name__ == "__main__":
    sys.exit(main())
