"""Named Jacobi and Poisson algebras, parametric families, and matched pairs.

Entries are built from sparse tables written in terms of basis labels, e.g.
``{("x", "x"): {"y": 1}}`` for ``x^2 = y``. Multiplications are completed by
symmetry and brackets by antisymmetry, and the orientation written in the
table is taken literally: ``("x", "1"): {"x": 1}`` means ``[x, 1] = x``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Mapping

from . import linalg
from .algebra import JacobiAlgebra
from .errors import CharConditionViolated, DimensionMismatch, ParamOutOfDomain, UnknownName
from .field import Field, Q
from .tensor import Tensor


@dataclass(frozen=True)
class CatalogEntry:
    name: str
    params: tuple          # ((param name, domain), ...)
    kind: str              # "jacobi", "poisson" or "matched_pair"
    description: str
    builder: Callable
    example: tuple = ()    # sample parameter values (as strings) valid in every field

    @property
    def param_names(self) -> tuple:
        return tuple(p for p, _ in self.params)


def _table(F: Field, labels, entries: Mapping) -> dict:
    idx = {l: i for i, l in enumerate(labels)}
    n = len(labels)
    out = {}
    for (a, b), terms in entries.items():
        v = [0] * n
        for lab, c in terms.items():
            v[idx[lab]] += c
        out[(idx[a], idx[b])] = F.vec(v)
    return out


def algebra(F: Field, labels, mult: Mapping = {}, bracket: Mapping = {}, unital: bool = True,
            name: str = "") -> JacobiAlgebra:
    """Build from label-keyed tables; the unit (if any) is the first basis vector."""
    n = len(labels)
    unit = linalg.unit_vector(n, 0) if unital else None
    m = dict(_table(F, labels, mult))
    if unital:
        for i in range(n):
            m[(0, i)] = linalg.unit_vector(n, i)
    return JacobiAlgebra.from_tables(F, labels, m, _table(F, labels, bracket), unit, name)


# -- parameter domains ----------------------------------------------------

def _check_domain(F: Field, pname: str, domain: str, value):
    bad = False
    if domain == "k":
        pass
    elif domain == "k*":
        bad = value == 0
    elif domain == "k*-{1}":
        bad = value in (0, 1)
    elif domain == "nonsquare":
        bad = F.is_square(value)
    elif domain == "k-{-1,-1/2,0}":
        bad = value in (0, F(-1), F.norm(-F.inv(2)))
    elif domain == "int>=2":
        bad = not (isinstance(value, int) and value >= 2)
    else:
        raise ValueError(f"unknown domain {domain}")
    if bad:
        raise ParamOutOfDomain(f"parameter {pname}={F.format(value) if domain != 'int>=2' else value} "
                               f"is outside its domain {domain}")


def _coerce_params(F: Field, entry: CatalogEntry, params: Mapping) -> dict:
    params = dict(params or {})
    unknown = set(params) - set(entry.param_names)
    if unknown:
        raise ParamOutOfDomain(f"{entry.name} has no parameter(s) {sorted(unknown)}")
    out = {}
    for pname, domain in entry.params:
        if pname not in params:
            raise ParamOutOfDomain(f"{entry.name} requires parameter {pname} ({domain})")
        raw = params[pname]
        if domain == "int>=2":
            try:
                val = int(raw)
            except (TypeError, ValueError):
                raise ParamOutOfDomain(f"{pname} must be an integer") from None
        else:
            val = F(raw) if isinstance(raw, str) else F.norm(raw)
        _check_domain(F, pname, domain, val)
        out[pname] = val
    return out


# -- builders -------------------------------------------------------------

L2 = ("1", "x")
L3 = ("1", "x", "y")
L4 = ("1", "x", "y", "z")
LH = ("H1", "H2", "H3")
LXH = ("X", "H1", "H2", "H3")


def _dim2(F, p, which):
    tables = {
        "J2_1": ({}, {}),
        "J2_2": ({}, {("1", "x"): {"1": 1}}),
        "J2_3": ({("x", "x"): {"x": 1}}, {}),
        "J2_4": ({}, {("x", "1"): {"x": 1}}),
    }
    m, b = tables[which]
    return algebra(F, L2, m, b, name=which)


def _j2d(F, p):
    return algebra(F, L2, {("x", "x"): {"1": p["d"]}}, name="J2_d")


_ZERO3 = {}
_X2Y = {("x", "x"): {"y": 1}}
_X2X = {("x", "x"): {"x": 1}}
_TABLE10 = {
    "J3_1": (_ZERO3, {}),
    "J3_2": (_X2Y, {}),
    "J3_3": (_X2X, {}),
    "J3_4": ({("x", "x"): {"x": 1}, ("y", "y"): {"y": 1}}, {}),
    "J3_5": (_ZERO3, {("x", "1"): {"x": 1}}),
    "J3_6": (_ZERO3, {("x", "y"): {"x": 1}}),
    "J3_7": (_ZERO3, {("x", "1"): {"x": 1, "y": 1}, ("y", "1"): {"y": 1}}),
    "J3_9": (_X2Y, {("x", "1"): {"x": 1}, ("y", "1"): {"y": 2}}),
    "J3_11": (_X2X, {("y", "1"): {"y": 1}}),
}


def _table10(F, p, which):
    m, b = _TABLE10[which]
    return algebra(F, L3, m, b, name=which)


def _j3_8(F, p):
    return algebra(F, L3, {}, {("x", "1"): {"x": 1}, ("y", "1"): {"y": p["u"]}}, name="J3_8")


def _j3_10(F, p):
    return algebra(F, L3, _X2Y, {("x", "1"): {"x": F.inv(2)}, ("y", "1"): {"y": 1}}, name="J3_10")


# Flag extensions of J2_1 (basis 1, x, y with y the adjoined vector).

def _jflag3_1(F, p):
    h = F.inv(2)
    l1, l2, u = p["lambda1"], p["lambda2"], p["u"]
    return algebra(F, L3,
                   {("x", "y"): {"x": h * u}, ("y", "y"): {"1": -u * u * h * h, "y": u}},
                   {("y", "1"): {"1": -h * l1 * u, "y": l1}, ("y", "x"): {"1": -h * l2 * u, "y": l2}},
                   name="Jflag3_1")


def _jflag3_2(F, p):
    h = F.inv(2)
    l1, u, f = p["lambda1"], p["u"], p["f"]
    return algebra(F, L3,
                   {("x", "y"): {"x": h * u}, ("y", "y"): {"1": -u * u * h * h, "x": f, "y": u}},
                   {("y", "1"): {"1": -h * l1 * u, "y": l1}},
                   name="Jflag3_2")


def _jflag3_3(F, p):
    d = p["delta"]
    return algebra(F, L3, {("y", "y"): {"1": d * d}, ("x", "y"): {"x": d}}, {}, name="Jflag3_3")


def _jflag3_4(F, p):
    return algebra(F, L3, {("y", "y"): {"y": p["u"]}}, {}, name="Jflag3_4")


def _jflag3_5(F, p):
    h = F.inv(2)
    u, f, d1, d2 = p["u"], p["f"], p["d1"], p["d2"]
    return algebra(F, L3,
                   {("x", "y"): {"x": h * u}, ("y", "y"): {"1": -u * u * h * h, "x": f, "y": u}},
                   {("y", "1"): {"x": d1}, ("y", "x"): {"x": d2}},
                   name="Jflag3_5")


# Flag extensions of J3_11 (basis 1, x, y, z with z the adjoined vector).

_J311_MULT = {("x", "x"): {"x": 1}}
_J311_BR = {("y", "1"): {"y": 1}}


def _flag4(F, name, mult, bracket):
    m = dict(_J311_MULT)
    m.update(mult)
    b = dict(_J311_BR)
    b.update(bracket)
    return algebra(F, L4, m, b, name=name)


def _jflag4(F, p, which):
    h = F.inv(2)
    q = F.inv(4)
    if which == 1:
        return _flag4(F, "Jflag4_1", {("z", "x"): {"z": 1}},
                      {("z", "1"): {"z": 2}, ("z", "x"): {"1": 2}})
    if which == 2:
        g = p["gamma"]
        return _flag4(F, "Jflag4_2", {("z", "x"): {"y": g, "z": 1}},
                      {("z", "1"): {"z": 1}, ("z", "x"): {"y": -g, "z": 1}})
    if which == 3:
        a, u, v = p["alpha"], p["u"], p["v"]
        return _flag4(F, "Jflag4_3",
                      {("z", "x"): {"1": a, "x": -a, "z": 1}, ("z", "y"): {"y": -a},
                       ("z", "z"): {"1": a * a + a * u, "x": v, "z": u}},
                      {("z", "y"): {"y": a}})
    if which == 4:
        a, b = p["alpha"], p["b"]
        return _flag4(F, "Jflag4_4",
                      {("z", "y"): {"y": a}, ("z", "z"): {"1": -a * a, "x": a * a, "z": 2 * a}},
                      {("z", "y"): {"y": b}})
    if which == 5:
        a, u = p["alpha"], p["u"]
        c = a * (a - u)
        return _flag4(F, "Jflag4_5",
                      {("z", "y"): {"y": a}, ("z", "z"): {"1": c, "x": -c, "z": u}},
                      {("z", "y"): {"y": -a}})
    if which == 6:
        lam = p["lambda"]
        return _flag4(F, "Jflag4_6", {("z", "x"): {"x": 1}, ("z", "z"): {"x": 1}},
                      {("z", "1"): {"x": -lam, "z": lam}})
    if which == 7:
        a = p["a"]
        return _flag4(F, "Jflag4_7", {("z", "x"): {"x": 1}, ("z", "z"): {"x": 1}},
                      {("z", "1"): {"x": -1, "y": a, "z": 1}})
    if which == 8:
        b = p["b"]
        return _flag4(F, "Jflag4_8", {("z", "x"): {"x": 1}, ("z", "z"): {"x": 1, "y": b}},
                      {("z", "1"): {"x": -h, "z": h}})
    if which == 9:
        a = p["a"]
        return _flag4(F, "Jflag4_9",
                      {("z", "x"): {"x": 1}, ("z", "y"): {"y": h},
                       ("z", "z"): {"1": -q, "x": q, "y": a, "z": 1}},
                      {("z", "y"): {"y": -h}, ("z", "1"): {"1": -q, "x": -q, "z": h}})
    if which == 10:
        a = p["a"]
        return _flag4(F, "Jflag4_10",
                      {("z", "x"): {"x": 1}, ("z", "y"): {"y": h},
                       ("z", "z"): {"1": -q, "x": q, "z": 1}},
                      {("z", "y"): {"y": -h}, ("z", "1"): {"1": -h, "x": -h, "y": a, "z": 1}})
    if which == 11:
        lam = p["lambda"]
        return _flag4(F, "Jflag4_11",
                      {("z", "x"): {"x": 1}, ("z", "y"): {"y": h},
                       ("z", "z"): {"1": -q, "x": q, "z": 1}},
                      {("z", "y"): {"y": -h}, ("z", "1"): {"1": -h * lam, "x": -h * lam, "z": lam}})
    raise UnknownName(f"Jflag4_{which}")


# Section on factorizations: non-unital Poisson algebras.

def _heisenberg(F, p):
    return algebra(F, LH, {("H1", "H1"): {"H3": 1}}, {("H1", "H2"): {"H3": 1}}, unital=False,
                   name="H")


def _heisenberg_unital(F, p):
    return algebra(F, ("1",) + LH, {("H1", "H1"): {"H3": 1}}, {("H1", "H2"): {"H3": 1}},
                   name="H_unital")


def _h_a(F, p):
    a = p["a"]
    return algebra(F, LH, {("H1", "H1"): {"H3": 1}, ("H1", "H2"): {"H3": a}},
                   {("H1", "H2"): {"H3": a + 1}}, unital=False, name="H_a")


def _k0(F, p):
    return algebra(F, ("1",), name="k0")


def _k0_null(F, p):
    return algebra(F, ("X",), unital=False, name="k0_null")


_HBASE_M = {("H1", "H1"): {"H3": 1}}
_HBASE_B = {("H1", "H2"): {"H3": 1}}


def _hfam(F, name, mult, bracket):
    m = dict(_HBASE_M)
    m.update(mult)
    b = dict(_HBASE_B)
    b.update(bracket)
    return algebra(F, LXH, m, b, unital=False, name=name)


def _h1(F, p):
    return _hfam(F, "H1_bicrossed",
                 {("X", "H1"): {"H3": p["alpha"]}, ("X", "H2"): {"H3": p["beta"]}},
                 {("H1", "X"): {"H3": p["mu"]}, ("H2", "X"): {"H3": p["eta"]}})


def _h2(F, p):
    return _hfam(F, "H2_bicrossed", {},
                 {("H1", "X"): {"X": p["xi"], "H2": p["mu"], "H3": p["eta"]}})


def _h3(F, p):
    return _hfam(F, "H3_bicrossed", {},
                 {("H2", "X"): {"H3": p["eta"]}, ("H1", "X"): {"H2": p["mu"], "H3": p["tau"]}})


def _h4(F, p):
    return _hfam(F, "H4_bicrossed", {("X", "H1"): {"H3": p["alpha"]}},
                 {("H1", "X"): {"H2": p["mu"], "H3": p["tau"]}, ("H2", "X"): {"H3": p["eta"]}})


def _h5(F, p):
    return _hfam(F, "H5_bicrossed", {},
                 {("H1", "X"): {"H3": p["mu"]}, ("H2", "X"): {"X": p["xi"], "H3": p["eta"]}})


def _h6(F, p):
    xi, g, mu, eta = p["xi"], p["gamma"], p["mu"], p["eta"]
    return _hfam(F, "H6_bicrossed", {},
                 {("H1", "X"): {"X": xi, "H2": xi * F.inv(g) * eta, "H3": mu},
                  ("H2", "X"): {"X": g, "H2": eta, "H3": F.inv(xi) * (xi + 1) * eta}})


def _kcn(F, p):
    n = p["n"]
    t = p["t"]
    y = tuple(t if i == 1 % n else 0 for i in range(n))
    return group_algebra_cyclic(n, y, F)


def _defmap1_pair(F, p):
    from .factorization import MatchedPair
    P = _k0_null(F, {})
    H = _heisenberg(F, {})
    one_h3 = (0, 0, 1)
    z = (0, 0, 0)
    act = Tensor(F, (3, 1, 3), ((one_h3,), (one_h3,), (z,)))
    return MatchedPair(P, H, act, Tensor.zeros(F, (3, 1, 1)), act, Tensor.zeros(F, (3, 1, 1)))


def group_algebra_cyclic(n: int, y, F: Field, strict: bool = True) -> JacobiAlgebra:
    """k[C_n] on c^0..c^(n-1) with ``[c^i, c^j] = (j - i) c^(i+j-1) y``, exponents mod n.

    The bracket is only well defined when ``n y = 0``: shifting an exponent by
    n changes ``j - i`` by n. So a nonzero ``y`` needs ``char F`` to divide n,
    and then the result is a Jacobi algebra. ``strict=False`` skips the guard
    and returns the literal tables, which are not Jacobi in general.
    """
    if n < 2:
        raise ParamOutOfDomain("n must be at least 2")
    y = F.vec(y)
    if len(y) != n:
        raise DimensionMismatch(f"y must have {n} coordinates")
    if strict and any(y) and (F.char == 0 or n % F.char != 0):
        raise CharConditionViolated(f"n y = 0 fails: char {F.char} does not divide {n}")
    labels = tuple("1" if i == 0 else ("c" if i == 1 else f"c^{i}") for i in range(n))

    def shift(v, s):
        return tuple(v[(k - s) % n] for k in range(n))

    mult = Tensor.from_function(F, (n, n, n), lambda i, j: linalg.unit_vector(n, (i + j) % n))
    brk = Tensor.from_function(F, (n, n, n),
                               lambda i, j: F.vec((j - i) * c for c in shift(y, (i + j - 1) % n)))
    return JacobiAlgebra(F, labels, mult, brk, linalg.unit_vector(n, 0), "kCn")


# -- registry -------------------------------------------------------------

def _entries() -> list[CatalogEntry]:
    E = CatalogEntry
    out = [
        E("J2_1", (), "jacobi", "x^2=0, abelian (Poisson)", lambda F, p: _dim2(F, p, "J2_1")),
        E("J2_2", (), "jacobi", "x^2=0, [1,x]=1", lambda F, p: _dim2(F, p, "J2_2")),
        E("J2_3", (), "jacobi", "x^2=x, abelian (Poisson)", lambda F, p: _dim2(F, p, "J2_3")),
        E("J2_4", (), "jacobi", "x^2=0, [x,1]=x", lambda F, p: _dim2(F, p, "J2_4")),
        E("J2_d", (("d", "nonsquare"),), "jacobi", "x^2=d (d a non-square), abelian", _j2d, ("-1",)),
    ]
    for i in range(1, 12):
        nm = f"J3_{i}"
        if i == 8:
            out.append(E(nm, (("u", "k*"),), "jacobi", "[x,1]=x, [y,1]=u y", _j3_8, ("2",)))
        elif i == 10:
            out.append(E(nm, (), "jacobi", "x^2=y, [x,1]=x/2, [y,1]=y", _j3_10))
        else:
            out.append(E(nm, (), "jacobi", "three-dimensional Jacobi algebra",
                         (lambda w: lambda F, p: _table10(F, p, w))(nm)))
    out += [
        E("Jflag3_1", (("lambda1", "k"), ("lambda2", "k*"), ("u", "k")), "jacobi",
          "flag extension of J2_1, lambda2 != 0", _jflag3_1, ("1", "1", "2")),
        E("Jflag3_2", (("lambda1", "k*"), ("u", "k"), ("f", "k")), "jacobi",
          "flag extension of J2_1, lambda2 = 0 != lambda1", _jflag3_2, ("1", "2", "1")),
        E("Jflag3_3", (("delta", "k*"),), "jacobi", "flag extension of J2_1, abelian",
          _jflag3_3, ("2",)),
        E("Jflag3_4", (("u", "k*"),), "jacobi", "flag extension of J2_1, y^2=u y", _jflag3_4, ("2",)),
        E("Jflag3_5", (("u", "k"), ("f", "k"), ("d1", "k"), ("d2", "k")), "jacobi",
          "flag extension of J2_1 with nilpotent bracket", _jflag3_5, ("2", "0", "-1", "-1")),
    ]
    f4params = {1: (), 2: (("gamma", "k"),), 3: (("alpha", "k"), ("u", "k"), ("v", "k")),
                4: (("alpha", "k"), ("b", "k")), 5: (("alpha", "k"), ("u", "k")),
                6: (("lambda", "k*-{1}"),), 7: (("a", "k"),), 8: (("b", "k"),), 9: (("a", "k"),),
                10: (("a", "k"),), 11: (("lambda", "k*-{1}"),)}
    f4ex = {1: (), 2: ("1",), 3: ("1", "1", "1"), 4: ("1", "1"), 5: ("1", "2"), 6: ("-1",),
            7: ("1",), 8: ("1",), 9: ("1",), 10: ("1",), 11: ("-1",)}
    for i in range(1, 12):
        out.append(E(f"Jflag4_{i}", f4params[i], "jacobi", "flag extension of J3_11",
                     (lambda w: lambda F, p: _jflag4(F, p, w))(i), f4ex[i]))
    out += [
        E("k0", (), "poisson", "the base field, zero bracket (unital)", _k0),
        E("k0_null", (), "poisson", "one-dimensional, X^2=0, non-unital", _k0_null),
        E("H", (), "poisson", "Heisenberg Poisson algebra H1^2=H3, [H1,H2]=H3 (non-unital)",
          _heisenberg),
        E("H_unital", (), "poisson", "H with a unit adjoined", _heisenberg_unital),
        E("H_a", (("a", "k-{-1,-1/2,0}"),), "poisson", "H1^2=H3, H1H2=aH3, [H1,H2]=(a+1)H3",
          _h_a, ("1",)),
        E("H1_bicrossed", (("beta", "k*"), ("alpha", "k"), ("mu", "k"), ("eta", "k")), "poisson",
          "four-dimensional factorization through k0_null and H", _h1, ("1", "1", "1", "1")),
        E("H2_bicrossed", (("xi", "k"), ("mu", "k"), ("eta", "k")), "poisson",
          "four-dimensional factorization through k0_null and H", _h2, ("1", "1", "1")),
        E("H3_bicrossed", (("eta", "k*"), ("mu", "k"), ("tau", "k")), "poisson",
          "four-dimensional factorization through k0_null and H", _h3, ("1", "1", "1")),
        E("H4_bicrossed", (("alpha", "k*"), ("mu", "k"), ("tau", "k"), ("eta", "k")), "poisson",
          "four-dimensional factorization through k0_null and H", _h4, ("1", "1", "1", "1")),
        E("H5_bicrossed", (("xi", "k*"), ("mu", "k"), ("eta", "k")), "poisson",
          "four-dimensional factorization through k0_null and H", _h5, ("1", "1", "1")),
        E("H6_bicrossed", (("xi", "k*"), ("gamma", "k*"), ("mu", "k"), ("eta", "k")), "poisson",
          "four-dimensional factorization through k0_null and H", _h6, ("1", "1", "1", "1")),
        E("kCn", (("n", "int>=2"), ("t", "k")), "jacobi",
          "group algebra of C_n with y = t c (t != 0 needs char | n)", _kcn, ("3", "0")),
        E("defmap1_pair", (), "matched_pair",
          "k0_null and H with H1<X = H2<X = H3 for both actions", _defmap1_pair),
    ]
    return out


_ENTRIES = _entries()
_BY_NAME = {e.name: e for e in _ENTRIES}


def list_entries() -> list[CatalogEntry]:
    return list(_ENTRIES)


def entry(name: str) -> CatalogEntry:
    try:
        return _BY_NAME[name]
    except KeyError:
        raise UnknownName(f"no catalog entry named {name!r}") from None


def build(name: str, params: Mapping | None = None, field: Field = Q):
    e = entry(name)
    p = _coerce_params(field, e, params or {})
    return e.builder(field, p)


def example_params(name: str, field: Field = Q) -> dict:
    """The entry's sample parameters, adjusted per field when a sample leaves its domain.

    A sample such as ``d = -1`` for a non-square is valid over Q but not over
    GF(5); the first admissible value among small integers replaces it.
    """
    e = entry(name)
    out = {}
    for (pname, domain), raw in zip(e.params, e.example):
        if domain == "int>=2":
            out[pname] = raw
            continue
        candidates = [field(raw)] + [field.norm(v) for v in (2, 3, -1, -2, 5, 6, 7, 1, 0)]
        for val in candidates:
            try:
                _check_domain(field, pname, domain, val)
            except ParamOutOfDomain:
                continue
            out[pname] = val
            break
        else:
            raise ParamOutOfDomain(f"no sample value for {pname} over {field}")
    return out


def build_example(name: str, field: Field = Q):
    return build(name, example_params(name, field), field)


def nonsquares_equivalent(F: Field, d, d2) -> bool:
    """Whether ``d = q^2 d2`` for some nonzero q, i.e. J2_d and J2_d2 coincide."""
    d, d2 = F.norm(d), F.norm(d2)
    if d == 0 or d2 == 0:
        return d == d2
    return F.is_square(F.norm(d * F.inv(d2)))
