"""Unified products, extending data, and codimension-one (flag) extensions.

An extending datum of a Jacobi algebra ``A`` through a space ``V`` is eight
bilinear maps. Tensor shapes use ``n = dim A`` and ``m = dim V``::

    act_r   x ◁ a : V×A→V  (m, n, m)     lie_r   x ↼ a : V×A→V  (m, n, m)
    act_out x ▷ a : V×A→A  (m, n, n)     lie_out x ⇀ a : V×A→A  (m, n, n)
    cocycle_f     : V×V→A  (m, m, n)     cocycle_theta : V×V→A  (m, m, n)
    dot     x · y : V×V→V  (m, m, m)     vbracket {x,y}: V×V→V  (m, m, m)

A flag datum ``(Λ, Δ, f0, u, λ, D)`` is the special case ``m = 1``. The
flag algebra on ``A ⊕ kE`` puts ``E`` last, after the basis of ``A``.
"""

from __future__ import annotations

import itertools
import os
from collections import defaultdict
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field as dc_field

from . import linalg
from .algebra import AxiomReport, Checker, JacobiAlgebra, is_poisson
from .errors import (BudgetExceeded, DimensionMismatch, FieldNotFinite, InvalidFlagDatum,
                     NotARetraction, NotASubalgebra, NotPoisson)
from .field import Field
from .tensor import Tensor

DEFAULT_BUDGET = 2_000_000


def _budget(default: int = DEFAULT_BUDGET) -> int:
    raw = os.environ.get("JACOBI_BUDGET")
    if raw:
        try:
            return int(raw)
        except ValueError:
            pass
    return default


# -- extending data ---------------------------------------------------------

_SHAPES = {
    "act_r": ("m", "n", "m"), "act_out": ("m", "n", "n"),
    "cocycle_f": ("m", "m", "n"), "dot": ("m", "m", "m"),
    "lie_r": ("m", "n", "m"), "lie_out": ("m", "n", "n"),
    "cocycle_theta": ("m", "m", "n"), "vbracket": ("m", "m", "m"),
}


@dataclass(frozen=True)
class ExtendingDatum:
    base: JacobiAlgebra
    vdim: int
    act_r: Tensor
    act_out: Tensor
    cocycle_f: Tensor
    dot: Tensor
    lie_r: Tensor
    lie_out: Tensor
    cocycle_theta: Tensor
    vbracket: Tensor

    def __post_init__(self):
        sizes = {"n": self.base.dim, "m": self.vdim}
        for name, shape in _SHAPES.items():
            t = getattr(self, name)
            want = tuple(sizes[s] for s in shape)
            if t.dims != want:
                raise DimensionMismatch(f"{name} has shape {t.dims}, expected {want}")

    @classmethod
    def zero(cls, A: JacobiAlgebra, m: int) -> "ExtendingDatum":
        n = A.dim
        sizes = {"n": n, "m": m}
        return cls(A, m, **{k: Tensor.zeros(A.field, tuple(sizes[s] for s in v))
                            for k, v in _SHAPES.items()})

    def replace(self, **tensors) -> "ExtendingDatum":
        kw = {k: getattr(self, k) for k in _SHAPES}
        kw.update(tensors)
        return ExtendingDatum(self.base, self.vdim, **kw)

    def tensors(self) -> dict:
        return {k: getattr(self, k) for k in _SHAPES}


class _Ops:
    """Evaluation helpers for an extending datum on coordinate vectors."""

    def __init__(self, om: ExtendingDatum):
        A = om.base
        self.A = A
        self.F = A.field
        self.n = A.dim
        self.m = om.vdim
        self.om = om
        self.one = A.unit

    def sa(self, *terms):
        """Signed sum of A-vectors: terms are vectors or (coefficient, vector)."""
        return _signed_sum(self.F, self.n, terms)

    def sv(self, *terms):
        return _signed_sum(self.F, self.m, terms)

    def mul(self, a, b):
        return self.A.mul(a, b)

    def br(self, a, b):
        return self.A.br(a, b)

    def ra(self, x, a):
        return self.om.act_r(x, a)

    def ro(self, x, a):
        return self.om.act_out(x, a)

    def f(self, x, y):
        return self.om.cocycle_f(x, y)

    def dot(self, x, y):
        return self.om.dot(x, y)

    def lr(self, x, a):
        return self.om.lie_r(x, a)

    def lo(self, x, a):
        return self.om.lie_out(x, a)

    def th(self, x, y):
        return self.om.cocycle_theta(x, y)

    def vb(self, x, y):
        return self.om.vbracket(x, y)


def _signed_sum(F: Field, n: int, terms) -> tuple:
    out = [0] * n
    for t in terms:
        if isinstance(t, tuple) and len(t) == 2 and isinstance(t[1], tuple):
            c, v = t
        else:
            c, v = 1, t
        if c:
            for k, x in enumerate(v):
                if x:
                    out[k] += c * x
    return F.vec(out)


def _neg(v):
    return (-1, v)


def _check_algebra_system(o: _Ops, c: Checker):
    """(A1)-(A6): commutative unital algebra extending system."""
    n, m = o.n, o.m
    A_basis = [linalg.unit_vector(n, i) for i in range(n)]
    V_basis = [linalg.unit_vector(m, i) for i in range(m)]
    for i, x in enumerate(V_basis):
        for j, y in enumerate(V_basis):
            if j > i:
                c.eq("A1 f symmetric", (i, j), o.f(x, y), o.f(y, x))
                c.eq("A1 dot symmetric", (i, j), o.dot(x, y), o.dot(y, x))
    for i, x in enumerate(V_basis):
        if o.one is not None:
            c.eq("A1 unit acts trivially", (i,), o.ra(x, o.one), x)
            c.eq("A1 x▷1 = 0", (i,), o.ro(x, o.one), (0,) * n)
        for j, a in enumerate(A_basis):
            for k, b in enumerate(A_basis):
                c.eq("A1 right module", (i, j, k), o.ra(o.ra(x, a), b), o.ra(x, o.mul(a, b)))
                c.eq("A4", (i, j, k), o.ro(x, o.mul(a, b)),
                     o.sa(o.mul(a, o.ro(x, b)), o.ro(o.ra(x, b), a)))
    for i, x in enumerate(V_basis):
        for j, y in enumerate(V_basis):
            xy = o.dot(x, y)
            for k, a in enumerate(A_basis):
                c.eq("A3", (i, j, k), o.ra(xy, a), o.sv(o.ra(x, o.ro(y, a)), o.dot(x, o.ra(y, a))))
                c.eq("A5", (i, j, k), o.ro(xy, a),
                     o.sa(o.ro(x, o.ro(y, a)), o.f(x, o.ra(y, a)), _neg(o.mul(o.f(x, y), a))))
            for k, z in enumerate(V_basis):
                c.eq("A2", (i, j, k), o.sv(o.dot(x, o.dot(y, z)), _neg(o.dot(xy, z))),
                     o.sv(o.ra(z, o.f(x, y)), _neg(o.ra(x, o.f(y, z)))))
                c.eq("A6", (i, j, k), o.sa(o.f(x, o.dot(y, z)), _neg(o.f(xy, z))),
                     o.sa(o.ro(z, o.f(x, y)), _neg(o.ro(x, o.f(y, z)))))


def _check_lie_system(o: _Ops, c: Checker):
    """(L1)-(L6): Lie extending system."""
    n, m = o.n, o.m
    A_basis = [linalg.unit_vector(n, i) for i in range(n)]
    V_basis = [linalg.unit_vector(m, i) for i in range(m)]
    for i, x in enumerate(V_basis):
        c.eq("L1 theta alternating", (i,), o.th(x, x), (0,) * n)
        c.eq("L1 bracket alternating", (i,), o.vb(x, x), (0,) * m)
        for j, y in enumerate(V_basis):
            if j > i:
                c.eq("L1 theta antisymmetric", (i, j), o.th(x, y), o.sa(_neg(o.th(y, x))))
                c.eq("L1 bracket antisymmetric", (i, j), o.vb(x, y), o.sv(_neg(o.vb(y, x))))
        for j, a in enumerate(A_basis):
            for k, b in enumerate(A_basis):
                ab = o.br(a, b)
                c.eq("L1 right Lie module", (i, j, k), o.lr(x, ab),
                     o.sv(o.lr(o.lr(x, a), b), _neg(o.lr(o.lr(x, b), a))))
                c.eq("L2", (i, j, k), o.lo(x, ab),
                     o.sa(o.br(o.lo(x, a), b), o.br(a, o.lo(x, b)),
                          o.lo(o.lr(x, a), b), _neg(o.lo(o.lr(x, b), a))))
    for i, x in enumerate(V_basis):
        for j, y in enumerate(V_basis):
            xy = o.vb(x, y)
            for k, a in enumerate(A_basis):
                c.eq("L3", (i, j, k), o.lr(xy, a),
                     o.sv(o.vb(x, o.lr(y, a)), o.vb(o.lr(x, a), y),
                          o.lr(x, o.lo(y, a)), _neg(o.lr(y, o.lo(x, a)))))
                c.eq("L4", (i, j, k), o.lo(xy, a),
                     o.sa(o.lo(x, o.lo(y, a)), _neg(o.lo(y, o.lo(x, a))), o.br(a, o.th(x, y)),
                          o.th(x, o.lr(y, a)), o.th(o.lr(x, a), y)))
    for i, x in enumerate(V_basis):
        for j, y in enumerate(V_basis):
            for k, z in enumerate(V_basis):
                cyc = [(x, y, z), (y, z, x), (z, x, y)]
                c.eq("L5", (i, j, k),
                     o.sa(*[o.th(p, o.vb(q, r)) for p, q, r in cyc],
                          *[o.lo(p, o.th(q, r)) for p, q, r in cyc]), (0,) * n)
                c.eq("L6", (i, j, k),
                     o.sv(*[o.vb(p, o.vb(q, r)) for p, q, r in cyc],
                          *[o.lr(p, o.th(q, r)) for p, q, r in cyc]), (0,) * m)


def _check_compat(o: _Ops, c: Checker, poisson: bool):
    """(J1)-(J10), or (P1)-(P10) when ``poisson`` drops every unit-bracket term."""
    n, m = o.n, o.m
    tag = "P" if poisson else "J"
    A_basis = [linalg.unit_vector(n, i) for i in range(n)]
    V_basis = [linalg.unit_vector(m, i) for i in range(m)]
    one = (0,) * n if poisson else o.A.one
    k = 0 if poisson else 1  # multiplier on the correction terms

    for i, x in enumerate(V_basis):
        x_lo1 = o.lo(x, one)
        x_lr1 = o.lr(x, one)
        for j, a in enumerate(A_basis):
            for l, b in enumerate(A_basis):
                ab = o.mul(a, b)
                w = (i, j, l)
                c.eq(f"{tag}1", w, o.lo(x, ab),
                     o.sa(o.mul(o.lo(x, a), b), o.ro(o.lr(x, a), b), o.mul(a, o.lo(x, b)),
                          o.ro(o.lr(x, b), a), (-k, o.mul(ab, x_lo1)), (-k, o.ro(x_lr1, ab))))
                c.eq(f"{tag}2", w, o.lr(x, ab),
                     o.sv(o.ra(o.lr(x, a), b), o.ra(o.lr(x, b), a), (-k, o.ra(x_lr1, ab))))
                one_b = o.br(one, b)
                c.eq(f"{tag}3", w, o.ro(x, o.br(a, b)),
                     o.sa(o.br(o.ro(x, a), b), o.lo(o.ra(x, a), b), _neg(o.mul(a, o.lo(x, b))),
                          _neg(o.ro(o.lr(x, b), a)), (k, o.mul(o.ro(x, a), one_b)),
                          (k, o.ro(o.ra(x, a), one_b))))
                c.eq(f"{tag}4", w, o.ra(x, o.br(a, b)),
                     o.sv(o.lr(o.ra(x, a), b), _neg(o.ra(o.lr(x, b), a)),
                          (k, o.ra(o.ra(x, a), one_b))))

    for i, x in enumerate(V_basis):
        for j, y in enumerate(V_basis):
            xy_b = o.vb(x, y)
            xy = o.dot(x, y)
            y_lo1, y_lr1 = o.lo(y, one), o.lr(y, one)
            for l, a in enumerate(A_basis):
                w = (i, j, l)
                xa_o, xa_r = o.ro(x, a), o.ra(x, a)
                c.eq(f"{tag}5", w, o.ro(xy_b, a),
                     o.sa(o.th(xa_r, y), _neg(o.mul(a, o.th(x, y))), o.f(o.lr(y, a), x),
                          (-k, o.f(xa_r, y_lr1)), _neg(o.lo(y, xa_o)), o.ro(x, o.lo(y, a)),
                          (-k, o.mul(xa_o, y_lo1)), (-k, o.ro(xa_r, y_lo1)),
                          (-k, o.ro(y_lr1, xa_o))))
                c.eq(f"{tag}6", w, o.ra(xy_b, a),
                     o.sv(o.vb(xa_r, y), _neg(o.lr(y, xa_o)), o.ra(x, o.lo(y, a)),
                          o.dot(o.lr(y, a), x), (-k, o.ra(xa_r, y_lo1)),
                          (-k, o.ra(y_lr1, xa_o)), (-k, o.dot(xa_r, y_lr1))))
                one_a = o.br(one, a)
                fxy = o.f(x, y)
                c.eq(f"{tag}7", w, o.lo(xy, a),
                     o.sa(o.ro(x, o.lo(y, a)), o.ro(y, o.lo(x, a)), o.f(o.lr(x, a), y),
                          o.f(x, o.lr(y, a)), _neg(o.br(fxy, a)), (-k, o.mul(fxy, one_a)),
                          (-k, o.ro(xy, one_a))))
                c.eq(f"{tag}8", w, o.lr(xy, a),
                     o.sv(o.dot(x, o.lr(y, a)), o.dot(o.lr(x, a), y), o.ra(x, o.lo(y, a)),
                          o.ra(y, o.lo(x, a)), (-k, o.ra(xy, one_a))))
            for l, z in enumerate(V_basis):
                w = (i, j, l)
                fxy = o.f(x, y)
                z_lo1, z_lr1 = o.lo(z, one), o.lr(z, one)
                c.eq(f"{tag}9", w, o.th(xy, z),
                     o.sa(o.ro(x, o.th(y, z)), o.ro(y, o.th(x, z)), o.lo(z, fxy),
                          o.f(o.vb(x, z), y), o.f(x, o.vb(y, z)), (k, o.mul(fxy, z_lo1)),
                          (k, o.ro(xy, z_lo1)), (k, o.ro(z_lr1, fxy)), (k, o.f(xy, z_lr1))))
                c.eq(f"{tag}10", w, o.vb(xy, z),
                     o.sv(o.dot(x, o.vb(y, z)), o.dot(o.vb(x, z), y), o.lr(z, fxy),
                          o.ra(x, o.th(y, z)), o.ra(y, o.th(x, z)), (k, o.ra(xy, z_lo1)),
                          (k, o.ra(z_lr1, fxy)), (k, o.dot(xy, z_lr1))))


def check_extending_system(om: ExtendingDatum) -> AxiomReport:
    """Evaluate (A1)-(A6), (L1)-(L6) and (J1)-(J10) on every basis tuple."""
    o = _Ops(om)
    c = Checker()
    _check_algebra_system(o, c)
    _check_lie_system(o, c)
    _check_compat(o, c, poisson=False)
    return c.report()


def check_poisson_extending(om: ExtendingDatum) -> AxiomReport:
    """(P0)-(P10) for an extending datum of a unital Poisson algebra."""
    if not is_poisson(om.base):
        raise NotPoisson("base algebra is not Poisson")
    o = _Ops(om)
    c = Checker()
    _check_algebra_system(o, c)
    _check_lie_system(o, c)
    _check_compat(o, c, poisson=True)
    return c.report()


def unified_product(om: ExtendingDatum, labels=None) -> JacobiAlgebra:
    """``A × V`` with the unified multiplication and bracket; basis of A first."""
    A = om.base
    F = A.field
    n, m = A.dim, om.vdim
    N = n + m

    def split(idx):
        return ("a", idx) if idx < n else ("x", idx - n)

    def pack(a, x):
        return tuple(a) + tuple(x)

    ea = [linalg.unit_vector(n, i) for i in range(n)]
    ev = [linalg.unit_vector(m, i) for i in range(m)]
    za, zv = (0,) * n, (0,) * m

    def prod(i, j):
        (si, pi), (sj, pj) = split(i), split(j)
        if si == "a" and sj == "a":
            return pack(A.mul(ea[pi], ea[pj]), zv)
        if si == "x" and sj == "a":
            x, a = ev[pi], ea[pj]
            return pack(om.act_out(x, a), om.act_r(x, a))
        if si == "a" and sj == "x":
            x, a = ev[pj], ea[pi]
            return pack(om.act_out(x, a), om.act_r(x, a))
        x, y = ev[pi], ev[pj]
        return pack(om.cocycle_f(x, y), om.dot(x, y))

    def brk(i, j):
        (si, pi), (sj, pj) = split(i), split(j)
        if si == "a" and sj == "a":
            return pack(A.br(ea[pi], ea[pj]), zv)
        if si == "x" and sj == "a":
            x, a = ev[pi], ea[pj]
            return pack(om.lie_out(x, a), om.lie_r(x, a))
        if si == "a" and sj == "x":
            x, a = ev[pj], ea[pi]
            return pack(F.vec(-t for t in om.lie_out(x, a)), F.vec(-t for t in om.lie_r(x, a)))
        x, y = ev[pi], ev[pj]
        return pack(om.cocycle_theta(x, y), om.vbracket(x, y))

    if labels is None:
        extra = [f"v{i + 1}" for i in range(m)] if m > 1 else ["E"]
        labels = tuple(A.labels) + tuple(extra)
    return JacobiAlgebra(F, tuple(labels), Tensor.from_function(F, (N, N, N), prod),
                         Tensor.from_function(F, (N, N, N), brk),
                         pack(A.unit, zv) if A.unit is not None else None,
                         f"{A.name}⋉V" if A.name else "")


def extract_extending_structure(E: JacobiAlgebra, embed, proj) -> ExtendingDatum:
    """Recover the datum of ``E ⊇ A`` from an embedding ``A → E`` and a retraction ``E → A``.

    ``embed`` is an N×n matrix, ``proj`` an n×N matrix (column convention).
    V is the kernel of ``proj``, taken with its echelon basis.
    """
    F = E.field
    N = E.dim
    n = len(embed[0]) if embed else 0
    if len(embed) != N or len(proj) != n or any(len(r) != N for r in proj):
        raise DimensionMismatch("embed must be N×n and proj n×N")
    if linalg.matmul(F, proj, embed) != linalg.identity(n):
        raise NotARetraction("proj ∘ embed is not the identity")
    cols = [linalg.column(embed, j) for j in range(n)]
    # The base algebra transported through the embedding.
    span = linalg.canonical_basis(F, cols, N)
    if len(span) != n:
        raise NotASubalgebra("embedding is not injective")

    def to_a(v):
        return linalg.matvec(F, proj, v)

    from .algebra import Subspace
    sub = Subspace(F, N, cols)
    for u in cols:
        for w in cols:
            if not sub.contains(E.mul(u, w)) or not sub.contains(E.br(u, w)):
                raise NotASubalgebra("image of the embedding is not closed")
    if E.unit is not None and not sub.contains(E.unit):
        raise NotASubalgebra("image of the embedding misses the unit")
    mult = Tensor.from_function(F, (n, n, n), lambda i, j: to_a(E.mul(cols[i], cols[j])))
    brk = Tensor.from_function(F, (n, n, n), lambda i, j: to_a(E.br(cols[i], cols[j])))
    unit = to_a(E.unit) if E.unit is not None else None
    A = JacobiAlgebra(F, tuple(f"a{i + 1}" for i in range(n)), mult, brk, unit, "")
    vbasis = linalg.kernel(F, proj, N)
    m = len(vbasis)
    # Coordinates in V: solve against the basis of ker(proj).
    vmat = linalg.from_columns(vbasis, N) if vbasis else tuple(() for _ in range(N))

    def to_v(w):
        resid = linalg.sub(F, w, linalg.matvec(F, embed, to_a(w)))
        sol = linalg.solve_linear(F, vmat, resid)
        return sol[0]

    def t_va(op, out):
        return Tensor.from_function(F, (m, n, m if out == "v" else n),
                                    lambda i, j: (to_v if out == "v" else to_a)(op(vbasis[i], cols[j])))

    def t_vv(op, out):
        return Tensor.from_function(F, (m, m, m if out == "v" else n),
                                    lambda i, j: (to_v if out == "v" else to_a)(op(vbasis[i], vbasis[j])))

    return ExtendingDatum(A, m,
                          act_r=t_va(E.mul, "v"), act_out=t_va(E.mul, "a"),
                          cocycle_f=t_vv(E.mul, "a"), dot=t_vv(E.mul, "v"),
                          lie_r=t_va(E.br, "v"), lie_out=t_va(E.br, "a"),
                          cocycle_theta=t_vv(E.br, "a"), vbracket=t_vv(E.br, "v"))


def cohomologous(om: ExtendingDatum, om2: ExtendingDatum, r) -> bool:
    """Whether ``r: V → A`` (n×m matrix) implements ``om ≈ om2``."""
    if om.base != om2.base or om.vdim != om2.vdim:
        raise DimensionMismatch("extending data over different bases or spaces")
    A = om.base
    F = A.field
    n, m = A.dim, om.vdim
    if len(r) != n or any(len(row) != m for row in r):
        raise DimensionMismatch(f"r must be {n}×{m}")
    if om.act_r != om2.act_r or om.lie_r != om2.lie_r:
        return False
    o, o2 = _Ops(om), _Ops(om2)

    def R(v):
        return linalg.matvec(F, r, v)

    ea = [linalg.unit_vector(n, i) for i in range(n)]
    ev = [linalg.unit_vector(m, i) for i in range(m)]
    for x in ev:
        for a in ea:
            if o2.ro(x, a) != o.sa(o.ro(x, a), R(o.ra(x, a)), _neg(A.mul(R(x), a))):
                return False
            if o2.lo(x, a) != o.sa(o.lo(x, a), R(o.lr(x, a)), _neg(A.br(R(x), a))):
                return False
        for y in ev:
            rx, ry = R(x), R(y)
            if o2.dot(x, y) != o.sv(o.dot(x, y), _neg(o.ra(x, ry)), _neg(o.ra(y, rx))):
                return False
            want_f = o.sa(o.f(x, y), R(o.dot(x, y)), A.mul(rx, ry), _neg(o.ro(x, ry)),
                          _neg(R(o.ra(x, ry))), _neg(o.ro(y, rx)), _neg(R(o.ra(y, rx))))
            if o2.f(x, y) != want_f:
                return False
            if o2.vb(x, y) != o.sv(o.vb(x, y), _neg(o.lr(x, ry)), o.lr(y, rx)):
                return False
            want_t = o.sa(o.th(x, y), R(o.vb(x, y)), A.br(rx, ry), o.lo(y, rx), _neg(o.lo(x, ry)),
                          R(o.lr(y, rx)), _neg(R(o.lr(x, ry))))
            if o2.th(x, y) != want_t:
                return False
    return True


# -- flag data -------------------------------------------------------------

@dataclass(frozen=True)
class FlagDatum:
    """``(Λ, Δ, f0, u, λ, D)``; ``Delta`` and ``D`` are n×n matrices."""

    Lam: tuple
    Delta: tuple
    f0: tuple
    u: object
    lam: tuple
    D: tuple

    def key(self) -> tuple:
        """Concatenated coefficients in the order used for canonical representatives."""
        return (tuple(self.Lam) + tuple(self.lam) + (self.u,) + tuple(self.f0)
                + tuple(x for r in self.Delta for x in r) + tuple(x for r in self.D for x in r))

    def to_extending_datum(self, A: JacobiAlgebra) -> ExtendingDatum:
        F = A.field
        n = A.dim
        _check_shape(A, self)
        cols_delta = [linalg.column(self.Delta, j) for j in range(n)]
        cols_d = [linalg.column(self.D, j) for j in range(n)]
        return ExtendingDatum(
            A, 1,
            act_r=Tensor(F, (1, n, 1), (tuple((self.Lam[j],) for j in range(n)),)),
            act_out=Tensor(F, (1, n, n), (tuple(cols_delta),)),
            cocycle_f=Tensor(F, (1, 1, n), ((F.vec(self.f0),),)),
            dot=Tensor(F, (1, 1, 1), (((F.norm(self.u),),),)),
            lie_r=Tensor(F, (1, n, 1), (tuple((self.lam[j],) for j in range(n)),)),
            lie_out=Tensor(F, (1, n, n), (tuple(cols_d),)),
            cocycle_theta=Tensor.zeros(F, (1, 1, n)),
            vbracket=Tensor.zeros(F, (1, 1, 1)))

    @classmethod
    def from_extending_datum(cls, om: ExtendingDatum) -> "FlagDatum":
        if om.vdim != 1:
            raise DimensionMismatch("a flag datum needs a one-dimensional V")
        n = om.base.dim
        x = (1,)
        ea = [linalg.unit_vector(n, i) for i in range(n)]
        return cls(
            Lam=tuple(om.act_r(x, a)[0] for a in ea),
            Delta=linalg.from_columns([om.act_out(x, a) for a in ea]),
            f0=om.cocycle_f(x, x),
            u=om.dot(x, x)[0],
            lam=tuple(om.lie_r(x, a)[0] for a in ea),
            D=linalg.from_columns([om.lie_out(x, a) for a in ea]))


def _check_shape(A: JacobiAlgebra, fd: FlagDatum):
    n = A.dim
    ok = (len(fd.Lam) == n and len(fd.lam) == n and len(fd.f0) == n
          and len(fd.Delta) == n and all(len(r) == n for r in fd.Delta)
          and len(fd.D) == n and all(len(r) == n for r in fd.D))
    if not ok:
        raise DimensionMismatch(f"flag datum does not match an algebra of dimension {n}")


class _Flag:
    """Evaluation helpers for a flag datum over ``A``."""

    def __init__(self, A: JacobiAlgebra, fd: FlagDatum):
        self.A = A
        F = self.F = A.field
        self.n = A.dim
        self.one = A.one
        self.Lam = F.vec(fd.Lam)
        self.lam = F.vec(fd.lam)
        self.Dl = fd.Delta
        self.Dm = fd.D
        self.f0 = F.vec(fd.f0)
        self.u = F.norm(fd.u)

    def L(self, a):
        return linalg.dot(self.F, self.Lam, a)

    def l(self, a):
        return linalg.dot(self.F, self.lam, a)

    def Delta(self, a):
        return linalg.matvec(self.F, self.Dl, a)

    def D(self, a):
        return linalg.matvec(self.F, self.Dm, a)

    def s(self, *terms):
        return _signed_sum(self.F, self.n, terms)


def _flag_algebra_part(g: _Flag, c: Checker, basis):
    """(FA1)-(FA3)."""
    A, F = g.A, g.F
    c.eq("FA1 Λ(1) = 1", (), g.L(g.one), 1)
    for i, a in enumerate(basis):
        c.eq("FA1 Λ∘Δ = 0", (i,), g.L(g.Delta(a)), 0)
        for j, b in enumerate(basis):
            ab = A.mul(a, b)
            c.eq("FA1 Λ multiplicative", (i, j), g.L(ab), F.norm(g.L(a) * g.L(b)))
            c.eq("FA2", (i, j), g.Delta(ab), g.s(A.mul(a, g.Delta(b)), (g.L(b), g.Delta(a))))
        c.eq("FA3", (i,), g.Delta(g.Delta(a)),
             g.s((g.u, g.Delta(a)), A.mul(g.f0, a), (-g.L(a), g.f0)))


def _flag_lie_part(g: _Flag, c: Checker, basis):
    """(FL1)-(FL2)."""
    A = g.A
    for i, a in enumerate(basis):
        for j, b in enumerate(basis):
            if j <= i:
                continue
            ab = A.br(a, b)
            c.eq("FL1", (i, j), g.l(ab), 0)
            c.eq("FL2", (i, j), g.D(ab),
                 g.s(A.br(g.D(a), b), A.br(a, g.D(b)), (g.l(a), g.D(b)), (-g.l(b), g.D(a))))


def check_flag_datum(A: JacobiAlgebra, fd: FlagDatum) -> AxiomReport:
    """(JF0)-(JF10) on all basis pairs; (JF0) is split into (FA1)-(FA3), (FL1)-(FL2)."""
    _check_shape(A, fd)
    g = _Flag(A, fd)
    F = g.F
    basis = A.basis()
    one = g.one
    c = Checker()
    _flag_algebra_part(g, c, basis)
    _flag_lie_part(g, c, basis)
    D1 = g.D(one)
    l1 = g.l(one)
    u, f0 = g.u, g.f0
    for i, a in enumerate(basis):
        for j, b in enumerate(basis):
            ab = A.mul(a, b)
            w = (i, j)
            c.eq("JF1", w, g.D(ab),
                 g.s(A.mul(g.D(a), b), A.mul(a, g.D(b)), (g.l(a), g.Delta(b)), (g.l(b), g.Delta(a)),
                     (-l1, g.Delta(ab)), (-1, A.mul(ab, D1))))
            c.eq("JF2", w, g.l(ab), F.norm(g.l(a) * g.L(b) + g.l(b) * g.L(a) - l1 * g.L(ab)))
            one_b = A.br(one, b)
            c.eq("JF3", w, g.Delta(A.br(a, b)),
                 g.s(A.br(g.Delta(a), b), (g.L(a), g.D(b)), (-1, A.mul(a, g.D(b))),
                     (-g.l(b), g.Delta(a)), A.mul(g.Delta(a), one_b), (g.L(a), g.Delta(one_b))))
            c.eq("JF4", w, g.L(A.br(a, b)), F.norm(g.L(a) * g.L(one_b)))
    for i, a in enumerate(basis):
        w = (i,)
        Da = g.D(a)
        one_a = A.br(one, a)
        c.eq("JF5", w, g.s(g.Delta(Da), (-1, g.D(g.Delta(a)))),
             g.s(A.mul(g.Delta(a), D1), (F.norm(g.L(a) * l1), f0), (-g.l(a), f0),
                 (g.L(a), g.Delta(D1)), (l1, g.Delta(g.Delta(a)))))
        c.eq("JF6", w, F.norm(g.L(Da) - g.l(g.Delta(a))),
             F.norm(g.L(a) * g.L(D1) + l1 * g.L(a) * u - g.l(a) * u))
        c.eq("JF7", w, g.s((2, g.Delta(Da)), (2 * g.l(a), f0)),
             g.s((u, Da), A.br(f0, a), A.mul(f0, one_a), (u, g.Delta(one_a))))
        c.eq("JF8", w, F.norm(2 * g.L(Da)), F.norm(-g.l(a) * u + u * g.L(one_a)))
    c.eq("JF9", (), g.s(g.D(f0), A.mul(f0, D1), (u, g.Delta(D1)), (l1, g.Delta(f0)), (u * l1, f0)),
         (0,) * g.n)
    c.eq("JF10", (), F.norm(g.l(f0) + u * g.L(D1) + l1 * g.L(f0) + u * u * l1), 0)
    return c.report()


def check_poisson_flag_datum(A: JacobiAlgebra, fd: FlagDatum) -> AxiomReport:
    """(PF0)-(PF6) for a flag datum of a Poisson algebra."""
    if not is_poisson(A):
        raise NotPoisson("base algebra is not Poisson")
    _check_shape(A, fd)
    g = _Flag(A, fd)
    F = g.F
    basis = A.basis()
    c = Checker()
    _flag_algebra_part(g, c, basis)
    _flag_lie_part(g, c, basis)
    u, f0 = g.u, g.f0
    for i, a in enumerate(basis):
        for j, b in enumerate(basis):
            ab = A.mul(a, b)
            w = (i, j)
            c.eq("PF1", w, g.D(ab),
                 g.s(A.mul(g.D(a), b), A.mul(a, g.D(b)), (g.l(a), g.Delta(b)), (g.l(b), g.Delta(a))))
            c.eq("PF2", w, g.l(ab), F.norm(g.l(a) * g.L(b) + g.l(b) * g.L(a)))
            c.eq("PF3", w, g.Delta(A.br(a, b)),
                 g.s(A.br(g.Delta(a), b), (g.L(a), g.D(b)), (-1, A.mul(a, g.D(b))),
                     (-g.l(b), g.Delta(a))))
            c.eq("PF4 Λ([a,b]) = 0", w, g.L(A.br(a, b)), 0)
    c.eq("PF4 D(f0) = 0", (), g.D(f0), (0,) * g.n)
    c.eq("PF4 λ(f0) = 0", (), g.l(f0), 0)
    for i, a in enumerate(basis):
        w = (i,)
        Da = g.D(a)
        c.eq("PF5", w, g.s(g.D(g.Delta(a)), (-1, g.Delta(Da))), g.s((g.l(a), f0)))
        c.eq("PF5 scalar", w, F.norm(g.l(g.Delta(a)) - g.L(Da)), F.norm(g.l(a) * u))
        c.eq("PF6", w, g.s((2, g.Delta(Da)), (2 * g.l(a), f0)), g.s((u, Da), A.br(f0, a)))
        c.eq("PF6 scalar", w, F.norm(2 * g.L(Da)), F.norm(-g.l(a) * u))
    return c.report()


def flag_algebra(A: JacobiAlgebra, fd: FlagDatum, label: str = "E", check: bool = True) -> JacobiAlgebra:
    """``A ⊕ kE`` with ``E e_i = Δ(e_i) + Λ(e_i)E``, ``E² = f0 + uE``, ``[E, e_i] = D(e_i) + λ(e_i)E``."""
    if check:
        rep = check_flag_datum(A, fd)
        if not rep.passed:
            raise InvalidFlagDatum(f"flag datum fails {', '.join(rep.failed_axioms())}")
    F = A.field
    n = A.dim
    N = n + 1
    g = _Flag(A, fd)
    basis = A.basis()

    def prod(i, j):
        if i < n and j < n:
            return tuple(A.mult.coeffs[i][j]) + (0,)
        if i == n and j == n:
            return tuple(g.f0) + (g.u,)
        k = j if i == n else i
        return tuple(g.Delta(basis[k])) + (g.L(basis[k]),)

    def brk(i, j):
        if i < n and j < n:
            return tuple(A.bracket.coeffs[i][j]) + (0,)
        if i == n and j == n:
            return (0,) * N
        if i == n:
            return tuple(g.D(basis[j])) + (g.l(basis[j]),)
        return F.vec(tuple(-t for t in g.D(basis[i])) + (-g.l(basis[i]),))

    name = f"{A.name}_flag" if A.name else ""
    return JacobiAlgebra(F, tuple(A.labels) + (label,), Tensor.from_function(F, (N, N, N), prod),
                         Tensor.from_function(F, (N, N, N), brk), tuple(A.one) + (0,), name)


def transport_flag_datum(A: JacobiAlgebra, fd: FlagDatum, alpha, keep_u: bool = True) -> FlagDatum:
    """Image of ``fd`` under the change of basis ``E ↦ E - α``.

    With ``keep_u`` the unit coefficient is held fixed, which is the relation
    used for classification reports; otherwise ``u`` becomes ``u - 2Λ(α)``,
    which is what the basis change actually produces.
    """
    g = _Flag(A, fd)
    F = g.F
    n = g.n
    alpha = F.vec(alpha)
    basis = A.basis()
    La = g.L(alpha)
    new_delta = [g.s(g.Delta(a), (g.L(a), alpha), (-1, A.mul(a, alpha))) for a in basis]
    new_d = [g.s(g.D(a), (g.l(a), alpha), (-1, A.br(alpha, a))) for a in basis]
    f0 = g.s(g.f0, A.mul(alpha, alpha), (g.u, alpha), (-2 * La, alpha), (-2, g.Delta(alpha)))
    u = g.u if keep_u else F.norm(g.u - 2 * La)
    return FlagDatum(g.Lam, linalg.from_columns(new_delta), f0, u, g.lam, linalg.from_columns(new_d))


def flag_equivalent(A: JacobiAlgebra, fd: FlagDatum, fd2: FlagDatum):
    """Witness ``α`` with ``fd2 = T_α(fd)`` under the fixed-``u`` relation, or ``None``.

    The Δ and D equations are linear in α and are solved exactly; the f0
    equation is then tested on the affine solution set (enumerated over a
    finite field, tested on the particular solution plus small kernel
    combinations over Q).
    """
    _check_shape(A, fd)
    _check_shape(A, fd2)
    F = A.field
    if (F.vec(fd.Lam) != F.vec(fd2.Lam) or F.vec(fd.lam) != F.vec(fd2.lam)
            or F.norm(fd.u) != F.norm(fd2.u)):
        return None
    n = A.dim
    g, g2 = _Flag(A, fd), _Flag(A, fd2)
    basis = A.basis()
    rows, rhs = [], []
    for a in basis:
        # Δ'(a) - Δ(a) = Λ(a)α - aα ; D'(a) - D(a) = λ(a)α - [α, a] = λ(a)α + [a, α]
        ma = A.mult_matrix(a)
        ba = A.bracket_matrix(a)
        for r in range(n):
            rows.append(tuple(F.norm((g.L(a) if r == c else 0) - ma[r][c]) for c in range(n)))
            rhs.append(F.norm(g2.Delta(a)[r] - g.Delta(a)[r]))
            rows.append(tuple(F.norm((g.l(a) if r == c else 0) + ba[r][c]) for c in range(n)))
            rhs.append(F.norm(g2.D(a)[r] - g.D(a)[r]))
    sol = linalg.solve_linear(F, rows, rhs)
    if sol is None:
        return None
    part, ker = sol
    for alpha in _coset(F, part, ker):
        if transport_flag_datum(A, fd, alpha).f0 == F.vec(fd2.f0):
            return alpha
    return None


def _coset(F: Field, part, ker, bound: int = 2):
    n = len(part)
    if F.is_finite:
        for v in linalg.span_elements(F, ker, n):
            yield linalg.add(F, part, v)
    else:
        rng = range(-bound, bound + 1)
        for coeffs in itertools.product(rng, repeat=len(ker)):
            yield linalg.add(F, part, linalg.lincomb(F, zip(coeffs, ker), n))


# -- enumeration -----------------------------------------------------------

def _affine_solve(F: Field, nvars: int, residual):
    """Solve ``residual(v) = 0`` for an affine map given by a black-box function."""
    r0 = residual((0,) * nvars)
    cols = []
    for k in range(nvars):
        rk = residual(linalg.unit_vector(nvars, k))
        cols.append(F.vec(a - b for a, b in zip(rk, r0)))
    if not r0:
        return (0,) * nvars, [linalg.unit_vector(nvars, k) for k in range(nvars)]
    M = linalg.from_columns(cols) if cols else tuple(() for _ in r0)
    return linalg.solve_linear(F, M, F.vec(-x for x in r0))


def _residuals(A: JacobiAlgebra, fd: FlagDatum, which: str) -> tuple:
    """Concatenated ``lhs - rhs`` of a fixed, ordered subset of flag axioms."""
    g = _Flag(A, fd)
    F = g.F
    basis = A.basis()
    one = g.one
    out: list = []

    def put(lhs, rhs):
        if not isinstance(lhs, tuple):
            lhs, rhs = (lhs,), (rhs,)
        out.extend(F.norm(a - b) for a, b in zip(lhs, rhs))

    D1 = g.D(one)
    l1 = g.l(one)
    u = g.u
    if which == "linear":
        for a in basis:
            put(g.L(g.Delta(a)), 0)
            Da = g.D(a)
            one_a = A.br(one, a)
            put(F.norm(g.L(Da) - g.l(g.Delta(a))), F.norm(g.L(a) * g.L(D1) + l1 * g.L(a) * u - g.l(a) * u))
            put(F.norm(2 * g.L(Da)), F.norm(-g.l(a) * u + u * g.L(one_a)))
        for i, a in enumerate(basis):
            for j, b in enumerate(basis):
                ab = A.mul(a, b)
                put(g.Delta(ab), g.s(A.mul(a, g.Delta(b)), (g.L(b), g.Delta(a))))
                if j > i:
                    br = A.br(a, b)
                    put(g.D(br), g.s(A.br(g.D(a), b), A.br(a, g.D(b)), (g.l(a), g.D(b)),
                                     (-g.l(b), g.D(a))))
                put(g.D(ab), g.s(A.mul(g.D(a), b), A.mul(a, g.D(b)), (g.l(a), g.Delta(b)),
                                 (g.l(b), g.Delta(a)), (-l1, g.Delta(ab)), (-1, A.mul(ab, D1))))
                one_b = A.br(one, b)
                put(g.Delta(A.br(a, b)),
                    g.s(A.br(g.Delta(a), b), (g.L(a), g.D(b)), (-1, A.mul(a, g.D(b))),
                        (-g.l(b), g.Delta(a)), A.mul(g.Delta(a), one_b), (g.L(a), g.Delta(one_b))))
    elif which == "f0":
        f0 = g.f0
        for a in basis:
            Da = g.D(a)
            one_a = A.br(one, a)
            put(g.Delta(g.Delta(a)), g.s((u, g.Delta(a)), A.mul(f0, a), (-g.L(a), f0)))
            put(g.s(g.Delta(Da), (-1, g.D(g.Delta(a)))),
                g.s(A.mul(g.Delta(a), D1), (F.norm(g.L(a) * l1), f0), (-g.l(a), f0),
                    (g.L(a), g.Delta(D1)), (l1, g.Delta(g.Delta(a)))))
            put(g.s((2, g.Delta(Da)), (2 * g.l(a), f0)),
                g.s((u, Da), A.br(f0, a), A.mul(f0, one_a), (u, g.Delta(one_a))))
        put(g.s(g.D(f0), A.mul(f0, D1), (u, g.Delta(D1)), (l1, g.Delta(f0)), (u * l1, f0)), (0,) * g.n)
        put(F.norm(g.l(f0) + u * g.L(D1) + l1 * g.L(f0) + u * u * l1), 0)
    return tuple(out)


def algebra_maps(A: JacobiAlgebra):
    """Unital multiplicative functionals ``Λ`` satisfying ``Λ([a,b]) = Λ(a)Λ([1,b])``."""
    F = A.field
    n = A.dim
    basis = A.basis()
    one = A.one
    out = []
    for v in linalg.all_vectors(F, n):
        v = F.vec(v)
        L = lambda a: linalg.dot(F, v, a)
        if L(one) != 1:
            continue
        if all(L(A.mul(a, b)) == F.norm(L(a) * L(b)) and L(A.br(a, b)) == F.norm(L(a) * L(A.br(one, b)))
               for a in basis for b in basis):
            out.append(v)
    return out


def twisted_characters(A: JacobiAlgebra, Lam):
    """Functionals ``λ`` vanishing on brackets and satisfying the twisted Leibniz rule for ``Λ``."""
    F = A.field
    n = A.dim
    basis = A.basis()
    one = A.one
    L = lambda a: linalg.dot(F, Lam, a)
    out = []
    for v in linalg.all_vectors(F, n):
        v = F.vec(v)
        l = lambda a: linalg.dot(F, v, a)
        l1 = l(one)
        if all(l(A.br(a, b)) == 0 and
               l(A.mul(a, b)) == F.norm(l(a) * L(b) + l(b) * L(a) - l1 * L(A.mul(a, b)))
               for a in basis for b in basis):
            out.append(v)
    return out


def _unpack_dd(n, vec):
    Delta = tuple(tuple(vec[i * n + j] for j in range(n)) for i in range(n))
    D = tuple(tuple(vec[n * n + i * n + j] for j in range(n)) for i in range(n))
    return Delta, D


def _enumerate_scalar_block(args):
    """All valid datums for one ``(Λ, λ, u)`` triple."""
    A, Lam, lam, u, budget = args
    F = A.field
    n = A.dim
    nv = 2 * n * n

    def res_lin(vec):
        Delta, D = _unpack_dd(n, vec)
        return _residuals(A, FlagDatum(Lam, Delta, (0,) * n, u, lam, D), "linear")

    sol = _affine_solve(F, nv, res_lin)
    if sol is None:
        return []
    part, ker = sol
    if F.p ** len(ker) > budget:
        raise BudgetExceeded(f"(Δ, D) solution space has {F.p}^{len(ker)} points")
    found = []
    for vec in linalg.span_elements(F, ker, nv):
        vec = linalg.add(F, part, vec)
        Delta, D = _unpack_dd(n, vec)

        def res_f0(f0):
            return _residuals(A, FlagDatum(Lam, Delta, f0, u, lam, D), "f0")

        s2 = _affine_solve(F, n, res_f0)
        if s2 is None:
            continue
        p2, k2 = s2
        for f0 in linalg.span_elements(F, k2, n):
            f0 = linalg.add(F, p2, f0)
            fd = FlagDatum(Lam, Delta, f0, u, lam, D)
            if check_flag_datum(A, fd).passed:
                found.append(fd)
    return found


def enumerate_flag_datums(A: JacobiAlgebra, jobs: int = 1, budget: int | None = None) -> list[FlagDatum]:
    """Every Jacobi flag datum of ``A`` over a prime field, sorted canonically.

    Search is staged: the scalars ``(Λ, λ, u)`` are enumerated first, then the
    axioms that are affine in ``(Δ, D)`` are solved exactly, then those
    affine in ``f0``; every survivor is re-checked against all axioms.
    """
    F = A.field
    if not F.is_finite:
        raise FieldNotFinite("flag enumeration needs a finite field")
    budget = _budget() if budget is None else budget
    n = A.dim
    if n > 4:
        raise BudgetExceeded(f"dimension {n} exceeds the enumeration limit of 4")
    A.one  # raises MissingUnit for non-unital input
    tasks = []
    for Lam in algebra_maps(A):
        for lam in twisted_characters(A, Lam):
            for u in range(F.p):
                tasks.append((A, Lam, lam, u, budget))
    if jobs and jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            chunks = list(ex.map(_enumerate_scalar_block, tasks))
    else:
        chunks = [_enumerate_scalar_block(t) for t in tasks]
    out = {fd.key(): fd for chunk in chunks for fd in chunk}
    return [out[k] for k in sorted(out)]


def enumerate_flag_datums_naive(A: JacobiAlgebra) -> list[FlagDatum]:
    """Independent brute force for small bases: build every candidate flag
    algebra and keep those that pass the Jacobi-algebra checks.

    The multiplicative part ``(Λ, Δ, f0, u)`` and the bracket part ``(λ, D)``
    are screened separately (associativity and the Jacobi identity only
    involve one of them), then every surviving pair is tested for the
    compatibility identity. No flag axiom is consulted.
    """
    from .algebra import check_commutative_associative_unital, check_jacobi_compat, check_lie
    F = A.field
    if not F.is_finite:
        raise FieldNotFinite("naive enumeration needs a finite field")
    n = A.dim
    if F.p ** (n * n + 2 * n + 1) > 10 ** 6:
        raise BudgetExceeded("naive enumeration is only offered for tiny bases")
    zero_m = tuple((0,) * n for _ in range(n))
    zero_v = (0,) * n
    mults = []
    for flat in itertools.product(range(F.p), repeat=n * n + 2 * n + 1):
        Lam = flat[:n]
        Delta = tuple(tuple(flat[n + i * n + j] for j in range(n)) for i in range(n))
        f0 = flat[n + n * n:2 * n + n * n]
        u = flat[-1]
        fd = FlagDatum(Lam, Delta, f0, u, zero_v, zero_m)
        if check_commutative_associative_unital(flag_algebra(A, fd, check=False)).passed:
            mults.append(fd)
    brackets = []
    for flat in itertools.product(range(F.p), repeat=n * n + n):
        lam = flat[:n]
        D = tuple(tuple(flat[n + i * n + j] for j in range(n)) for i in range(n))
        fd = FlagDatum((1,) + (0,) * (n - 1), zero_m, zero_v, 0, lam, D)
        if check_lie(flag_algebra(A, fd, check=False)).passed:
            brackets.append(fd)
    out = []
    for m in mults:
        for b in brackets:
            fd = FlagDatum(m.Lam, m.Delta, m.f0, m.u, b.lam, b.D)
            if check_jacobi_compat(flag_algebra(A, fd, check=False)).passed:
                out.append(fd)
    return sorted(out, key=FlagDatum.key)


@dataclass(frozen=True)
class FlagClassReport:
    field: Field
    total_datums: int
    classes: tuple                      # ((representative, orbit size), ...)
    grouping: dict = dc_field(default_factory=dict)   # (Λ, λ, u) -> class count

    @property
    def class_count(self) -> int:
        return len(self.classes)


def _components(A, datums, keep_u):
    F = A.field
    n = A.dim
    index = {fd.key(): i for i, fd in enumerate(datums)}
    parent = list(range(len(datums)))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    alphas = [F.vec(a) for a in linalg.all_vectors(F, n)]
    for i, fd in enumerate(datums):
        for alpha in alphas:
            t = transport_flag_datum(A, fd, alpha, keep_u=keep_u)
            j = index.get(t.key())
            if j is not None:
                ri, rj = find(i), find(j)
                if ri != rj:
                    parent[max(ri, rj)] = min(ri, rj)
    groups = defaultdict(list)
    for i in range(len(datums)):
        groups[find(i)].append(i)
    return groups


def classify_flag(A: JacobiAlgebra, jobs: int = 1, budget: int | None = None,
                  keep_u: bool = True) -> FlagClassReport:
    """Partition all flag datums of ``A`` into classes of the fixed-``u`` relation.

    Two datums are joined when one is the image of the other under the
    transport formulas for some ``α ∈ A``; classes are the connected
    components. ``keep_u=False`` uses the transport that also shifts ``u``
    (the relation induced by actual basis changes ``E ↦ E - α``).
    """
    datums = enumerate_flag_datums(A, jobs=jobs, budget=budget)
    groups = _components(A, datums, keep_u)
    classes = []
    grouping: dict = defaultdict(int)
    for members in groups.values():
        rep = min((datums[i] for i in members), key=FlagDatum.key)
        classes.append((rep, len(members)))
        grouping[(tuple(rep.Lam), tuple(rep.lam), rep.u)] += 1
    classes.sort(key=lambda c: c[0].key())
    return FlagClassReport(A.field, len(datums), tuple(classes), dict(sorted(grouping.items())))


def classify_flag_chain(A: JacobiAlgebra, depth: int, jobs: int = 1, budget: int | None = None) -> list:
    """Iterate ``classify_flag`` ``depth`` times, feeding representatives' flag algebras back in.

    Returns one list per level; each entry pairs the algebra classified at
    that level with its report.
    """
    levels = []
    current = [A]
    for _ in range(depth):
        level = []
        nxt = []
        for B in current:
            rep = classify_flag(B, jobs=jobs, budget=budget)
            level.append((B, rep))
            nxt.extend(flag_algebra(B, fd) for fd, _ in rep.classes)
        levels.append(level)
        current = nxt
    return levels
