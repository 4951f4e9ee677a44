"""Matched pairs of Poisson algebras, bicrossed products and deformation maps.

Algebras here need not be unital. A matched pair of ``P`` and ``Q`` carries
four actions with the same shapes as in an extending datum of ``P`` through
``Q``: ``x ◁ a`` and ``x ↼ a`` land in ``Q``, ``x ▷ a`` and ``x ⇀ a`` in ``P``.
A deformation map ``r: Q → P`` is a ``dim P × dim Q`` matrix.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from . import linalg
from .algebra import AxiomReport, Checker, JacobiAlgebra, Violation, check_poisson
from .errors import (BudgetExceeded, DimensionMismatch, FieldNotFinite, NotADeformationMap,
                     NotDirectSum, NotPoisson, NotSubalgebra, SingularSigma)
from .extensions import (ExtendingDatum, _check_algebra_system, _check_compat, _check_lie_system,
                         _Ops, _budget, unified_product)
from .tensor import Tensor

# Names of the extending-system identities as they read for a matched pair.
_AXIOM_NAMES = {
    "A1 right module": "right module",
    "A3": "commutative matched pair (xy)◁a",
    "A4": "commutative matched pair x▷(ab)",
    "A5": "left module (xy)▷a",
    "L1 right Lie module": "right Lie module",
    "L2": "Lie matched pair x⇀[a,b]",
    "L3": "Lie matched pair {x,y}↼a",
    "L4": "left Lie module {x,y}⇀a",
    "P1": "mp2p", "P2": "mp3p", "P3": "mp4p", "P4": "mp5p",
    "P5": "mp6p", "P6": "mp7p", "P7": "mp8p", "P8": "mp9p",
}


@dataclass(frozen=True)
class MatchedPair:
    P: JacobiAlgebra
    Q: JacobiAlgebra
    act_r: Tensor       # x ◁ a : Q×P→Q
    act_out: Tensor     # x ▷ a : Q×P→P
    lie_r: Tensor       # x ↼ a : Q×P→Q
    lie_out: Tensor     # x ⇀ a : Q×P→P

    def __post_init__(self):
        n, m = self.P.dim, self.Q.dim
        for name, want in (("act_r", (m, n, m)), ("act_out", (m, n, n)),
                           ("lie_r", (m, n, m)), ("lie_out", (m, n, n))):
            if getattr(self, name).dims != want:
                raise DimensionMismatch(f"{name} has shape {getattr(self, name).dims}, expected {want}")

    def as_extending_datum(self) -> ExtendingDatum:
        F = self.P.field
        n, m = self.P.dim, self.Q.dim
        # The base is viewed without a unit: matched pairs never use one.
        P = JacobiAlgebra(F, self.P.labels, self.P.mult, self.P.bracket, None, self.P.name)
        return ExtendingDatum(P, m, self.act_r, self.act_out, Tensor.zeros(F, (m, m, n)), self.Q.mult,
                              self.lie_r, self.lie_out, Tensor.zeros(F, (m, m, n)), self.Q.bracket)

    @classmethod
    def zero(cls, P: JacobiAlgebra, Q: JacobiAlgebra) -> "MatchedPair":
        F = P.field
        n, m = P.dim, Q.dim
        return cls(P, Q, Tensor.zeros(F, (m, n, m)), Tensor.zeros(F, (m, n, n)),
                   Tensor.zeros(F, (m, n, m)), Tensor.zeros(F, (m, n, n)))


def _require_poisson(A: JacobiAlgebra, which: str):
    rep = check_poisson(A)
    if not rep.passed:
        raise NotPoisson(f"{which} is not a Poisson algebra ({', '.join(rep.failed_axioms())})")


def check_matched_pair(mp: MatchedPair) -> AxiomReport:
    """Module, Lie-module and compatibility identities on all basis tuples."""
    _require_poisson(mp.P, "P")
    _require_poisson(mp.Q, "Q")
    o = _Ops(mp.as_extending_datum())
    c = Checker()
    _check_algebra_system(o, c)
    _check_lie_system(o, c)
    _check_compat(o, c, poisson=True)
    rep = c.report()
    return AxiomReport(tuple(Violation(_AXIOM_NAMES.get(v.axiom, v.axiom), v.witness, v.lhs, v.rhs)
                             for v in rep.violations))


def bicrossed_product(mp: MatchedPair) -> JacobiAlgebra:
    """``P × Q`` with the products of the matched pair; P's basis comes first."""
    R = unified_product(mp.as_extending_datum(), labels=tuple(mp.P.labels) + tuple(mp.Q.labels))
    name = f"{mp.P.name}⋈{mp.Q.name}" if mp.P.name and mp.Q.name else ""
    return JacobiAlgebra(R.field, R.labels, R.mult, R.bracket, None, name)


def _subalgebra(R: JacobiAlgebra, idx: list[int], which: str) -> JacobiAlgebra:
    F = R.field
    inside = set(idx)
    k = len(idx)

    def restrict(v):
        if any(x for g, x in enumerate(v) if g not in inside):
            raise NotSubalgebra(which)
        return tuple(v[g] for g in idx)

    mult = Tensor.from_function(F, (k, k, k), lambda i, j: restrict(R.mult.coeffs[idx[i]][idx[j]]))
    brk = Tensor.from_function(F, (k, k, k), lambda i, j: restrict(R.bracket.coeffs[idx[i]][idx[j]]))
    return JacobiAlgebra(F, tuple(R.labels[g] for g in idx), mult, brk, None, "")


def extract_matched_pair(R: JacobiAlgebra, p_basis, q_basis) -> MatchedPair:
    """Canonical matched pair of a factorization ``R = span(p_basis) ⊕ span(q_basis)``."""
    p_basis, q_basis = list(p_basis), list(q_basis)
    n = R.dim
    if sorted(p_basis + q_basis) != list(range(n)):
        raise NotDirectSum("the two index sets must partition the basis")
    P = _subalgebra(R, p_basis, "P")
    Q = _subalgebra(R, q_basis, "Q")
    F = R.field
    np_, nq = len(p_basis), len(q_basis)

    def glob(idx, local):
        return linalg.unit_vector(n, idx[local])

    def proj(v, idx):
        return tuple(v[g] for g in idx)

    def table(op, target):
        idx = q_basis if target == "q" else p_basis
        return Tensor.from_function(F, (nq, np_, len(idx)),
                                    lambda x, a: proj(op(glob(q_basis, x), glob(p_basis, a)), idx))

    return MatchedPair(P, Q, table(R.mul, "q"), table(R.mul, "p"), table(R.br, "q"), table(R.br, "p"))


# -- deformation maps -------------------------------------------------------

def _check_r_shape(mp: MatchedPair, r):
    n, m = mp.P.dim, mp.Q.dim
    if len(r) != n or any(len(row) != m for row in r):
        raise DimensionMismatch(f"r must be a {n}×{m} matrix")


def _deformation_residuals(mp: MatchedPair, r, pairs=None, partial=None):
    """Yield ``(name, (i, j), lhs, rhs)`` for the two defining identities.

    With ``partial`` (number of known columns of ``r``), pairs whose
    evaluation needs an unknown column are skipped.
    """
    P, Q = mp.P, mp.Q
    F = P.field
    m = Q.dim
    known = m if partial is None else partial

    def R(v):
        if any(x for k, x in enumerate(v) if x and k >= known):
            raise LookupError
        return linalg.matvec(F, r, v)

    qb = Q.basis()
    if pairs is None:
        pairs = [(i, j) for i in range(m) for j in range(i, m)]
    for i, j in pairs:
        p, q = qb[i], qb[j]
        try:
            rp, rq = R(p), R(q)
            lhs = linalg.sub(F, P.mul(rp, rq), R(Q.mul(p, q)))
            inner = linalg.add(F, mp.act_r(q, rp), mp.act_r(p, rq))
            rhs = F.vec(a - b - c for a, b, c in zip(R(inner), mp.act_out(q, rp), mp.act_out(p, rq)))
            yield "ana1", (i, j), lhs, rhs
            lhs = linalg.sub(F, R(Q.br(p, q)), P.br(rp, rq))
            inner = linalg.sub(F, mp.lie_r(q, rp), mp.lie_r(p, rq))
            rhs = F.vec(a + b - c for a, b, c in zip(R(inner), mp.lie_out(p, rq), mp.lie_out(q, rp)))
            yield "ana2", (i, j), lhs, rhs
        except LookupError:
            continue


def deformation_report(mp: MatchedPair, r) -> AxiomReport:
    _check_r_shape(mp, r)
    r = tuple(mp.P.field.vec(row) for row in r)
    c = Checker()
    for name, w, lhs, rhs in _deformation_residuals(mp, r):
        c.eq(name, w, lhs, rhs)
    return c.report()


def check_deformation_map(mp: MatchedPair, r) -> bool:
    return deformation_report(mp, r).passed


def deform(mp: MatchedPair, r) -> JacobiAlgebra:
    """``Q_r``: ``q·t + t◁r(q) + q◁r(t)`` and ``[q,t] + q↼r(t) - t↼r(q)`` on Q's basis."""
    rep = deformation_report(mp, r)
    if not rep.passed:
        raise NotADeformationMap(f"r fails {', '.join(rep.failed_axioms())}")
    Q = mp.Q
    F = Q.field
    m = Q.dim
    qb = Q.basis()
    R = lambda v: linalg.matvec(F, r, v)

    def prod(i, j):
        q, t = qb[i], qb[j]
        return F.vec(a + b + c for a, b, c in zip(Q.mul(q, t), mp.act_r(t, R(q)), mp.act_r(q, R(t))))

    def brk(i, j):
        q, t = qb[i], qb[j]
        return F.vec(a + b - c for a, b, c in zip(Q.br(q, t), mp.lie_r(q, R(t)), mp.lie_r(t, R(q))))

    return JacobiAlgebra(F, Q.labels, Tensor.from_function(F, (m, m, m), prod),
                         Tensor.from_function(F, (m, m, m), brk), None,
                         f"{Q.name}_r" if Q.name else "")


def complement_embedding(mp: MatchedPair, r) -> tuple:
    """Columns ``(r(q), q)`` spanning the complement ``Q_r`` inside the bicrossed product."""
    F = mp.P.field
    m = mp.Q.dim
    return tuple(tuple(linalg.column(r, j)) + linalg.unit_vector(m, j) for j in range(m))


def _split_r_columns(F, n, m, cols):
    return tuple(tuple(cols[j][i] for j in range(m)) for i in range(n))


def _dfs_maps(mp: MatchedPair, prefix: list, budget: list):
    F = mp.P.field
    n, m = mp.P.dim, mp.Q.dim
    vectors = [F.vec(v) for v in linalg.all_vectors(F, n)]
    out = []

    def rec(cols):
        k = len(cols)
        if k == m:
            out.append(_split_r_columns(F, n, m, cols))
            return
        for v in vectors:
            budget[0] -= 1
            if budget[0] < 0:
                raise BudgetExceeded("deformation-map search exceeded its budget")
            trial = cols + [v]
            padded = _split_r_columns(F, n, m, trial + [(0,) * n] * (m - k - 1))
            pairs = [(i, k) for i in range(k + 1)]
            if all(lhs == rhs for _, _, lhs, rhs in _deformation_residuals(mp, padded, pairs, k + 1)):
                # Pairs skipped earlier may now be decidable.
                rest = [(i, j) for j in range(k) for i in range(j + 1)]
                if all(lhs == rhs for _, _, lhs, rhs in _deformation_residuals(mp, padded, rest, k + 1)):
                    rec(trial)

    rec(list(prefix))
    return out


def _dfs_task(args):
    mp, first, budget = args
    return _dfs_maps(mp, [first], [budget])


def enumerate_deformation_maps(mp: MatchedPair, jobs: int = 1, budget: int | None = None) -> list:
    """Every deformation map over a prime field, ordered by their column-major coefficients."""
    F = mp.P.field
    if not F.is_finite:
        raise FieldNotFinite("deformation maps can only be enumerated over a finite field")
    n, m = mp.P.dim, mp.Q.dim
    if n * m > 12:
        raise BudgetExceeded(f"dim P · dim Q = {n * m} exceeds 12")
    budget = _budget() if budget is None else budget
    if m == 0:
        return [tuple(() for _ in range(n))]
    if jobs and jobs > 1:
        from concurrent.futures import ProcessPoolExecutor
        firsts = [F.vec(v) for v in linalg.all_vectors(F, n)]
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            chunks = list(ex.map(_dfs_task, [(mp, f, budget) for f in firsts]))
        maps = [r for ch in chunks for r in ch]
    else:
        maps = _dfs_maps(mp, [], [budget])
    key = lambda r: tuple(r[i][j] for j in range(m) for i in range(n))
    return sorted(maps, key=key)


def deformation_equivalent(mp: MatchedPair, r, r2, sigma) -> bool:
    """Whether ``sigma`` (an automorphism of Q's space) witnesses ``r ~ r2``."""
    _check_r_shape(mp, r)
    _check_r_shape(mp, r2)
    Q = mp.Q
    F = Q.field
    m = Q.dim
    if len(sigma) != m or any(len(row) != m for row in sigma):
        raise DimensionMismatch(f"sigma must be {m}×{m}")
    if not linalg.is_invertible(F, sigma):
        raise SingularSigma("sigma is not invertible")
    S = lambda v: linalg.matvec(F, sigma, v)
    R = lambda v: linalg.matvec(F, r, v)
    R2 = lambda v: linalg.matvec(F, r2, v)
    qb = Q.basis()
    for q in qb:
        for t in qb:
            sq, st = S(q), S(t)
            lhs = linalg.sub(F, S(Q.mul(q, t)), Q.mul(sq, st))
            rhs = F.vec(a + b - c - d for a, b, c, d in
                        zip(mp.act_r(sq, R2(st)), mp.act_r(st, R2(sq)),
                            S(mp.act_r(q, R(t))), S(mp.act_r(t, R(q)))))
            if lhs != rhs:
                return False
            lhs = linalg.sub(F, S(Q.br(q, t)), Q.br(sq, st))
            rhs = F.vec(a - b + c - d for a, b, c, d in
                        zip(mp.lie_r(sq, R2(st)), mp.lie_r(st, R2(sq)),
                            S(mp.lie_r(t, R(q))), S(mp.lie_r(q, R(t)))))
            if lhs != rhs:
                return False
    return True


@dataclass(frozen=True)
class ComplementClassReport:
    field: object
    deformation_maps: int
    classes: tuple        # ((representative r, orbit size), ...)
    witnesses: tuple = ()  # per class, σ: Q_rep → Q_r for each member

    @property
    def factorization_index(self) -> int:
        return len(self.classes)


def _gl_size(p: int, m: int) -> int:
    size = 1
    for i in range(m):
        size *= p ** m - p ** i
    return size


def _transported_key(Q_r: JacobiAlgebra, sigma, sigma_inv) -> tuple:
    """Structure constants of ``Q_r`` pulled back along ``sigma``."""
    F = Q_r.field
    m = Q_r.dim
    cols = [linalg.column(sigma, j) for j in range(m)]
    out = []
    for t in (Q_r.mult, Q_r.bracket):
        for i in range(m):
            for j in range(m):
                out.extend(linalg.matvec(F, sigma_inv, t(cols[i], cols[j])))
    return tuple(out)


def complement_classes(mp: MatchedPair, jobs: int = 1, budget: int | None = None) -> ComplementClassReport:
    """Classes of deformation maps under ``~``, found by exhaustive search over GL(Q).

    Each map's deformation is reduced to the smallest pulled-back structure
    tensor over all σ; maps with equal reductions are equivalent, and the σ
    relating each member to its representative is checked against the
    defining identities before being reported.
    """
    F = mp.P.field
    m = mp.Q.dim
    budget = _budget() if budget is None else budget
    if not F.is_finite:
        raise FieldNotFinite("complement classification needs a finite field")
    if _gl_size(F.p, m) > min(budget, 200_000):
        raise BudgetExceeded(f"|GL({m}, {F.p})| = {_gl_size(F.p, m)} is over budget")
    maps = enumerate_deformation_maps(mp, jobs=jobs, budget=budget)
    group = [(g, linalg.inverse(F, g)) for g in linalg.general_linear_group(F, m)]
    canon = {}
    for r in maps:
        Qr = deform(mp, r)
        best = None
        for g, ginv in group:
            k = _transported_key(Qr, g, ginv)
            if best is None or k < best[0]:
                best = (k, g)
        canon[r] = best
    buckets: dict = {}
    for r in maps:
        buckets.setdefault(canon[r][0], []).append(r)
    classes, witness_lists = [], []
    for key in sorted(buckets, key=lambda k: buckets[k][0]):
        members = buckets[key]
        rep = members[0]
        g_rep = canon[rep][1]
        witnesses = []
        for r in members:
            # σ: Q_rep → Q_r is g_r ∘ g_rep^-1 when both reduce to the same tensor.
            sigma = linalg.matmul(F, canon[r][1], linalg.inverse(F, g_rep))
            if not deformation_equivalent(mp, rep, r, sigma):
                raise AssertionError("canonical-form grouping produced an invalid witness")
            witnesses.append(sigma)
        classes.append((rep, len(members)))
        witness_lists.append(tuple(zip(members, witnesses)))
    return ComplementClassReport(F, len(maps), tuple(classes), tuple(witness_lists))
