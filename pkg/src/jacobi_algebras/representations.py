"""Jacobi modules and bimodules, duals, integrals and Frobenius pairs."""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from . import linalg
from .algebra import AxiomReport, Checker, JacobiAlgebra, inverse_element
from .errors import (BimoduleAxiomFailure, CompatFailure, DimensionMismatch, NotAlgebraMap,
                     NotAnIntegral, NotLieMap)
from .tensor import Tensor

# Coefficient range tried when looking for a nondegenerate integral over Q.
Q_SEARCH_BOUND = 2


@dataclass(frozen=True)
class JacobiModule:
    """Right actions ``x ◁ a`` (``act_mult``) and ``x ↼ a`` (``act_lie``) of ``base`` on ``k^vdim``."""

    base: JacobiAlgebra
    vdim: int
    act_mult: Tensor
    act_lie: Tensor

    def __post_init__(self):
        want = (self.vdim, self.base.dim, self.vdim)
        for t, what in ((self.act_mult, "act_mult"), (self.act_lie, "act_lie")):
            if t.dims != want:
                raise DimensionMismatch(f"{what} has shape {t.dims}, expected {want}")


def regular_module(A: JacobiAlgebra) -> JacobiModule:
    """``A`` acting on itself by multiplication and bracket."""
    return JacobiModule(A, A.dim, A.mult, A.bracket)


def _small_values(F):
    return list(F.elements()) if F.is_finite else [0, 1, -1, 2, -2]


def characters(A: JacobiAlgebra):
    """Functionals ``Λ`` giving a line module with zero bracket action, in canonical order.

    Over Q only coefficients in a small range are tried.
    """
    F = A.field
    for v in itertools.product(_small_values(F), repeat=A.dim):
        try:
            line_module(A, v, (0,) * A.dim)
        except (NotAlgebraMap, CompatFailure):
            continue
        yield F.vec(v)


def trivial_module(A: JacobiAlgebra, vdim: int, Lam=None) -> JacobiModule:
    """``x ◁ a = Λ(a) x`` and ``x ↼ a = 0`` for a character ``Λ``.

    When ``Λ`` is omitted the first admissible character is used.
    """
    F = A.field
    n = A.dim
    if Lam is None:
        Lam = next(characters(A), None)
        if Lam is None:
            raise NotAlgebraMap("the algebra has no character compatible with a zero bracket action")
    else:
        line_module(A, Lam, (0,) * n)
    Lam = F.vec(Lam)
    act = Tensor.from_function(F, (vdim, n, vdim),
                               lambda i, j: linalg.scale(F, Lam[j], linalg.unit_vector(vdim, i)))
    return JacobiModule(A, vdim, act, Tensor.zeros(F, (vdim, n, vdim)))


def _module_checks(M: JacobiModule, c: Checker, bimodule: bool):
    A = M.base
    F = A.field
    one = A.one
    m = M.vdim
    ra, rl = M.act_mult, M.act_lie
    basis = A.basis()
    for i in range(m):
        x = linalg.unit_vector(m, i)
        c.eq("unit acts trivially", (i,), ra(x, one), x)
        xl1 = rl(x, one)
        for j, a in enumerate(basis):
            for k, b in enumerate(basis):
                w = (i, j, k)
                ab = A.mul(a, b)
                c.eq("right module", w, ra(ra(x, a), b), ra(x, ab))
                brab = A.br(a, b)
                c.eq("right Lie module", w, rl(x, brab),
                     linalg.sub(F, rl(rl(x, a), b), rl(rl(x, b), a)))
                c.eq("Jmod1", w, rl(x, ab),
                     F.vec(p + q - r for p, q, r in zip(ra(rl(x, a), b), ra(rl(x, b), a), ra(xl1, ab))))
                c.eq("Jmod2", w, ra(x, brab),
                     F.vec(p - q + r for p, q, r in
                           zip(rl(ra(x, a), b), ra(rl(x, b), a), ra(ra(x, a), A.br(one, b)))))
                if bimodule:
                    c.eq("Jmod3", w, rl(x, ab),
                         F.vec(p + q - r for p, q, r in
                               zip(rl(ra(x, a), b), rl(ra(x, b), a), rl(ra(x, ab), one))))


def check_module(M: JacobiModule) -> AxiomReport:
    c = Checker()
    _module_checks(M, c, bimodule=False)
    return c.report()


def check_bimodule(M: JacobiModule) -> AxiomReport:
    c = Checker()
    _module_checks(M, c, bimodule=True)
    return c.report()


def dual_bimodule(M: JacobiModule) -> JacobiModule:
    """``(v ◂ a)(x) = v(x ◁ a)`` and ``(v ↶ a)(x) = -v(x ↼ a)`` on the dual basis."""
    rep = check_bimodule(M)
    if not rep.passed:
        raise BimoduleAxiomFailure(f"input fails {', '.join(rep.failed_axioms())}")
    A = M.base
    F = A.field
    m, n = M.vdim, A.dim
    # Coefficient of v_k* in v_i* ◂ e_j is v_i*(v_k ◁ e_j).
    mult = Tensor.from_function(F, (m, n, m),
                                lambda i, j: [M.act_mult.coeffs[k][j][i] for k in range(m)])
    lie = Tensor.from_function(F, (m, n, m),
                               lambda i, j: [-M.act_lie.coeffs[k][j][i] for k in range(m)])
    return JacobiModule(A, m, mult, lie)


def line_module(A: JacobiAlgebra, Lam, lam) -> JacobiModule:
    """The action of ``A`` on ``k`` given by ``x ◁ a = xΛ(a)``, ``x ↼ a = xλ(a)``."""
    F = A.field
    n = A.dim
    Lam, lam = F.vec(Lam), F.vec(lam)
    if len(Lam) != n or len(lam) != n:
        raise DimensionMismatch(f"functionals must have length {n}")
    basis = A.basis()
    one = A.one
    L = lambda a: linalg.dot(F, Lam, a)
    l = lambda a: linalg.dot(F, lam, a)
    if L(one) != 1 or any(L(A.mul(a, b)) != F.norm(L(a) * L(b)) for a in basis for b in basis):
        raise NotAlgebraMap("Λ is not a unital algebra map")
    if any(l(A.br(a, b)) for a in basis for b in basis):
        raise NotLieMap("λ does not vanish on brackets")
    l1 = l(one)
    for a in basis:
        for b in basis:
            if l(A.mul(a, b)) != F.norm(l(a) * L(b) + l(b) * L(a) - l1 * L(A.mul(a, b))):
                raise CompatFailure(1, "λ(ab) = λ(a)Λ(b) + λ(b)Λ(a) - λ(1)Λ(ab) fails")
    for a in basis:
        for b in basis:
            if L(A.br(a, b)) != F.norm(L(a) * L(A.br(one, b))):
                raise CompatFailure(2, "Λ([a,b]) = Λ(a)Λ([1,b]) fails")
    mult = Tensor(F, (1, n, 1), (tuple((x,) for x in Lam),))
    lie = Tensor(F, (1, n, 1), (tuple((x,) for x in lam),))
    return JacobiModule(A, 1, mult, lie)


# -- integrals ------------------------------------------------------------

def integral_space(A: JacobiAlgebra) -> list[tuple]:
    """Basis of the functionals with ``ν([a,b]c) = ν(a[b,c])``, in reduced echelon form."""
    rows = []
    basis = A.basis()
    F = A.field
    for a in basis:
        for b in basis:
            ab = A.br(a, b)
            for c in basis:
                row = linalg.sub(F, A.mul(ab, c), A.mul(a, A.br(b, c)))
                if any(row):
                    rows.append(row)
    return linalg.kernel(F, rows, A.dim)


def is_integral(A: JacobiAlgebra, nu) -> bool:
    F = A.field
    nu = F.vec(nu)
    basis = A.basis()
    return all(linalg.dot(F, nu, A.mul(A.br(a, b), c)) == linalg.dot(F, nu, A.mul(a, A.br(b, c)))
               for a in basis for b in basis for c in basis)


def gram_matrix(A: JacobiAlgebra, nu) -> tuple:
    F = A.field
    basis = A.basis()
    return tuple(tuple(linalg.dot(F, nu, A.mul(a, b)) for b in basis) for a in basis)


def is_nondegenerate(A: JacobiAlgebra, nu) -> bool:
    if len(nu) != A.dim:
        raise DimensionMismatch(f"integral must have length {A.dim}")
    if not is_integral(A, nu):
        raise NotAnIntegral("ν([a,b]c) = ν(a[b,c]) fails")
    return linalg.is_invertible(A.field, gram_matrix(A, A.field.vec(nu)))


@dataclass(frozen=True)
class FrobeniusPair:
    nu: tuple
    casimir: tuple          # ((e1, e2), ...)
    euler_casimir: tuple
    exhaustive: bool = True  # False when the search over Q was bounded


def _candidates(A: JacobiAlgebra, space):
    F = A.field
    n = A.dim
    if F.is_finite:
        yield from (v for v in linalg.span_elements(F, space, n) if any(v))
        return
    yield from space
    rng = range(-Q_SEARCH_BOUND, Q_SEARCH_BOUND + 1)
    for coeffs in itertools.product(rng, repeat=len(space)):
        if any(coeffs):
            yield linalg.lincomb(F, zip(coeffs, space), n)


def nondegenerate_integrals(A: JacobiAlgebra):
    """Nondegenerate integrals, all of them over GF(p), a bounded sample over Q."""
    space = integral_space(A)
    F = A.field
    seen = set()
    for nu in _candidates(A, space):
        if nu not in seen and linalg.is_invertible(F, gram_matrix(A, nu)):
            seen.add(nu)
            yield nu


def casimir_pair(A: JacobiAlgebra, nu) -> FrobeniusPair:
    """The dual-basis element ``e = Σ (G^-1)[j][i] e_i ⊗ e_j`` for a nondegenerate ``ν``."""
    F = A.field
    nu = F.vec(nu)
    if not is_nondegenerate(A, nu):
        raise NotAnIntegral("ν is degenerate")
    G = gram_matrix(A, nu)
    Ginv = linalg.inverse(F, G)
    n = A.dim
    basis = A.basis()
    terms = []
    for i in range(n):
        partner = F.vec(Ginv[j][i] for j in range(n))
        if any(partner):
            terms.append((basis[i], partner))
    omega = linalg.lincomb(F, ((1, A.mul(e1, e2)) for e1, e2 in terms), n)
    return FrobeniusPair(nu, tuple(terms), omega, F.is_finite)


def check_casimir(A: JacobiAlgebra, pair: FrobeniusPair) -> AxiomReport:
    F = A.field
    n = A.dim
    c = Checker()
    # Compare Σ a e1 ⊗ e2 and Σ e1 ⊗ e2 a as n×n coefficient matrices.
    def tensor(terms):
        M = [[0] * n for _ in range(n)]
        for u, v in terms:
            for i, x in enumerate(u):
                if x:
                    for j, y in enumerate(v):
                        M[i][j] += x * y
        return tuple(F.vec(r) for r in M)
    for k, a in enumerate(A.basis()):
        left = tensor((A.mul(a, e1), e2) for e1, e2 in pair.casimir)
        right = tensor((e1, A.mul(e2, a)) for e1, e2 in pair.casimir)
        c.eq("casimir balanced", (k,), left, right)
    nu = pair.nu
    c.eq("casimir left counit", (), linalg.lincomb(F, ((linalg.dot(F, nu, e1), e2) for e1, e2 in pair.casimir), n),
         A.one)
    c.eq("casimir right counit", (), linalg.lincomb(F, ((linalg.dot(F, nu, e2), e1) for e1, e2 in pair.casimir), n),
         A.one)
    return c.report()


def frobenius_pair(A: JacobiAlgebra) -> FrobeniusPair | None:
    """First nondegenerate integral in canonical order, with its Casimir element.

    Over Q the search is bounded; a ``None`` result there only means that
    nothing was found among small coefficient combinations.
    """
    for nu in nondegenerate_integrals(A):
        return casimir_pair(A, nu)
    return None


def conformal_integral(A: JacobiAlgebra, u, nu) -> tuple:
    """``a ↦ ν(u²a)``, an integral on the conformal deformation by ``u``."""
    F = A.field
    u2 = A.mul(u, u)
    return tuple(linalg.dot(F, nu, A.mul(u2, e)) for e in A.basis())


def conformal_integral_inverse(A: JacobiAlgebra, u, mu) -> tuple:
    """Inverse of :func:`conformal_integral`: ``a ↦ μ(u⁻²a)``."""
    uinv = inverse_element(A, u)
    return conformal_integral(A, uinv, mu)


def bilinear_form(A: JacobiAlgebra, nu) -> tuple:
    """``B(a, b) = ν(ab)`` as a matrix; the Gram matrix of ``ν``."""
    return gram_matrix(A, nu)


def check_invariant_form(A: JacobiAlgebra, B) -> AxiomReport:
    """``B(ab, c) = B(a, bc)`` and ``B([a,b], c) = B(a, [b,c])``."""
    F = A.field
    form = lambda x, y: F.norm(sum(x[i] * B[i][j] * y[j] for i in range(len(x)) for j in range(len(y))))
    c = Checker()
    basis = A.basis()
    for i, a in enumerate(basis):
        for j, b in enumerate(basis):
            for k, cc in enumerate(basis):
                c.eq("associative form", (i, j, k), form(A.mul(a, b), cc), form(a, A.mul(b, cc)))
                c.eq("invariant form", (i, j, k), form(A.br(a, b), cc), form(a, A.br(b, cc)))
    return c.report()


def integral_of_form(A: JacobiAlgebra, B) -> tuple:
    """``ν(a) = B(a, 1)``."""
    F = A.field
    one = A.one
    return tuple(F.norm(sum(B[i][j] * one[j] for j in range(A.dim))) for i in range(A.dim))
