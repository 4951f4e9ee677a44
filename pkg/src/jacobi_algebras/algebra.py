"""Jacobi algebras given by structure constants, their axiom checkers and
the constructions that act on a single algebra."""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from typing import Iterable, Mapping, Sequence

from . import linalg
from .errors import DimensionMismatch, FieldMismatch, MissingUnit, NotInvertible, NotPoisson
from .field import Field
from .tensor import Tensor

solve_linear = linalg.solve_linear


@dataclass(frozen=True)
class Violation:
    axiom: str
    witness: tuple
    lhs: tuple
    rhs: tuple


@dataclass(frozen=True)
class AxiomReport:
    violations: tuple = ()

    @property
    def passed(self) -> bool:
        return not self.violations

    def __bool__(self) -> bool:
        return self.passed

    def failed_axioms(self) -> list[str]:
        return sorted({v.axiom for v in self.violations})

    def merged(self, *others: "AxiomReport") -> "AxiomReport":
        vs = list(self.violations)
        for o in others:
            vs.extend(o.violations)
        return AxiomReport(tuple(vs))


class Checker:
    """Accumulates violations of identities ``lhs == rhs``."""

    def __init__(self, stop_early: bool = False):
        self.violations: list[Violation] = []
        self.stop_early = stop_early

    def eq(self, axiom: str, witness, lhs, rhs) -> bool:
        if not isinstance(lhs, tuple):
            lhs = (lhs,)
        if not isinstance(rhs, tuple):
            rhs = (rhs,)
        if lhs != rhs:
            self.violations.append(Violation(axiom, tuple(witness), lhs, rhs))
            return False
        return True

    @property
    def failed(self) -> bool:
        return bool(self.violations)

    def report(self) -> AxiomReport:
        return AxiomReport(tuple(self.violations))


@dataclass(frozen=True)
class JacobiAlgebra:
    """Commutative multiplication plus antisymmetric bracket on a based space.

    ``unit`` is the coordinate vector of the unit, or ``None`` for
    non-unital (Poisson) algebras. Nothing about the axioms is enforced at
    construction; use the checkers.
    """

    field: Field
    labels: tuple
    mult: Tensor
    bracket: Tensor
    unit: tuple | None = None
    name: str = dc_field(default="", compare=False)

    def __post_init__(self):
        n = len(self.labels)
        for t, what in ((self.mult, "multiplication"), (self.bracket, "bracket")):
            if t.dims != (n, n, n):
                raise DimensionMismatch(f"{what} tensor has shape {t.dims}, expected {(n, n, n)}")
            if t.field != self.field:
                raise FieldMismatch(f"{what} tensor is over {t.field}, algebra over {self.field}")
        if self.unit is not None and len(self.unit) != n:
            raise DimensionMismatch("unit vector has wrong length")

    @classmethod
    def from_tables(cls, F: Field, labels: Sequence[str], mult: Mapping = (), bracket: Mapping = (),
                    unit: Sequence | None = None, name: str = "") -> "JacobiAlgebra":
        """Build from sparse tables; products completed by symmetry, brackets by antisymmetry."""
        n = len(labels)
        m = Tensor.from_entries(F, (n, n, n), dict(mult), complete="sym")
        b = Tensor.from_entries(F, (n, n, n), dict(bracket), complete="anti")
        u = F.vec(F(x) if isinstance(x, str) else x for x in unit) if unit is not None else None
        return cls(F, tuple(labels), m, b, u, name)

    @property
    def dim(self) -> int:
        return len(self.labels)

    @property
    def one(self) -> tuple:
        if self.unit is None:
            raise MissingUnit(f"algebra {self.name or ''} has no unit".replace("  ", " "))
        return self.unit

    def e(self, i: int) -> tuple:
        return linalg.unit_vector(self.dim, i)

    def basis(self) -> list[tuple]:
        return [self.e(i) for i in range(self.dim)]

    def zero(self) -> tuple:
        return (0,) * self.dim

    def mul(self, u, v) -> tuple:
        return self.mult(u, v)

    def br(self, u, v) -> tuple:
        return self.bracket(u, v)

    def mult_matrix(self, u) -> tuple:
        """Matrix of ``v -> u v``."""
        return linalg.from_columns([self.mul(u, e) for e in self.basis()])

    def bracket_matrix(self, u) -> tuple:
        """Matrix of ``v -> [u, v]``."""
        return linalg.from_columns([self.br(u, e) for e in self.basis()])

    def with_bracket(self, bracket: Tensor, name: str = "") -> "JacobiAlgebra":
        return JacobiAlgebra(self.field, self.labels, self.mult, bracket, self.unit, name or self.name)

    def relabeled(self, labels: Sequence[str]) -> "JacobiAlgebra":
        return JacobiAlgebra(self.field, tuple(labels), self.mult, self.bracket, self.unit, self.name)

    def is_abelian(self) -> bool:
        return self.bracket.is_zero()


# -- checkers -------------------------------------------------------------

def _square(A: JacobiAlgebra):
    n = A.dim
    for t in (A.mult, A.bracket):
        if t.dims != (n, n, n):
            raise DimensionMismatch(f"tensor shape {t.dims} is not ({n}, {n}, {n})")


def check_commutative_associative_unital(A: JacobiAlgebra) -> AxiomReport:
    _square(A)
    n = A.dim
    c = Checker()
    m = A.mult.coeffs
    for i in range(n):
        for j in range(i + 1, n):
            c.eq("commutativity", (i, j), m[i][j], m[j][i])
    for i in range(n):
        for j in range(n):
            for k in range(n):
                lhs = A.mul(m[i][j], A.e(k))
                rhs = A.mul(A.e(i), m[j][k])
                c.eq("associativity", (i, j, k), lhs, rhs)
    if A.unit is not None:
        for i in range(n):
            c.eq("unit", (i,), A.mul(A.unit, A.e(i)), A.e(i))
    return c.report()


def check_lie(A: JacobiAlgebra) -> AxiomReport:
    _square(A)
    n = A.dim
    F = A.field
    c = Checker()
    b = A.bracket.coeffs
    for i in range(n):
        c.eq("alternating", (i, i), b[i][i], A.zero())
        for j in range(i + 1, n):
            c.eq("antisymmetry", (i, j), b[i][j], F.vec(-x for x in b[j][i]))
    for i in range(n):
        for j in range(i + 1, n):
            for k in range(j + 1, n):
                s = linalg.lincomb(F, [(1, A.br(A.e(i), b[j][k])),
                                       (1, A.br(A.e(j), b[k][i])),
                                       (1, A.br(A.e(k), b[i][j]))], n)
                c.eq("jacobi identity", (i, j, k), s, A.zero())
    return c.report()


def check_jacobi_compat(A: JacobiAlgebra) -> AxiomReport:
    """``[ab, c] = a[b, c] + [a, c]b - ab[1, c]`` on every basis triple."""
    _square(A)
    one = A.one
    n = A.dim
    F = A.field
    m = A.mult.coeffs
    b = A.bracket.coeffs
    c = Checker()
    one_br = [A.br(one, A.e(k)) for k in range(n)]
    for i in range(n):
        for j in range(n):
            ab = m[i][j]
            for k in range(n):
                lhs = A.br(ab, A.e(k))
                rhs = linalg.lincomb(F, [(1, A.mul(A.e(i), b[j][k])),
                                         (1, A.mul(b[i][k], A.e(j))),
                                         (-1, A.mul(ab, one_br[k]))], n)
                c.eq("jacobi compatibility", (i, j, k), lhs, rhs)
    return c.report()


def check_jacobi(A: JacobiAlgebra) -> AxiomReport:
    """All three Jacobi-algebra checks merged."""
    return check_commutative_associative_unital(A).merged(check_lie(A), check_jacobi_compat(A))


def check_leibniz(A: JacobiAlgebra) -> AxiomReport:
    _square(A)
    n = A.dim
    F = A.field
    m = A.mult.coeffs
    b = A.bracket.coeffs
    c = Checker()
    for i in range(n):
        for j in range(n):
            for k in range(n):
                lhs = A.br(m[i][j], A.e(k))
                rhs = linalg.lincomb(F, [(1, A.mul(A.e(i), b[j][k])),
                                         (1, A.mul(b[i][k], A.e(j)))], n)
                c.eq("leibniz", (i, j, k), lhs, rhs)
    return c.report()


def is_poisson(A: JacobiAlgebra) -> bool:
    """Leibniz law on all basis triples (unital or not)."""
    return check_leibniz(A).passed


def check_poisson(A: JacobiAlgebra) -> AxiomReport:
    """Commutative associative algebra, Lie algebra, and Leibniz law."""
    return check_commutative_associative_unital(A).merged(check_lie(A), check_leibniz(A))


# -- constructions --------------------------------------------------------

def inverse_element(A: JacobiAlgebra, u) -> tuple:
    sol = linalg.solve_linear(A.field, A.mult_matrix(u), A.one)
    if sol is None:
        raise NotInvertible(f"{u} is not invertible")
    return sol[0]


def conformal_deform(A: JacobiAlgebra, u) -> JacobiAlgebra:
    """Bracket ``[x, y]_u = u^-1 [ux, uy]`` with the same multiplication."""
    F = A.field
    u = F.vec(u)
    uinv = inverse_element(A, u)
    ue = [A.mul(u, e) for e in A.basis()]
    n = A.dim
    br = Tensor.from_function(F, (n, n, n), lambda i, j: A.mul(uinv, A.br(ue[i], ue[j])))
    return A.with_bracket(br, name=f"{A.name}_u" if A.name else "")


def tensor_product(A: JacobiAlgebra, B: JacobiAlgebra) -> JacobiAlgebra:
    """Kronecker-basis product with ``[a(x)b, a'(x)b'] = aa'(x)[b,b'] + [a,a'](x)bb'``."""
    if A.field != B.field:
        raise FieldMismatch(f"{A.field} vs {B.field}")
    F = A.field
    n1, n2 = A.dim, B.dim
    n = n1 * n2

    def kron(u, v):
        return F.vec(a * b for a in u for b in v)

    def prod(idx1, idx2):
        i, j = divmod(idx1, n2)
        k, l = divmod(idx2, n2)
        return kron(A.mult.coeffs[i][k], B.mult.coeffs[j][l])

    def brk(idx1, idx2):
        i, j = divmod(idx1, n2)
        k, l = divmod(idx2, n2)
        return linalg.add(F, kron(A.mult.coeffs[i][k], B.bracket.coeffs[j][l]),
                          kron(A.bracket.coeffs[i][k], B.mult.coeffs[j][l]))

    labels = tuple(f"{a}⊗{b}" for a in A.labels for b in B.labels)
    unit = kron(A.one, B.one)
    return JacobiAlgebra(F, labels, Tensor.from_function(F, (n, n, n), prod),
                         Tensor.from_function(F, (n, n, n), brk), unit,
                         f"{A.name}⊗{B.name}" if A.name and B.name else "")


def unitalization(A: JacobiAlgebra, unit_label: str = "1") -> JacobiAlgebra:
    """Adjoin a unit at basis index 0; the new unit is central for the bracket."""
    F = A.field
    n = A.dim + 1

    def shift(v):
        return (0,) + tuple(v)

    def prod(i, j):
        if i == 0:
            return linalg.unit_vector(n, j)
        if j == 0:
            return linalg.unit_vector(n, i)
        return shift(A.mult.coeffs[i - 1][j - 1])

    def brk(i, j):
        if i == 0 or j == 0:
            return (0,) * n
        return shift(A.bracket.coeffs[i - 1][j - 1])

    return JacobiAlgebra(F, (unit_label,) + A.labels, Tensor.from_function(F, (n, n, n), prod),
                         Tensor.from_function(F, (n, n, n), brk), linalg.unit_vector(n, 0),
                         f"{A.name}+1" if A.name else "")


class Subspace:
    """A subspace kept in reduced echelon form, with reduction modulo it."""

    def __init__(self, F: Field, n: int, vectors: Iterable = ()):
        self.F = F
        self.n = n
        self.rows: list[tuple] = []
        self.pivots: list[int] = []
        self.extend(vectors)

    def extend(self, vectors: Iterable) -> bool:
        vs = [v for v in vectors if any(v)]
        if not vs:
            return False
        before = len(self.rows)
        R, piv = linalg.rref(self.F, self.rows + vs)
        self.rows = [tuple(R[i]) for i in range(len(piv))]
        self.pivots = piv
        return len(self.rows) > before

    def reduce(self, v) -> tuple:
        F = self.F
        w = list(v)
        for row, pc in zip(self.rows, self.pivots):
            c = w[pc]
            if c:
                w = [F.norm(a - c * b) for a, b in zip(w, row)]
        return F.vec(w)

    def contains(self, v) -> bool:
        return not any(self.reduce(v))

    @property
    def dim(self) -> int:
        return len(self.rows)

    def complement_indices(self) -> list[int]:
        return [i for i in range(self.n) if i not in self.pivots]


def poissonization(A: JacobiAlgebra) -> tuple[JacobiAlgebra, int]:
    """Quotient by the smallest ideal containing every ``[1, a]`` that is closed
    under multiplication and bracket; returns ``(quotient, ideal_dim)``."""
    F = A.field
    n = A.dim
    one = A.one
    ideal = Subspace(F, n, [A.br(one, e) for e in A.basis()])
    grew = True
    while grew:
        new = []
        for v in ideal.rows:
            for e in A.basis():
                new.append(A.mul(e, v))
                new.append(A.br(e, v))
        grew = ideal.extend(new)
    keep = ideal.complement_indices()
    m = len(keep)

    def project(v):
        w = ideal.reduce(v)
        return tuple(w[k] for k in keep)

    mult = Tensor.from_function(F, (m, m, m), lambda i, j: project(A.mult.coeffs[keep[i]][keep[j]]))
    brk = Tensor.from_function(F, (m, m, m), lambda i, j: project(A.bracket.coeffs[keep[i]][keep[j]]))
    quotient = JacobiAlgebra(F, tuple(A.labels[k] for k in keep), mult, brk, project(one),
                             f"{A.name}_poss" if A.name else "")
    return quotient, ideal.dim


def yang_baxter_check(A: JacobiAlgebra) -> AxiomReport:
    """Braid relation for ``R(a(x)b) = b(x)a + 1(x)[a,b]`` on every basis tensor of A^(x)3."""
    one = A.one
    if not is_poisson(A):
        raise NotPoisson(f"{A.name or 'algebra'} is not a Poisson algebra")
    F = A.field
    n = A.dim
    unit_terms = [(l, c) for l, c in enumerate(one) if c]

    def R_basis(i, j):
        out = {(j, i): 1}
        for k, ck in enumerate(A.bracket.coeffs[i][j]):
            if ck:
                for l, cl in unit_terms:
                    out[(l, k)] = out.get((l, k), 0) + cl * ck
        return out

    Rtab = {(i, j): R_basis(i, j) for i in range(n) for j in range(n)}

    def apply(vec: dict, pos: int) -> dict:
        out: dict = {}
        for key, c in vec.items():
            a, b = key[pos], key[pos + 1]
            for (x, y), d in Rtab[(a, b)].items():
                nk = key[:pos] + (x, y) + key[pos + 2:]
                out[nk] = out.get(nk, 0) + c * d
        return {k: F.norm(v) for k, v in out.items() if F.norm(v)}

    chk = Checker()
    for i in range(n):
        for j in range(n):
            for k in range(n):
                v = {(i, j, k): 1}
                left = apply(apply(apply(v, 0), 1), 0)
                right = apply(apply(apply(v, 1), 0), 1)
                if left != right:
                    chk.eq("yang-baxter", (i, j, k), _dense3(left, n), _dense3(right, n))
    return chk.report()


def _dense3(d: dict, n: int) -> tuple:
    return tuple(d.get((a, b, c), 0) for a in range(n) for b in range(n) for c in range(n))


def transport(A: JacobiAlgebra, phi, labels: Sequence[str] | None = None) -> JacobiAlgebra:
    """Structure constants of A in the basis given by the columns of ``phi``.

    The result B has the property that ``phi`` (as a map B -> A in
    coordinates) is an isomorphism.
    """
    F = A.field
    n = A.dim
    cols = [linalg.column(phi, j) for j in range(n)]
    inv = linalg.inverse(F, phi)
    mult = Tensor.from_function(F, (n, n, n), lambda i, j: linalg.matvec(F, inv, A.mul(cols[i], cols[j])))
    brk = Tensor.from_function(F, (n, n, n), lambda i, j: linalg.matvec(F, inv, A.br(cols[i], cols[j])))
    unit = linalg.matvec(F, inv, A.unit) if A.unit is not None else None
    return JacobiAlgebra(F, tuple(labels) if labels else A.labels, mult, brk, unit, A.name)
