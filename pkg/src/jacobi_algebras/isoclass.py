"""Isomorphism checks and exhaustive search for small algebras over prime fields."""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from enum import Enum

from . import linalg
from .algebra import JacobiAlgebra
from .errors import BudgetExceeded, DimensionMismatch, FieldMismatch, FieldNotFinite

SEARCH_BUDGET = 2_000_000
IDEMPOTENT_SCAN_LIMIT = 10 ** 6


class IsoMode(str, Enum):
    ASSOCIATIVE = "assoc"
    LIE = "lie"
    JACOBI = "jacobi"

    @property
    def uses_mult(self) -> bool:
        return self is not IsoMode.LIE

    @property
    def uses_bracket(self) -> bool:
        return self is not IsoMode.ASSOCIATIVE


def _mode(mode) -> IsoMode:
    return mode if isinstance(mode, IsoMode) else IsoMode(str(mode).lower())


def _same_shape(A: JacobiAlgebra, B: JacobiAlgebra):
    if A.dim != B.dim:
        raise DimensionMismatch(f"dimensions differ: {A.dim} vs {B.dim}")
    if A.field != B.field:
        raise FieldMismatch(f"fields differ: {A.field} vs {B.field}")


def verify_isomorphism(A: JacobiAlgebra, B: JacobiAlgebra, phi, mode="jacobi") -> bool:
    """Whether ``phi`` (columns are images of A's basis) is an isomorphism ``A → B``."""
    mode = _mode(mode)
    _same_shape(A, B)
    n = A.dim
    F = A.field
    if len(phi) != n or any(len(r) != n for r in phi):
        raise DimensionMismatch(f"phi must be {n}×{n}")
    phi = tuple(F.vec(r) for r in phi)
    if not linalg.is_invertible(F, phi):
        return False
    cols = [linalg.column(phi, j) for j in range(n)]
    img = lambda v: linalg.matvec(F, phi, v)
    for i in range(n):
        for j in range(n):
            if mode.uses_mult and img(A.mult.coeffs[i][j]) != B.mul(cols[i], cols[j]):
                return False
            if mode.uses_bracket and img(A.bracket.coeffs[i][j]) != B.br(cols[i], cols[j]):
                return False
    if mode.uses_mult and A.unit is not None and B.unit is not None:
        if img(A.unit) != F.vec(B.unit):
            return False
    return True


# -- invariants ------------------------------------------------------------

@dataclass(frozen=True)
class Fingerprint:
    derived_dim: int
    lie_center_dim: int
    mult_annihilator_dim: int
    square_rank: int
    idempotent_count: int | None
    unit_present: bool

    def key(self, mode) -> tuple:
        mode = _mode(mode)
        out = ()
        if mode.uses_bracket:
            out += (self.derived_dim, self.lie_center_dim)
        if mode.uses_mult:
            out += (self.mult_annihilator_dim, self.square_rank, self.idempotent_count, self.unit_present)
        return out


def _annihilator_dim(A: JacobiAlgebra, table) -> int:
    # a with table(a, e_j) = 0 for all j: stack the maps a -> table(a, e_j).
    n = A.dim
    F = A.field
    rows = []
    for j in range(n):
        for k in range(n):
            rows.append(tuple(table.coeffs[i][j][k] for i in range(n)))
    return len(linalg.kernel(F, rows, n))


def _has_unit(A: JacobiAlgebra) -> bool:
    n = A.dim
    F = A.field
    rows, rhs = [], []
    for j in range(n):
        for k in range(n):
            rows.append(tuple(A.mult.coeffs[i][j][k] for i in range(n)))
            rhs.append(1 if j == k else 0)
    return linalg.solve_linear(F, rows, rhs) is not None if n else False


def fingerprint(A: JacobiAlgebra) -> Fingerprint:
    F = A.field
    n = A.dim
    brackets = [v for r in A.bracket.coeffs for v in r]
    products = [v for r in A.mult.coeffs for v in r]
    derived = linalg.rank(F, brackets) if brackets else 0
    squares = linalg.rank(F, products) if products else 0
    idem = None
    if F.is_finite and F.p ** n <= IDEMPOTENT_SCAN_LIMIT:
        idem = sum(1 for v in linalg.all_vectors(F, n) if A.mul(F.vec(v), F.vec(v)) == F.vec(v))
    return Fingerprint(derived, _annihilator_dim(A, A.bracket), _annihilator_dim(A, A.mult),
                       squares, idem, _has_unit(A))


# -- search ----------------------------------------------------------------

def _support_max(v) -> int:
    m = -1
    for i, x in enumerate(v):
        if x:
            m = i
    return m


def _element_signature(A: JacobiAlgebra, v, mode: IsoMode) -> tuple:
    # Invariants of a single element that any isomorphism must preserve.
    basis = _basis(A)
    out = ()
    if mode.uses_mult:
        out += (linalg.rank(A.field, [A.mul(v, e) for e in basis]), not any(A.mul(v, v)))
    if mode.uses_bracket:
        out += (linalg.rank(A.field, [A.br(v, e) for e in basis]),)
    return out


def _basis(A: JacobiAlgebra) -> list:
    return [tuple(1 if i == j else 0 for i in range(A.dim)) for j in range(A.dim)]


class _Search:
    def __init__(self, A, B, mode, budget):
        self.A, self.B, self.mode = A, B, mode
        self.F = A.field
        self.n = A.dim
        self.budget = budget
        self.nodes = 0
        vectors = [self.F.vec(v) for v in linalg.all_vectors(self.F, self.n)]
        n = self.n
        by_sig: dict = {}
        for v in vectors:
            by_sig.setdefault(_element_signature(B, v, mode), []).append(v)
        # column k may only take vectors that look like e_k from the inside
        self.candidates = [by_sig.get(_element_signature(A, e, mode), []) for e in _basis(A)]
        # Constraints involving basis vectors up to index k are checked once column k is set.
        self.checks = [[] for _ in range(n)]
        for i in range(n):
            for j in range(i, n):
                for kind, t in (("m", A.mult), ("b", A.bracket)):
                    if kind == "m" and not mode.uses_mult:
                        continue
                    if kind == "b" and not mode.uses_bracket:
                        continue
                    v = t.coeffs[i][j]
                    k = max(j, _support_max(v))
                    self.checks[k].append((kind, i, j, v))
        self.unit_check = None
        if mode.uses_mult and A.unit is not None and B.unit is not None:
            self.unit_check = max(0, _support_max(A.unit))

    def image(self, cols, v):
        out = [0] * self.n
        for c, x in zip(cols, v):
            if x:
                for k, y in enumerate(c):
                    if y:
                        out[k] += x * y
        return self.F.vec(out)

    def ok(self, cols, k) -> bool:
        B = self.B
        for kind, i, j, v in self.checks[k]:
            lhs = self.image(cols, v)
            rhs = B.mul(cols[i], cols[j]) if kind == "m" else B.br(cols[i], cols[j])
            if lhs != rhs:
                return False
        if self.unit_check == k and self.image(cols, self.A.unit) != self.F.vec(self.B.unit):
            return False
        return True

    def _extend(self, cols):
        k = len(cols)
        if k == self.n:
            return tuple(zip(*cols))
        for v in self.candidates[k]:
            self.nodes += 1
            if self.nodes > self.budget:
                raise BudgetExceeded(f"isomorphism search exceeded {self.budget} candidates")
            if linalg.rank(self.F, cols + [v]) != k + 1:
                continue
            trial = cols + [v]
            if not self.ok(trial, k):
                continue
            found = self._extend(trial)
            if found is not None:
                return found
        return None


def _search_from(args):
    A, B, mode, budget, first = args
    s = _Search(A, B, mode, budget)
    if first not in s.candidates[0] or not s.ok([first], 0):
        return None
    return s._extend([first])


def find_isomorphism(A: JacobiAlgebra, B: JacobiAlgebra, mode="jacobi", budget: int = SEARCH_BUDGET,
                     jobs: int = 1, prefilter: bool = True):
    """First isomorphism ``A → B`` in canonical column order, or ``None`` after a full search."""
    mode = _mode(mode)
    _same_shape(A, B)
    F = A.field
    if not F.is_finite:
        raise FieldNotFinite("isomorphism search needs a finite field")
    if A.dim == 0:
        return ()
    if prefilter and fingerprint(A).key(mode) != fingerprint(B).key(mode):
        return None
    if jobs and jobs > 1:
        firsts = [F.vec(v) for v in linalg.all_vectors(F, A.dim)]
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            for res in ex.map(_search_from, [(A, B, mode, budget, f) for f in firsts]):
                if res is not None:
                    return res
        return None
    return _Search(A, B, mode, budget)._extend([])


def _canonical_tensor(A: JacobiAlgebra) -> tuple:
    return (A.mult.flat(), A.bracket.flat())


def partition_by_iso(algebras, mode="jacobi", budget: int = SEARCH_BUDGET) -> list[list[int]]:
    """Indices of ``algebras`` grouped into isomorphism classes.

    Classes are listed by their representative (the member with the
    lexicographically smallest structure tensors); members ascend.
    """
    mode = _mode(mode)
    algebras = list(algebras)
    prints = [fingerprint(A).key(mode) for A in algebras]
    classes: list[list[int]] = []
    for i, A in enumerate(algebras):
        for cls in classes:
            j = cls[0]
            if prints[j] != prints[i]:
                continue
            if find_isomorphism(algebras[j], A, mode, budget, prefilter=False) is not None:
                cls.append(i)
                break
        else:
            classes.append([i])
    classes.sort(key=lambda c: min(_canonical_tensor(algebras[i]) for i in c))
    return classes
