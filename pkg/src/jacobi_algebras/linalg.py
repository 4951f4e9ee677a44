"""Exact dense linear algebra over a :class:`Field`.

Matrices are tuples of row tuples. Linear maps between based spaces follow
the column convention used everywhere in the package: ``M[i][j]`` is the
coefficient of ``e_i`` in the image of ``e_j``.
"""

from __future__ import annotations

import itertools
from typing import Iterable, Sequence

from .errors import DimensionMismatch, NotInvertible
from .field import Field

Matrix = tuple


def zeros(n: int) -> tuple:
    return (0,) * n


def unit_vector(n: int, i: int) -> tuple:
    return tuple(1 if k == i else 0 for k in range(n))


def identity(n: int) -> Matrix:
    return tuple(unit_vector(n, i) for i in range(n))


def zero_matrix(rows: int, cols: int) -> Matrix:
    return tuple((0,) * cols for _ in range(rows))


def add(F: Field, u, v) -> tuple:
    return F.vec(a + b for a, b in zip(u, v))


def sub(F: Field, u, v) -> tuple:
    return F.vec(a - b for a, b in zip(u, v))


def scale(F: Field, c, u) -> tuple:
    return F.vec(c * a for a in u)


def lincomb(F: Field, terms: Iterable[tuple], n: int) -> tuple:
    """Sum of ``c * v`` over ``(c, v)`` pairs."""
    out = [0] * n
    for c, v in terms:
        if not c:
            continue
        for k, x in enumerate(v):
            if x:
                out[k] += c * x
    return F.vec(out)


def dot(F: Field, u, v):
    return F.norm(sum(a * b for a, b in zip(u, v)))


def is_zero(v) -> bool:
    return not any(v)


def transpose(M: Matrix) -> Matrix:
    return tuple(zip(*M)) if M else ()


def matvec(F: Field, M: Matrix, v) -> tuple:
    return F.vec(sum(a * b for a, b in zip(row, v)) for row in M)


def matmul(F: Field, A: Matrix, B: Matrix) -> Matrix:
    cols = transpose(B)
    return tuple(F.vec(sum(a * b for a, b in zip(row, col)) for col in cols) for row in A)


def column(M: Matrix, j: int) -> tuple:
    return tuple(row[j] for row in M)


def from_columns(cols: Sequence[Sequence], rows: int | None = None) -> Matrix:
    if not cols:
        return tuple(() for _ in range(rows or 0))
    return tuple(zip(*cols))


def rref(F: Field, M: Sequence[Sequence]) -> tuple[list[list], list[int]]:
    """Reduced row echelon form and pivot columns."""
    A = [list(F.vec(r)) for r in M]
    if not A:
        return A, []
    ncols = len(A[0])
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(A)) if A[i][c]), None)
        if piv is None:
            continue
        A[r], A[piv] = A[piv], A[r]
        inv = F.inv(A[r][c])
        A[r] = [F.norm(x * inv) for x in A[r]]
        for i in range(len(A)):
            if i != r and A[i][c]:
                f = A[i][c]
                A[i] = [F.norm(a - f * b) for a, b in zip(A[i], A[r])]
        pivots.append(c)
        r += 1
        if r == len(A):
            break
    return A, pivots


def rank(F: Field, M: Sequence[Sequence]) -> int:
    return len(rref(F, M)[1]) if M else 0


def kernel(F: Field, M: Sequence[Sequence], ncols: int | None = None) -> list[tuple]:
    """Basis of ``{x : M x = 0}``, one vector per free column, echelon-canonical."""
    if ncols is None:
        ncols = len(M[0]) if M else 0
    if not M:
        return [unit_vector(ncols, i) for i in range(ncols)]
    R, pivots = rref(F, M)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fc in free:
        v = [0] * ncols
        v[fc] = 1
        for row, pc in zip(R, pivots):
            v[pc] = F.norm(-row[fc])
        basis.append(tuple(v))
    return canonical_basis(F, basis, ncols)


def canonical_basis(F: Field, vectors: Sequence[Sequence], n: int) -> list[tuple]:
    """Reduced row echelon basis of the span of ``vectors``."""
    if not vectors:
        return []
    R, pivots = rref(F, vectors)
    return [tuple(R[i]) for i in range(len(pivots))]


def solve_linear(F: Field, M: Sequence[Sequence], b: Sequence):
    """Solve ``M x = b`` exactly.

    Returns ``(particular, kernel_basis)`` or ``None`` when inconsistent. The
    particular solution has zeros on free columns; the kernel basis is in
    reduced echelon form.
    """
    m = len(M)
    if len(b) != m:
        raise DimensionMismatch(f"matrix has {m} rows but right side has {len(b)} entries")
    ncols = len(M[0]) if m else 0
    if any(len(row) != ncols for row in M):
        raise DimensionMismatch("ragged matrix")
    if m == 0:
        return zeros(ncols), [unit_vector(ncols, i) for i in range(ncols)]
    aug = [list(row) + [bi] for row, bi in zip(M, b)]
    R, pivots = rref(F, aug)
    if ncols in pivots:
        return None
    x = [0] * ncols
    for row, pc in zip(R, pivots):
        x[pc] = row[ncols]
    return F.vec(x), kernel(F, M, ncols)


def inverse(F: Field, M: Matrix) -> Matrix:
    n = len(M)
    if any(len(row) != n for row in M):
        raise DimensionMismatch("inverse of a non-square matrix")
    aug = [list(row) + list(unit_vector(n, i)) for i, row in enumerate(M)]
    R, pivots = rref(F, aug)
    if pivots[:n] != list(range(n)):
        raise NotInvertible("matrix is singular")
    return tuple(tuple(r[n:]) for r in R)


def is_invertible(F: Field, M: Matrix) -> bool:
    return rank(F, M) == len(M) == (len(M[0]) if M else 0)


def span_elements(F: Field, basis: Sequence[Sequence], n: int):
    """Every element of the span of ``basis`` over a finite field."""
    if not basis:
        yield zeros(n)
        return
    for coeffs in itertools.product(range(F.p), repeat=len(basis)):
        yield lincomb(F, zip(coeffs, basis), n)


def all_vectors(F: Field, n: int):
    for coeffs in itertools.product(range(F.p), repeat=n):
        yield coeffs


def general_linear_group(F: Field, n: int):
    """All invertible n×n matrices over a finite field, row-major order."""
    vecs = list(itertools.product(range(F.p), repeat=n))
    def extend(rows):
        if len(rows) == n:
            yield tuple(rows)
            return
        for v in vecs:
            if rank(F, rows + [v]) == len(rows) + 1:
                yield from extend(rows + [v])
    yield from extend([])
