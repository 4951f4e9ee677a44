"""Dense structure-constant tables for bilinear maps between based spaces."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterable, Mapping

from .errors import DimensionMismatch
from .field import Field


@dataclass(frozen=True)
class Tensor:
    """Bilinear map ``U x W -> X`` with ``coeffs[i][j]`` the image of ``(u_i, w_j)``."""

    field: Field
    dims: tuple[int, int, int]
    coeffs: tuple

    def __post_init__(self):
        n1, n2, n3 = self.dims
        if len(self.coeffs) != n1 or any(len(r) != n2 for r in self.coeffs):
            raise DimensionMismatch(f"coefficient table does not have shape {self.dims}")
        if any(len(v) != n3 for r in self.coeffs for v in r):
            raise DimensionMismatch(f"output vectors must have length {n3}")

    @classmethod
    def zeros(cls, F: Field, dims: tuple[int, int, int]) -> "Tensor":
        n1, n2, n3 = dims
        z = (0,) * n3
        return cls(F, tuple(dims), tuple(tuple(z for _ in range(n2)) for _ in range(n1)))

    @classmethod
    def from_function(cls, F: Field, dims, fn: Callable[[int, int], Iterable]) -> "Tensor":
        n1, n2, _ = dims
        return cls(F, tuple(dims), tuple(tuple(F.vec(fn(i, j)) for j in range(n2)) for i in range(n1)))

    @classmethod
    def from_entries(cls, F: Field, dims, entries: Mapping[tuple[int, int], Iterable],
                     complete: str | None = None) -> "Tensor":
        """Build from sparse ``{(i, j): vector}``; missing entries are zero.

        ``complete="sym"`` also fills ``(j, i)`` with the same vector and
        ``complete="anti"`` with its negative. Conflicting duplicates raise.
        """
        n1, n2, n3 = dims
        table = [[None] * n2 for _ in range(n1)]

        def put(i, j, v):
            if not (0 <= i < n1 and 0 <= j < n2):
                raise DimensionMismatch(f"index ({i}, {j}) out of range for {dims}")
            if len(v) != n3:
                raise DimensionMismatch(f"entry ({i}, {j}) has length {len(v)}, expected {n3}")
            old = table[i][j]
            if old is not None and old != v:
                raise DimensionMismatch(f"conflicting values for entry ({i}, {j})")
            table[i][j] = v

        for (i, j), v in entries.items():
            v = F.vec(F(x) if isinstance(x, str) else x for x in v)
            put(i, j, v)
            if complete == "sym" and i != j:
                put(j, i, v)
            elif complete == "anti":
                if i == j:
                    if any(v):
                        raise DimensionMismatch(f"antisymmetric entry ({i}, {i}) must be zero")
                else:
                    put(j, i, F.vec(-x for x in v))
        z = (0,) * n3
        return cls(F, tuple(dims), tuple(tuple(v if v is not None else z for v in r) for r in table))

    def __call__(self, u, w) -> tuple:
        n3 = self.dims[2]
        out = [0] * n3
        for i, ui in enumerate(u):
            if not ui:
                continue
            row = self.coeffs[i]
            for j, wj in enumerate(w):
                if not wj:
                    continue
                c = ui * wj
                for k, t in enumerate(row[j]):
                    if t:
                        out[k] += c * t
        return self.field.vec(out)

    def entry(self, i: int, j: int) -> tuple:
        return self.coeffs[i][j]

    def is_zero(self) -> bool:
        return not any(x for r in self.coeffs for v in r for x in v)

    def is_symmetric(self) -> bool:
        n = self.dims[0]
        return self.dims[0] == self.dims[1] and all(
            self.coeffs[i][j] == self.coeffs[j][i] for i in range(n) for j in range(n))

    def is_antisymmetric(self) -> bool:
        n = self.dims[0]
        if self.dims[0] != self.dims[1]:
            return False
        F = self.field
        return all(self.coeffs[i][j] == F.vec(-x for x in self.coeffs[j][i])
                   for i in range(n) for j in range(i, n))

    def flat(self) -> tuple:
        return tuple(x for r in self.coeffs for v in r for x in v)

    def entries(self, upper: str | None = None) -> dict:
        """Nonzero entries, restricted to ``i <= j`` (``"le"``) or ``i < j`` (``"lt"``)."""
        out = {}
        for i, r in enumerate(self.coeffs):
            for j, v in enumerate(r):
                if upper == "le" and j < i:
                    continue
                if upper == "lt" and j <= i:
                    continue
                if any(v):
                    out[(i, j)] = v
        return out
