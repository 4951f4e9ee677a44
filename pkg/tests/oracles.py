"""Independent brute-force helpers shared by the test modules."""

from __future__ import annotations

import itertools
import random

from jacobi_algebras import catalog, linalg
from jacobi_algebras.algebra import JacobiAlgebra
from jacobi_algebras.errors import AlgebraError
from jacobi_algebras.extensions import (ExtendingDatum, enumerate_flag_datums, extract_extending_structure,
                                        flag_algebra, transport_flag_datum)
from jacobi_algebras.tensor import Tensor

ACTION_NAMES = ("act_r", "act_out", "cocycle_f", "dot", "lie_r", "lie_out", "cocycle_theta", "vbracket")


def sample_params(name: str, F, k: int = 3, seed: int = 0) -> list[dict]:
    """The entry's sample parameters followed by seeded random admissible tuples.

    Empty when the family has no admissible parameters over ``F``.
    """
    e = catalog.entry(name)
    if not e.params:
        return [{}]
    rng = random.Random(f"{name}-{F}-{seed}")
    try:
        out = [catalog.example_params(name, F)]
    except AlgebraError:
        return []
    for _ in range(500):
        if len(out) >= k:
            break
        p = {pn: str(rng.randint(-3, 3)) for pn in e.param_names}
        try:
            catalog.build(name, p, F)
        except AlgebraError:
            continue
        out.append(p)
    return out


def random_tensor(F, dims, rng, density: float) -> Tensor:
    p = F.p
    return Tensor.from_function(
        F, dims, lambda i, j: [rng.randrange(p) if rng.random() < density else 0 for _ in range(dims[2])])


def random_datum(A: JacobiAlgebra, m: int, rng, density: float) -> ExtendingDatum:
    F, n = A.field, A.dim
    shapes = {"act_r": (m, n, m), "act_out": (m, n, n), "cocycle_f": (m, m, n), "dot": (m, m, m),
              "lie_r": (m, n, m), "lie_out": (m, n, n), "cocycle_theta": (m, m, n), "vbracket": (m, m, m)}
    return ExtendingDatum(A, m, **{k: random_tensor(F, shapes[k], rng, density) for k in ACTION_NAMES})


def perturb(om: ExtendingDatum, rng) -> ExtendingDatum:
    """Change a single structure constant by a nonzero amount."""
    name = rng.choice(ACTION_NAMES)
    T = getattr(om, name)
    n1, n2, n3 = T.dims
    i, j, k = rng.randrange(n1), rng.randrange(n2), rng.randrange(n3)
    rows = [[list(v) for v in r] for r in T.coeffs]
    rows[i][j][k] = (rows[i][j][k] + rng.randrange(1, T.field.p)) % T.field.p
    return om.replace(**{name: Tensor(T.field, T.dims, tuple(tuple(tuple(v) for v in r) for r in rows))})


def valid_datums(A: JacobiAlgebra, rng, second_level: int = 2, per_level: int = 6) -> list[ExtendingDatum]:
    """Known-valid extending structures of A over a finite field.

    Codimension one: every flag datum. Codimension two: flag extensions of
    flag extensions, read back through the coordinate retraction onto A.
    """
    flags = enumerate_flag_datums(A)
    out = [fd.to_extending_datum(A) for fd in flags]
    n = A.dim
    N = n + 2
    embed = tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(N))
    proj = tuple(tuple(1 if i == j else 0 for j in range(N)) for i in range(n))
    for fd in rng.sample(flags, min(second_level, len(flags))):
        B = flag_algebra(A, fd)
        inner = enumerate_flag_datums(B)
        for fd2 in rng.sample(inner, min(per_level, len(inner))):
            out.append(extract_extending_structure(flag_algebra(B, fd2), embed, proj))
    return out


def oracle_datums(bases, count: int, seed: int):
    """A seeded mix of valid datums, perturbed valid datums and sparse random datums."""
    rng = random.Random(seed)
    pool = [om for A in bases for om in valid_datums(A, rng)]
    out = []
    for k in range(count):
        kind = k % 4
        if kind in (0, 1) and pool:
            om = rng.choice(pool)
            out.append(perturb(om, rng) if kind == 1 else om)
        elif kind == 2 and pool:
            out.append(perturb(perturb(rng.choice(pool), rng), rng))
        else:
            A = rng.choice(bases)
            out.append(random_datum(A, rng.choice((1, 2)), rng, rng.choice((0.05, 0.15, 0.3))))
    return out


def flag_class_count_naive(A: JacobiAlgebra, datums, keep_u: bool = True) -> int:
    """Connected components of the (undirected) transport graph by depth-first search."""
    F = A.field
    alphas = [F.vec(a) for a in linalg.all_vectors(F, A.dim)]
    return _undirected_components(A, list({fd.key(): fd for fd in datums}.values()), alphas, keep_u)


def _undirected_components(A, datums, alphas, keep_u) -> int:
    index = {fd.key(): i for i, fd in enumerate(datums)}
    adj = [set() for _ in datums]
    for i, fd in enumerate(datums):
        for alpha in alphas:
            j = index.get(transport_flag_datum(A, fd, alpha, keep_u=keep_u).key())
            if j is not None:
                adj[i].add(j)
                adj[j].add(i)
    seen = [False] * len(datums)
    count = 0
    for s in range(len(datums)):
        if seen[s]:
            continue
        count += 1
        stack = [s]
        seen[s] = True
        while stack:
            v = stack.pop()
            for w in adj[v]:
                if not seen[w]:
                    seen[w] = True
                    stack.append(w)
    return count


def all_matrices(F, rows: int, cols: int):
    for entries in itertools.product(range(F.p), repeat=rows * cols):
        yield tuple(tuple(entries[i * cols:(i + 1) * cols]) for i in range(rows))


def small_unital_poisson(F, rng, count: int) -> list[JacobiAlgebra]:
    """Unital Poisson algebras from the catalog and their pairwise tensor products."""
    from jacobi_algebras.algebra import check_poisson, tensor_product

    singles = []
    for e in catalog.list_entries():
        if e.kind == "matched_pair":
            continue
        try:
            A = catalog.build_example(e.name, F)
        except AlgebraError:
            continue
        if A.unit is not None and A.dim <= 4 and check_poisson(A).passed:
            singles.append(A)
    small = [A for A in singles if A.dim <= 2]
    products = [tensor_product(a, b) for a, b in itertools.product(small, repeat=2)]
    pool = singles + products
    return [pool[i] for i in sorted(rng.sample(range(len(pool)), min(count, len(pool))))]


__all__ = ["sample_params", "random_datum", "perturb", "valid_datums", "oracle_datums",
           "flag_class_count_naive", "all_matrices", "small_unital_poisson"]


def factorization_pairs(F, max_dim: int = 4) -> list:
    """Matched pairs read off every splitting of a Poisson catalog algebra into two
    subalgebras spanned by complementary basis subsets."""
    from jacobi_algebras.algebra import check_poisson, tensor_product
    from jacobi_algebras.errors import NotSubalgebra
    from jacobi_algebras.factorization import extract_matched_pair

    algebras = []
    for e in catalog.list_entries():
        if e.kind == "matched_pair":
            continue
        for p in sample_params(e.name, F, k=2):
            try:
                A = catalog.build(e.name, p, F)
            except AlgebraError:
                continue
            if A.dim <= max_dim and check_poisson(A).passed:
                algebras.append(A)
    small = [A for A in algebras if A.dim == 2]
    algebras += [tensor_product(a, b) for a, b in itertools.combinations(small, 2)]
    pairs = []
    for R in algebras:
        idx = range(R.dim)
        for size in range(1, R.dim):
            for p_basis in itertools.combinations(idx, size):
                q_basis = [i for i in idx if i not in p_basis]
                try:
                    pairs.append(extract_matched_pair(R, p_basis, q_basis))
                except NotSubalgebra:
                    continue
    return pairs
