import functools
import itertools
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from jacobi_algebras import GF, Q, catalog, linalg
from jacobi_algebras.algebra import Subspace, check_poisson
from jacobi_algebras.errors import (BudgetExceeded, DimensionMismatch, FieldNotFinite, NotADeformationMap,
                                    NotDirectSum, NotPoisson, NotSubalgebra, SingularSigma)
from jacobi_algebras.factorization import (MatchedPair, bicrossed_product, check_deformation_map,
                                           check_matched_pair, complement_classes, complement_embedding, deform,
                                           deformation_equivalent, deformation_report, enumerate_deformation_maps,
                                           extract_matched_pair)
from jacobi_algebras.isoclass import find_isomorphism, verify_isomorphism
from jacobi_algebras.tensor import Tensor

from oracles import all_matrices, factorization_pairs

F3 = GF(3)


@functools.lru_cache(maxsize=None)
def _pool():
    return tuple(factorization_pairs(F3))


def _small_pool(limit):
    return [mp for mp in _pool() if mp.P.dim * mp.Q.dim <= limit]


def _graph_is_closed(mp, r) -> bool:
    R = bicrossed_product(mp)
    cols = complement_embedding(mp, r)
    sub = Subspace(R.field, R.dim, cols)
    return all(sub.contains(R.mul(u, v)) and sub.contains(R.br(u, v)) for u in cols for v in cols)


def test_pool_is_nontrivial():
    pool = _pool()
    assert len(pool) >= 50
    assert any(not mp.act_r.is_zero() or not mp.lie_r.is_zero() for mp in pool)


def test_bicrossed_product_is_poisson_and_round_trips():
    for mp in _pool():
        R = bicrossed_product(mp)
        assert check_poisson(R).passed
        n = mp.P.dim
        assert extract_matched_pair(R, range(n), range(n, R.dim)) == mp


def test_deformation_maps_are_exactly_closed_graphs():
    for mp in _small_pool(4):
        n, m = mp.P.dim, mp.Q.dim
        closed = [r for r in all_matrices(F3, n, m) if _graph_is_closed(mp, r)]
        key = lambda r: tuple(r[i][j] for j in range(m) for i in range(n))  # noqa: E731
        assert enumerate_deformation_maps(mp) == sorted(closed, key=key)


def test_deformed_algebra_is_the_complement():
    for mp in _small_pool(4)[:20]:
        for r in enumerate_deformation_maps(mp)[:5]:
            Qr = deform(mp, r)
            emb = complement_embedding(mp, r)
            R = bicrossed_product(mp)
            # the complement's structure constants, read through the embedding
            phi = linalg.from_columns(emb)
            for i, j in itertools.product(range(mp.Q.dim), repeat=2):
                assert R.mul(emb[i], emb[j]) == linalg.matvec(F3, phi, Qr.mult.entry(i, j))
                assert R.br(emb[i], emb[j]) == linalg.matvec(F3, phi, Qr.bracket.entry(i, j))


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_sigma_identities_mean_isomorphism(seed):
    rng = random.Random(seed)
    mp = rng.choice(_small_pool(4))
    maps = enumerate_deformation_maps(mp)
    r, r2 = rng.choice(maps), rng.choice(maps)
    m = mp.Q.dim
    assert deformation_equivalent(mp, r, r, linalg.identity(m))
    sigma = tuple(tuple(rng.randrange(3) for _ in range(m)) for _ in range(m))
    if not linalg.is_invertible(F3, sigma):
        with pytest.raises(SingularSigma):
            deformation_equivalent(mp, r, r2, sigma)
        return
    assert deformation_equivalent(mp, r, r2, sigma) == verify_isomorphism(deform(mp, r), deform(mp, r2), sigma)


def test_example_pair_over_gf5():
    mp = catalog.build("defmap1_pair", {}, GF(5))
    assert check_matched_pair(mp).passed
    maps = enumerate_deformation_maps(mp)
    assert len(maps) == 25 and all(r[0][2] == 0 for r in maps)
    assert not check_deformation_map(mp, ((0, 0, 1),))
    rep = deformation_report(mp, ((0, 0, 1),))
    assert {v.axiom for v in rep.violations} <= {"ana1", "ana2"}
    with pytest.raises(NotADeformationMap):
        deform(mp, ((0, 0, 1),))


def test_complement_classes_over_gf3():
    mp = catalog.build("defmap1_pair", {}, F3)
    rep = complement_classes(mp)
    assert rep.deformation_maps == 9
    assert rep.factorization_index == 6
    assert sorted(size for _, size in rep.classes) == [1, 1, 1, 2, 2, 2]
    for (rep_r, _), members in zip(rep.classes, rep.witnesses):
        for r, sigma in members:
            assert deformation_equivalent(mp, rep_r, r, sigma)
    # no two representatives are related, checked through the isomorphism search
    reps = [deform(mp, r) for r, _ in rep.classes]
    for A, B in itertools.combinations(reps, 2):
        assert find_isomorphism(A, B) is None


def test_complement_budget():
    with pytest.raises(BudgetExceeded):
        complement_classes(catalog.build("defmap1_pair", {}, GF(5)))
    with pytest.raises(FieldNotFinite):
        enumerate_deformation_maps(catalog.build("defmap1_pair", {}, Q))


def test_broken_action_is_reported():
    mp = catalog.build("defmap1_pair", {}, F3)
    coeffs = [list(row) for row in mp.act_r.coeffs]
    coeffs[0][0] = (1, 0, 0)  # H1 ◁ X = H1
    bad = MatchedPair(mp.P, mp.Q, Tensor(F3, mp.act_r.dims, tuple(tuple(r) for r in coeffs)),
                      mp.act_out, mp.lie_r, mp.lie_out)
    assert not check_matched_pair(bad).passed


def test_non_poisson_inputs_are_rejected():
    mp = catalog.build("defmap1_pair", {}, F3)
    J = catalog.build("J2_4", {}, F3)
    with pytest.raises(NotPoisson):
        check_matched_pair(MatchedPair.zero(J, mp.Q))


def test_extract_errors():
    R = bicrossed_product(catalog.build("defmap1_pair", {}, F3))
    with pytest.raises(NotDirectSum):
        extract_matched_pair(R, [0, 1], [1, 2, 3])
    with pytest.raises(NotSubalgebra):
        extract_matched_pair(R, [1], [0, 2, 3])


def test_shape_errors():
    mp = catalog.build("defmap1_pair", {}, F3)
    with pytest.raises(DimensionMismatch):
        deformation_report(mp, ((0, 0),))
    with pytest.raises(DimensionMismatch):
        deformation_equivalent(mp, ((0, 0, 0),), ((0, 0, 0),), ((1, 0), (0, 1)))
