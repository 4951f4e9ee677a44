import dataclasses
import functools
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from jacobi_algebras import GF, Q, catalog, linalg
from jacobi_algebras.algebra import check_jacobi, check_poisson, transport
from jacobi_algebras.errors import (BudgetExceeded, DimensionMismatch, FieldNotFinite, InvalidFlagDatum,
                                    MissingUnit, NotARetraction)
from jacobi_algebras.extensions import (ExtendingDatum, FlagDatum, check_extending_system, check_flag_datum,
                                        check_poisson_extending, check_poisson_flag_datum, classify_flag,
                                        classify_flag_chain, cohomologous, enumerate_flag_datums,
                                        enumerate_flag_datums_naive, extract_extending_structure, flag_algebra,
                                        flag_equivalent, transport_flag_datum, unified_product)
from jacobi_algebras.isoclass import verify_isomorphism

from oracles import flag_class_count_naive, valid_datums

F3 = GF(3)


def _flag(n, p, data):
    draw = lambda: data.draw(st.integers(0, p - 1))  # noqa: E731
    vec = lambda: tuple(draw() for _ in range(n))  # noqa: E731
    mat = lambda: tuple(vec() for _ in range(n))  # noqa: E731
    return FlagDatum(vec(), mat(), vec(), draw(), vec(), mat())


@settings(max_examples=150, deadline=None)
@given(st.sampled_from(["J2_1", "J2_3", "J2_4"]), st.data())
def test_flag_axioms_match_flag_algebra(name, data):
    A = catalog.build(name, {}, F3)
    fd = _flag(2, 3, data)
    if data.draw(st.booleans()):
        # start from the unit-compatible part so that valid datums are reachable
        fd = dataclasses.replace(fd, Lam=(1, fd.Lam[1]))
    assert check_flag_datum(A, fd).passed == check_jacobi(flag_algebra(A, fd, check=False)).passed


def test_enumerated_flag_datums_are_valid_and_complete():
    for name in ("J2_3", "J2_4"):
        A = catalog.build(name, {}, F3)
        staged = enumerate_flag_datums(A)
        assert [d.key() for d in staged] == sorted(d.key() for d in enumerate_flag_datums_naive(A))
        assert all(check_jacobi(flag_algebra(A, fd)).passed for fd in staged)


def test_parallel_enumeration_matches_serial():
    A = catalog.build("J2_4", {}, F3)
    assert enumerate_flag_datums(A, jobs=2) == enumerate_flag_datums(A)


def test_classification_against_naive_components():
    A = catalog.build("J2_4", {}, F3)
    rep = classify_flag(A)
    assert sum(size for _, size in rep.classes) == rep.total_datums
    assert rep.class_count == flag_class_count_naive(A, enumerate_flag_datums(A))
    exact = classify_flag(A, keep_u=False)
    assert exact.class_count == flag_class_count_naive(A, enumerate_flag_datums(A), keep_u=False)
    assert sum(rep.grouping.values()) == rep.class_count


def test_classify_chain_first_level():
    A = catalog.build("J2_4", {}, F3)
    levels = classify_flag_chain(A, 1)
    assert len(levels) == 1 and levels[0][0][1] == classify_flag(A)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_transport_and_flag_equivalence(seed):
    rng = random.Random(seed)
    A = catalog.build(rng.choice(["J2_1", "J2_3", "J2_4"]), {}, F3)
    fd = rng.choice(enumerate_flag_datums(A))
    alpha = tuple(rng.randrange(3) for _ in range(2))
    moved = transport_flag_datum(A, fd, alpha)
    witness = flag_equivalent(A, fd, moved)
    assert witness is not None
    assert transport_flag_datum(A, fd, witness) == moved


@pytest.mark.parametrize("name", ["J2_1", "J2_3", "J2_4"])
def test_exact_transport_is_a_change_of_basis(name):
    A = catalog.build(name, {}, F3)
    for fd in enumerate_flag_datums(A)[::7]:
        for alpha in ((1, 0), (0, 1), (2, 2)):
            moved = transport_flag_datum(A, fd, alpha, keep_u=False)
            # new basis vector E' = E - α in the coordinates of the original flag algebra
            phi = ((1, 0, -alpha[0] % 3), (0, 1, -alpha[1] % 3), (0, 0, 1))
            assert verify_isomorphism(flag_algebra(A, moved), flag_algebra(A, fd), phi, "jacobi")


def test_flag_algebra_rejects_invalid_datum():
    A = catalog.build("J2_4", {}, F3)
    bad = FlagDatum((0, 0), ((0, 0), (0, 0)), (0, 0), 0, (0, 0), ((0, 0), (0, 0)))
    with pytest.raises(InvalidFlagDatum):
        flag_algebra(A, bad)
    with pytest.raises(DimensionMismatch):
        check_flag_datum(A, FlagDatum((1,), ((0,),), (0,), 0, (0,), ((0,),)))


def test_enumeration_guards():
    with pytest.raises(FieldNotFinite):
        enumerate_flag_datums(catalog.build("J2_1", {}, Q))
    with pytest.raises(MissingUnit):
        enumerate_flag_datums(catalog.build("H", {}, F3))
    with pytest.raises(BudgetExceeded):
        enumerate_flag_datums(catalog.build("J3_11", {}, F3), budget=2)


def _round_trip(om, r):
    """Read ``om`` back from its unified product through the retraction ``(a, x) ↦ a + r(x)``."""
    A = om.base
    n, m = A.dim, om.vdim
    N = n + m
    E = unified_product(om)
    order = list(range(n, N)) + list(range(n))
    perm = tuple(tuple(1 if i == order[j] else 0 for j in range(N)) for i in range(N))
    E = transport(E, perm)  # V first, so ker(proj) comes out in echelon form over V
    embed = tuple(tuple(1 if i == j + m else 0 for j in range(n)) for i in range(N))
    proj = tuple(tuple(r[i][j] if j < m else int(j - m == i) for j in range(N)) for i in range(n))
    return dataclasses.replace(extract_extending_structure(E, embed, proj), base=A)


@functools.lru_cache(maxsize=None)
def _datum_pool():
    rng = random.Random(0)
    return tuple(om for name in ("J2_1", "J2_3", "J2_4")
                 for om in valid_datums(catalog.build(name, {}, F3), rng, second_level=1, per_level=3))


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_change_of_complement_is_cohomologous(seed):
    rng = random.Random(seed)
    om = rng.choice(_datum_pool())
    zero = tuple(tuple(0 for _ in range(om.vdim)) for _ in range(om.base.dim))
    assert _round_trip(om, zero) == om
    r = tuple(tuple(rng.randrange(3) for _ in range(om.vdim)) for _ in range(om.base.dim))
    om2 = _round_trip(om, r)
    assert check_extending_system(om2).passed
    assert cohomologous(om, om2, r)
    assert cohomologous(om, om2, zero) == (om2 == om)


def test_extract_rejects_non_retraction():
    A = catalog.build("J2_4", {}, F3)
    E = unified_product(ExtendingDatum.zero(A, 1).replace())
    embed = ((1, 0), (0, 1), (0, 0))
    with pytest.raises(NotARetraction):
        extract_extending_structure(E, embed, ((0, 0, 0), (0, 1, 0)))


@pytest.mark.parametrize("name", ["J2_1", "J2_3"])
def test_poisson_flag_datums_give_poisson_algebras(name):
    A = catalog.build(name, {}, F3)
    seen = 0
    for fd in enumerate_flag_datums(A):
        om = fd.to_extending_datum(A)
        poisson = check_poisson_flag_datum(A, fd).passed
        assert poisson == check_poisson(flag_algebra(A, fd)).passed
        assert poisson == check_poisson_extending(om).passed
        seen += poisson
    assert seen


def test_flag_datum_extending_datum_round_trip():
    A = catalog.build("J2_4", {}, F3)
    for fd in enumerate_flag_datums(A):
        om = fd.to_extending_datum(A)
        assert FlagDatum.from_extending_datum(om) == fd
        assert unified_product(om).mult == flag_algebra(A, fd).mult
        assert check_extending_system(om).passed


def test_datum_shape_validation():
    A = catalog.build("J2_4", {}, F3)
    om = ExtendingDatum.zero(A, 2)
    with pytest.raises(DimensionMismatch):
        om.replace(dot=ExtendingDatum.zero(A, 1).dot)
    assert linalg.is_zero(om.act_r.flat())
