import itertools
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from jacobi_algebras import GF, Q, IsoMode, catalog, linalg
from jacobi_algebras.algebra import transport
from jacobi_algebras.errors import DimensionMismatch, FieldMismatch, FieldNotFinite
from jacobi_algebras.isoclass import fingerprint, find_isomorphism, partition_by_iso, verify_isomorphism

F3 = GF(3)
DIM2 = ["J2_1", "J2_2", "J2_3", "J2_4", "J2_d"]


def brute_force_iso(A, B, mode) -> bool:
    return any(verify_isomorphism(A, B, g, mode) for g in linalg.general_linear_group(A.field, A.dim))


@pytest.mark.parametrize("mode", list(IsoMode), ids=lambda m: m.value)
def test_search_agrees_with_brute_force_in_dimension_two(mode):
    algebras = [catalog.build_example(n, F3) for n in DIM2]
    for A, B in itertools.product(algebras, repeat=2):
        phi = find_isomorphism(A, B, mode)
        assert (phi is not None) == brute_force_iso(A, B, mode), (A.name, B.name)
        if phi is not None:
            assert verify_isomorphism(A, B, phi, mode)


@settings(max_examples=15, deadline=None)
@given(st.sampled_from(["J3_2", "J3_5", "J3_8", "J3_11", "Jflag3_3", "H_unital"]), st.integers(0, 10 ** 6))
def test_transported_copy_is_found(name, seed):
    A = catalog.build_example(name, F3)
    rng = random.Random(seed)
    while True:
        g = tuple(tuple(rng.randrange(3) for _ in range(A.dim)) for _ in range(A.dim))
        if linalg.is_invertible(F3, g):
            break
    B = transport(A, g)
    phi = find_isomorphism(B, A)
    assert phi is not None and verify_isomorphism(B, A, phi)
    assert fingerprint(A) == fingerprint(B)


def test_parallel_search_agrees():
    A = catalog.build("J3_8", {"u": 2}, F3)
    B = transport(A, ((1, 1, 0), (0, 1, 0), (0, 2, 1)))
    assert (find_isomorphism(A, B, jobs=2) is not None) and (find_isomorphism(A, B) is not None)


def test_partition_matches_brute_force():
    algebras = [catalog.build_example(n, F3) for n in DIM2]
    algebras += [transport(algebras[3], ((1, 0), (1, 1)))]
    classes = partition_by_iso(algebras)
    assert sorted(i for c in classes for i in c) == list(range(len(algebras)))
    for c in classes:
        assert all(brute_force_iso(algebras[c[0]], algebras[i], "jacobi") for i in c)
    for c1, c2 in itertools.combinations(classes, 2):
        assert not brute_force_iso(algebras[c1[0]], algebras[c2[0]], "jacobi")


def test_mode_differences():
    A, B = catalog.build("J2_2", {}, F3), catalog.build("J2_4", {}, F3)
    assert find_isomorphism(A, B, "assoc") is not None
    assert find_isomorphism(A, B, "lie") is not None
    assert find_isomorphism(A, B, IsoMode.JACOBI) is None


def test_verify_rejects_singular_and_wrong_maps():
    A = catalog.build("J2_4", {}, F3)
    assert not verify_isomorphism(A, A, ((1, 0), (0, 0)))
    assert not verify_isomorphism(A, A, ((1, 1), (0, 1)))
    assert verify_isomorphism(A, A, ((1, 0), (0, 2)))


def test_guards():
    with pytest.raises(FieldNotFinite):
        find_isomorphism(catalog.build("J2_1", {}, Q), catalog.build("J2_1", {}, Q))
    with pytest.raises(DimensionMismatch):
        find_isomorphism(catalog.build("J2_1", {}, F3), catalog.build("J3_1", {}, F3))
    with pytest.raises(FieldMismatch):
        verify_isomorphism(catalog.build("J2_1", {}, F3), catalog.build("J2_1", {}, GF(5)), ((1, 0), (0, 1)))
    with pytest.raises(ValueError):
        find_isomorphism(catalog.build("J2_1", {}, F3), catalog.build("J2_1", {}, F3), "ring")
