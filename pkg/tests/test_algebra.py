import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from jacobi_algebras import GF, Q, JacobiAlgebra, catalog, linalg
from jacobi_algebras.algebra import (check_commutative_associative_unital, check_jacobi, check_lie, check_poisson,
                                     conformal_deform, inverse_element, is_poisson, poissonization, tensor_product,
                                     transport, unitalization, yang_baxter_check)
from jacobi_algebras.errors import DimensionMismatch, FieldMismatch, NotInvertible, NotPoisson, ParamOutOfDomain
from jacobi_algebras.tensor import Tensor

from oracles import random_tensor


def identities_hold(A: JacobiAlgebra, trials: int = 30, seed: int = 0) -> bool:
    """Evaluate the Jacobi-algebra identities on random (non-basis) elements."""
    F = A.field
    rng = random.Random(seed)
    n = A.dim
    add = lambda *vs: linalg.lincomb(F, [(1, v) for v in vs], n)  # noqa: E731
    neg = lambda v: linalg.scale(F, -1, v)  # noqa: E731
    for _ in range(trials):
        a, b, c = ([F.random(rng) for _ in range(n)] for _ in range(3))
        a, b, c = F.vec(a), F.vec(b), F.vec(c)
        ok = (A.mul(a, b) == A.mul(b, a)
              and A.mul(A.mul(a, b), c) == A.mul(a, A.mul(b, c))
              and A.mul(A.one, a) == a
              and A.br(a, b) == neg(A.br(b, a))
              and not any(add(A.br(a, A.br(b, c)), A.br(b, A.br(c, a)), A.br(c, A.br(a, b))))
              and A.br(A.mul(a, b), c) == add(A.mul(a, A.br(b, c)), A.mul(A.br(a, c), b),
                                                neg(A.mul(A.mul(a, b), A.br(A.one, c)))))
        if not ok:
            return False
    return True


def _unital_catalog(F):
    out = []
    for e in catalog.list_entries():
        if e.kind == "matched_pair":
            continue
        try:
            A = catalog.build_example(e.name, F)
        except ParamOutOfDomain:
            continue
        if A.unit is not None:
            out.append(A)
    return out


@pytest.mark.parametrize("F", [Q, GF(3), GF(5)], ids=str)
def test_checker_agrees_with_random_element_oracle(F):
    for A in _unital_catalog(F):
        if check_jacobi(A).passed:
            assert identities_hold(A), A.name
        elif F.is_finite:
            # a failing basis triple is a failing element triple, so some random triple should find it
            assert not identities_hold(A, trials=400), A.name


def test_report_witnesses_are_basis_triples():
    A = catalog.build("J2_2", {}, Q)
    rep = check_jacobi(A)
    assert not rep.passed
    assert rep.failed_axioms() == ["jacobi compatibility"]
    assert all(len(v.witness) == 3 and all(0 <= k < 2 for k in v.witness) for v in rep.violations)


def test_non_commutative_tables_are_caught():
    F = GF(3)
    A = catalog.build("J2_3", {}, F)
    coeffs = [list(r) for r in A.mult.coeffs]
    coeffs[0][1] = (0, 0)
    broken = JacobiAlgebra(F, A.labels, Tensor(F, (2, 2, 2), tuple(tuple(r) for r in coeffs)), A.bracket, A.unit)
    assert not check_commutative_associative_unital(broken).passed


def test_bad_shapes_and_fields():
    with pytest.raises(DimensionMismatch):
        JacobiAlgebra(Q, ("1",), Tensor.zeros(Q, (2, 2, 2)), Tensor.zeros(Q, (1, 1, 1)))
    with pytest.raises(FieldMismatch):
        JacobiAlgebra(Q, ("1",), Tensor.zeros(GF(3), (1, 1, 1)), Tensor.zeros(Q, (1, 1, 1)))
    with pytest.raises(FieldMismatch):
        tensor_product(catalog.build("J2_1", {}, Q), catalog.build("J2_1", {}, GF(3)))


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(["J2_1", "J2_3", "J2_4", "J3_5", "J3_8", "J3_11", "Jflag3_3", "J2_2"]),
       st.lists(st.integers(0, 4), min_size=9, max_size=9))
def test_transport_preserves_validity(name, entries):
    F = GF(5)
    A = catalog.build_example(name, F)
    n = A.dim
    phi = tuple(tuple(entries[i * 3 + j] if j < n else 0 for j in range(n)) for i in range(n))
    if not linalg.is_invertible(F, phi):
        return
    B = transport(A, phi)
    assert check_jacobi(B).passed == check_jacobi(A).passed
    assert transport(B, linalg.inverse(F, phi)) == A


@settings(max_examples=30, deadline=None)
@given(st.sampled_from(["J2_1", "J2_3", "J2_4", "J3_1", "J3_8", "J3_11"]), st.data())
def test_conformal_deformation_stays_jacobi(name, data):
    F = GF(5)
    A = catalog.build_example(name, F)
    u = tuple(data.draw(st.integers(0, 4)) for _ in range(A.dim))
    try:
        inv = inverse_element(A, u)
    except NotInvertible:
        return
    assert A.mul(u, inv) == A.one
    B = conformal_deform(A, u)
    assert check_jacobi(B).passed
    assert conformal_deform(B, inv) == A


def test_inverse_of_nilpotent_fails():
    with pytest.raises(NotInvertible):
        inverse_element(catalog.build("J2_1", {}, Q), (0, 1))


def test_tensor_product_of_poisson_algebras():
    F = GF(3)
    A, B = catalog.build("J2_1", {}, F), catalog.build("J2_3", {}, F)
    P = tensor_product(A, B)
    assert P.dim == 4 and P.labels[0] == "1⊗1"
    assert check_poisson(P).passed and P.unit == (1, 0, 0, 0)


def test_unitalization_of_heisenberg():
    H = catalog.build("H", {}, Q)
    U = unitalization(H)
    assert U == catalog.build("H_unital", {}, Q)
    assert check_poisson(U).passed and check_jacobi(U).passed


def test_poissonization_idempotent_on_poisson():
    A = catalog.build("J2_3", {}, Q)
    quotient, ideal_dim = poissonization(A)
    assert ideal_dim == 0 and quotient == A


@pytest.mark.parametrize("name", ["J2_4", "J3_8", "J3_10", "J3_11"])
def test_poissonization_yields_poisson(name):
    A = catalog.build_example(name, Q)
    quotient, ideal_dim = poissonization(A)
    assert quotient.dim + ideal_dim == A.dim
    assert is_poisson(quotient)


def test_yang_baxter_requires_poisson():
    with pytest.raises(NotPoisson):
        yang_baxter_check(catalog.build("J2_4", {}, Q))


def test_lie_checker_catches_jacobi_identity():
    F = Q
    brk = {(0, 1): (0, 0, 1), (1, 2): (1, 0, 0), (0, 2): (1, 0, 0)}
    A = JacobiAlgebra.from_tables(F, ("a", "b", "c"), {}, brk)
    assert "jacobi identity" in check_lie(A).failed_axioms()


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_random_tensors_rarely_pass_but_never_disagree(seed):
    F = GF(3)
    rng = random.Random(seed)
    m = random_tensor(F, (2, 2, 2), rng, 0.5)
    sym = Tensor.from_function(F, (2, 2, 2), lambda i, j: m.entry(min(i, j), max(i, j)))
    b = random_tensor(F, (2, 2, 2), rng, 0.5)
    anti = Tensor.from_function(F, (2, 2, 2), lambda i, j: (0, 0) if i == j else
                                (b.entry(i, j) if i < j else F.vec(-x for x in b.entry(j, i))))
    A = JacobiAlgebra(F, ("1", "x"), sym, anti, (1, 0))
    if check_jacobi(A).passed:
        assert identities_hold(A)
