from fractions import Fraction

import pytest

from jacobi_algebras import GF, Q, catalog
from jacobi_algebras.algebra import check_jacobi, check_poisson, is_poisson
from jacobi_algebras.errors import CharConditionViolated, ParamOutOfDomain, UnknownName
from jacobi_algebras.factorization import MatchedPair


def test_every_entry_builds_over_q():
    for e in catalog.list_entries():
        A = catalog.build_example(e.name, Q)
        assert A is not None, e.name
        if e.kind == "matched_pair":
            assert isinstance(A, MatchedPair)


def test_dimension_two_tables():
    F = Q
    A = catalog.build("J2_4", {}, F)
    one, x = A.basis()
    assert A.mul(x, x) == (0, 0) and A.br(x, one) == x
    A = catalog.build("J2_3", {}, F)
    assert A.mul(A.e(1), A.e(1)) == A.e(1) and A.is_abelian()


def test_heisenberg_family_constants():
    F = GF(5)
    A = catalog.build("H_a", {"a": 3}, F)
    h1, h2, h3 = A.basis()
    assert A.mul(h1, h1) == h3
    assert A.mul(h1, h2) == (0, 0, 3)
    assert A.br(h1, h2) == (0, 0, 4)
    assert A.unit is None and check_poisson(A).passed


@pytest.mark.parametrize("a", ["-1", "0", "-1/2"])
def test_heisenberg_family_domain(a):
    with pytest.raises(ParamOutOfDomain):
        catalog.build("H_a", {"a": a}, Q)


def test_nonsquare_parameter():
    with pytest.raises(ParamOutOfDomain):
        catalog.build("J2_d", {"d": 4}, Q)
    with pytest.raises(ParamOutOfDomain):
        catalog.build("J2_d", {"d": -1}, GF(5))
    assert catalog.example_params("J2_d", GF(5))["d"] in (2, 3)
    assert catalog.nonsquares_equivalent(GF(5), 2, 3)
    assert not catalog.nonsquares_equivalent(Q, 2, 3)
    assert catalog.nonsquares_equivalent(Q, 2, 8)


def test_unknown_names_and_params():
    with pytest.raises(UnknownName):
        catalog.build("J9_9", {}, Q)
    with pytest.raises(ParamOutOfDomain):
        catalog.build("J2_1", {"q": 1}, Q)
    with pytest.raises(ParamOutOfDomain):
        catalog.build("J3_8", {}, Q)
    with pytest.raises(ParamOutOfDomain):
        catalog.build("J3_8", {"u": 0}, Q)


def test_parameters_accept_strings_and_fractions():
    assert catalog.build("J3_8", {"u": "3/2"}, Q) == catalog.build("J3_8", {"u": Fraction(3, 2)}, Q)
    assert catalog.build("J3_8", {"u": "1/2"}, GF(5)) == catalog.build("J3_8", {"u": 3}, GF(5))


@pytest.mark.parametrize("p", [3, 5, 7])
def test_cyclic_group_algebra_guard(p):
    for n in range(2, 9):
        y = tuple(1 if i == 1 else 0 for i in range(n))
        if n % p == 0:
            assert check_jacobi(catalog.group_algebra_cyclic(n, y, GF(p))).passed
        else:
            with pytest.raises(CharConditionViolated):
                catalog.group_algebra_cyclic(n, y, GF(p))


def test_cyclic_group_algebra_without_bracket_is_poisson():
    A = catalog.build("kCn", {"n": 4, "t": 0}, Q)
    assert A.dim == 4 and A.is_abelian() and is_poisson(A)
    c = A.e(1)
    assert A.mul(A.mul(c, c), A.mul(c, c)) == A.one


def test_matched_pair_entry_shapes():
    mp = catalog.build("defmap1_pair", {}, GF(3))
    assert (mp.P.dim, mp.Q.dim) == (1, 3)
    assert mp.P.unit is None and mp.Q.unit is None


def test_descriptions_are_present():
    for e in catalog.list_entries():
        assert e.description and e.kind in ("jacobi", "poisson", "matched_pair")
        assert len(e.example) == len(e.params)
