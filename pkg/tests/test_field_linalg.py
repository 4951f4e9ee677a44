import itertools
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from jacobi_algebras import GF, Q, Field, linalg
from jacobi_algebras.errors import DimensionMismatch, FieldError, NotInvertible, ScalarParseError

PRIMES = [3, 5, 7]


@pytest.mark.parametrize("text,p", [("Q", 0), ("QQ", 0), ("GF:5", 5), ("gf(7)", 7), ("GF 3", 3)])
def test_field_parse(text, p):
    assert Field.parse(text) == Field(p)


@pytest.mark.parametrize("bad", ["GF:4", "GF:1", "R", "GF:2"])
def test_field_parse_rejects(bad):
    with pytest.raises(FieldError):
        Field.parse(bad)


def test_str_round_trip():
    for F in (Q, GF(3), GF(11)):
        assert Field.parse(str(F)) == F


def test_scalar_parsing():
    assert Q("-3/4") == Fraction(-3, 4)
    assert Q("6/3") == 2 and isinstance(Q("6/3"), int)
    assert GF(5)("1/2") == 3
    assert GF(5)(-1) == 4
    for bad in ("1/0", "x", "1.5"):
        with pytest.raises(ScalarParseError):
            Q(bad)
    with pytest.raises(ScalarParseError):
        GF(3)(Fraction(1, 3))
    with pytest.raises(ScalarParseError):
        Q(True)


@given(st.sampled_from(PRIMES), st.integers(1, 10 ** 6))
def test_inverse_mod_p(p, x):
    F = GF(p)
    if x % p == 0:
        with pytest.raises(ZeroDivisionError):
            F.inv(x)
    else:
        assert F.norm(x * F.inv(x)) == 1


@given(st.fractions().filter(lambda x: x != 0))
def test_inverse_over_q(x):
    assert Q.norm(x * Q.inv(x)) == 1


@pytest.mark.parametrize("p", PRIMES)
def test_squares_mod_p(p):
    F = GF(p)
    squares = {x * x % p for x in range(p)}
    assert {x for x in F.elements() if F.is_square(x)} == squares


def test_squares_over_q():
    assert Q.is_square(Fraction(9, 4)) and Q.is_square(0)
    assert not Q.is_square(-1) and not Q.is_square(2)


def _matrices(p, n, m):
    return st.lists(st.lists(st.integers(0, p - 1), min_size=m, max_size=m), min_size=n, max_size=n)


@settings(max_examples=60)
@given(st.data())
def test_kernel_is_annihilated(data):
    p = data.draw(st.sampled_from(PRIMES))
    F = GF(p)
    n, m = data.draw(st.integers(1, 4)), data.draw(st.integers(1, 4))
    M = data.draw(_matrices(p, n, m))
    ker = linalg.kernel(F, M)
    assert len(ker) + linalg.rank(F, M) == m
    for v in ker:
        assert not any(linalg.matvec(F, M, v))


@settings(max_examples=60)
@given(st.data())
def test_solve_linear_agrees_with_brute_force(data):
    F = GF(3)
    n, m = data.draw(st.integers(1, 3)), data.draw(st.integers(1, 3))
    M = data.draw(_matrices(3, n, m))
    b = data.draw(st.lists(st.integers(0, 2), min_size=n, max_size=n))
    solutions = [x for x in itertools.product(range(3), repeat=m) if linalg.matvec(F, M, x) == tuple(b)]
    result = linalg.solve_linear(F, M, b)
    if not solutions:
        assert result is None
        return
    x0, ker = result
    assert linalg.matvec(F, M, x0) == tuple(b)
    assert 3 ** len(ker) == len(solutions)


@settings(max_examples=60)
@given(st.lists(st.lists(st.integers(-5, 5), min_size=3, max_size=3), min_size=3, max_size=3))
def test_inverse_over_q_matrices(M):
    M = tuple(tuple(r) for r in M)
    if linalg.rank(Q, M) < 3:
        with pytest.raises(NotInvertible):
            linalg.inverse(Q, M)
        return
    assert linalg.matmul(Q, M, linalg.inverse(Q, M)) == linalg.identity(3)


@pytest.mark.parametrize("p,n", [(3, 1), (3, 2), (5, 2), (3, 3)])
def test_general_linear_group_order(p, n):
    order = 1
    for k in range(n):
        order *= p ** n - p ** k
    group = list(linalg.general_linear_group(GF(p), n))
    assert len(group) == len(set(group)) == order


def test_solve_linear_shape_errors():
    with pytest.raises(DimensionMismatch):
        linalg.solve_linear(Q, [[1, 2]], [1, 2])
    with pytest.raises(DimensionMismatch):
        linalg.solve_linear(Q, [[1, 2], [1]], [1, 2])


def test_canonical_basis_is_span_invariant():
    F = GF(5)
    a = linalg.canonical_basis(F, [(1, 2, 3), (0, 1, 1)], 3)
    b = linalg.canonical_basis(F, [(1, 3, 4), (2, 4, 1)], 3)
    assert a == b
