import itertools

import pytest

from twistedgl.field import FieldSpec, FqElem, field_of_order
from oracles import NaiveGF

ORDERS = [2, 3, 4, 5, 7, 8, 9, 16, 25, 27]


def naive_for(F):
    return NaiveGF(F.p, F.modulus)


@pytest.mark.parametrize("q", ORDERS)
def test_arithmetic_matches_naive(q):
    F = field_of_order(q)
    N = naive_for(F)
    vec = F.to_vec
    for a, b in itertools.product(range(q), repeat=2):
        assert tuple(vec(F.add(a, b))) == N.add(tuple(vec(a)), tuple(vec(b)))
        assert tuple(vec(F.mul(a, b))) == N.mul(tuple(vec(a)), tuple(vec(b)))
    for a in range(1, q):
        assert tuple(vec(F.inv(a))) == N.inv(tuple(vec(a)))


@pytest.mark.parametrize("q", ORDERS)
def test_modulus_irreducible(q):
    F = field_of_order(q)
    N = naive_for(F)
    nonzero = [x for x in N.elements() if x != N.zero]
    # a field: every nonzero element is invertible
    for a in nonzero:
        N.inv(a)


def test_f4_default_modulus_and_generator():
    F = field_of_order(4)
    assert list(F.modulus) == [1, 1, 1]
    w = F.generator
    assert F.mult_order(w) == 3
    assert F.mul(w, w) == F.add(w, 1)


@pytest.mark.parametrize("q", ORDERS)
def test_generator_and_dlog(q):
    F = field_of_order(q)
    g = F.generator
    assert F.mult_order(g) == q - 1
    for a in range(1, q):
        assert F.pow(g, F.dlog(a)) == a


@pytest.mark.parametrize("q", [4, 8, 9, 27])
def test_frobenius_is_field_automorphism(q):
    F = field_of_order(q)
    for a, b in itertools.product(range(q), repeat=2):
        assert F.frob(F.mul(a, b)) == F.mul(F.frob(a), F.frob(b))
        assert F.frob(F.add(a, b)) == F.add(F.frob(a), F.frob(b))
    for a in range(q):
        assert F.frob(a, F.e) == a


def test_custom_modulus():
    F = FieldSpec(3, 2, [2, 2, 1])
    assert F.q == 9
    with pytest.raises(ValueError):
        FieldSpec(3, 2, [1, 1, 1])      # t^2 + t + 1 = (t - 1)^2 over F_3


def test_fq_elem_ops_and_json():
    F = field_of_order(9)
    a, b = FqElem(F, 4), FqElem(F, 7)
    assert (a * b) / b == a
    assert a + b - b == a
    assert a ** 8 == FqElem(F, 1)
    assert FieldSpec.from_json(F.to_json()) == F
    assert repr(FqElem(field_of_order(4), 3)) == "w+1"


def test_field_of_order_rejects_non_prime_power():
    with pytest.raises(ValueError):
        field_of_order(6)
