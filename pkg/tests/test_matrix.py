import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from twistedgl.field import field_of_order
from twistedgl.matrix import (CommutatorWord, Mat, commutator, diagonal, e12, e21, elem_as_commutator,
                              elem_as_commutator_sl2, elementary, embed_block, gl_member, h_mat, mat_det,
                              random_gl, random_mat, sl_member, swap_u, trace_power, witness_x)
from twistedgl.ring import Ring, s_expansion
from oracles import NaiveGF, lp_from_elem, mat2_mul, s_oracle, trace_power_oracle
from strategies import elems, rings


def R_(q, flavor="laurent"):
    return Ring(field_of_order(q), flavor)


@given(st.data())
def test_2x2_product_matches_oracle(data):
    R = data.draw(rings())
    N = NaiveGF(R.spec.p, R.spec.modulus)
    a = Mat(R, [[data.draw(elems(R, 3, 2)) for _ in range(2)] for _ in range(2)])
    b = Mat(R, [[data.draw(elems(R, 3, 2)) for _ in range(2)] for _ in range(2)])
    lift = lambda m: [[lp_from_elem(N, x) for x in row] for row in m.rows]
    assert lift(a * b) == mat2_mul(lift(a), lift(b))


@pytest.mark.parametrize("q,flavor", [(2, "poly"), (3, "laurent"), (4, "laurent"), (5, "poly")])
def test_det_multiplicative_and_inverse(q, flavor):
    R = R_(q, flavor)
    rng = random.Random(q)
    for n in (2, 3):
        for _ in range(10):
            a, b = random_mat(R, n, rng), random_mat(R, n, rng)
            assert (a * b).det() == a.det() * b.det()
            g = random_gl(R, n, rng)
            assert gl_member(g)
            assert g * g.inverse() == Mat.identity(R, n)


def test_inverse_rejects_non_units():
    R = R_(3, "poly")
    with pytest.raises(ValueError, match="not in GL_n"):
        Mat(R, [[R.t(), R.zero()], [R.zero(), R.one()]]).inverse()


def test_elementary_relations():
    R = R_(5)
    x, y = R.t() + R.one(), R.mono(2, -3)
    assert e12(R, x) * e12(R, y) == e12(R, x + y)
    lam = R.elem((3,), 2)
    conj = diagonal(R, lam, R.one()) * e12(R, R.one()) * diagonal(R, lam.inverse(), R.one())
    assert conj == e12(R, lam)
    T = diagonal(R, R.t(), R.one())
    assert T * e12(R, R.one()) * T.inverse() == e12(R, R.t())
    u = swap_u(R)
    assert u * T * u == diagonal(R, R.one(), R.t())
    assert elementary(R, 1, 3, x, 3).rows[0][2] == x
    with pytest.raises(ValueError):
        elementary(R, 2, 2, x, 3)


def test_trace_of_block_family():
    # B(x) = [[1 + x, 1], [x, 1]] has trace 2 + x; embedded it gains n - 2
    R = R_(3, "poly")
    x = R.t() ** 2 + R.const(2)
    B = Mat(R, [[R.one() + x, R.one()], [x, R.one()]])
    assert sl_member(B)
    for n in (2, 3, 4):
        assert embed_block(B, n).trace() == R.const(2) + x + R.const(n - 2)


@pytest.mark.parametrize("q", [2, 3, 4])
@pytest.mark.parametrize("flavor", ["poly", "laurent"])
def test_witness_trace_and_quadratic(q, flavor):
    R = R_(q, flavor)
    for m in (1, 2, 3):
        x = witness_x(m, R)
        s2m = R.s_power(2 * m)
        assert x.trace() == R.const(2) - s2m
        # X^2 + (s^2m - 2) X + I = 0
        I = Mat.identity(R, 2)
        assert x * x + x * (s2m - R.const(2)) + I == Mat(R, [[R.zero()] * 2] * 2)
        assert sl_member(witness_x(m, R, 3))


def test_trace_small_cases():
    R = R_(5, "poly")
    s = R.special_s()
    two = R.const(2)
    assert trace_power(1, 1, R) == two - s * s
    assert trace_power(1, 2, R) == two - (s * s).scale(4) + s ** 4
    assert s_expansion(trace_power(1, 1, R)) == [2, 0, 4]


@pytest.mark.parametrize("q", [2, 3])
@pytest.mark.parametrize("flavor", ["poly", "laurent"])
def test_trace_power_matches_dict_oracle(q, flavor):
    R = R_(q, flavor)
    N = NaiveGF(R.spec.p, R.spec.modulus)
    s = s_oracle(N, q, R.laurent)
    for m in (1, 2):
        for r in (1, 2, 3):
            assert lp_from_elem(N, trace_power(m, r, R)) == trace_power_oracle(N, s, m, r)


@pytest.mark.parametrize("x_deg", [0, 1, 3])
def test_elem_as_commutator_n3(x_deg):
    R = R_(3, "poly")
    x = R.mono(2, x_deg) + R.one()
    for i in range(1, 4):
        for j in range(1, 4):
            if i != j:
                w = elem_as_commutator(i, j, x, 3, R)
                assert len(w.pairs) == 1
                assert w.evaluate() == elementary(R, i, j, x, 3)
    with pytest.raises(ValueError):
        elem_as_commutator(1, 2, x, 2, R)


def test_elem_as_commutator_uses_least_free_index():
    R = R_(2, "poly")
    w = elem_as_commutator(1, 2, R.t(), 3, R)
    a, b = w.pairs[0]
    assert a == elementary(R, 1, 3, R.t(), 3) and b == elementary(R, 3, 2, R.one(), 3)


def test_sl2_commutator_word():
    R = R_(4, "poly")
    x = R.t() ** 3 + R.elem((2,))
    w = elem_as_commutator_sl2(x, R)
    assert isinstance(w, CommutatorWord)
    assert len(w.pairs) == 3            # ord(w^2 - 1) = ord(w) = 3 in GF(4)
    assert all(sl_member(a) and sl_member(b) for a, b in w.pairs)
    assert w.evaluate() == e12(R, x)
    assert commutator(*w.pairs[0]) ** 3 == e12(R, x)
    with pytest.raises(ValueError):
        elem_as_commutator_sl2(x, R_(3, "poly"))


def test_mat_json_roundtrip():
    R = R_(9)
    rng = random.Random(1)
    g = random_gl(R, 3, rng)
    assert Mat.from_json(R, g.to_json()) == g
    assert h_mat(R, R.t(), 3).det() == R.t()
