import itertools
import random

import pytest

from twistedgl.automorphisms import StdAut
from twistedgl.field import field_of_order
from twistedgl.matrix import e12, e21, h_mat, random_gl, witness_x
from twistedgl.ring import Ring, RingAut, s_expansion
from twistedgl.twisted import (CASES, DetSubgroup, GroupMap, balls_disjoint, bounded_orbit_bfs, case_instance,
                               case_witnesses, certify_h0, certify_separation, default_generators,
                               det_subgroup_member, orbit_invariant, torsion_part, twist_act)


def R_(q, flavor):
    return Ring(field_of_order(q), flavor)


def test_twisted_action_is_an_action():
    R = R_(3, "laurent")
    rng = random.Random(0)
    phi = case_instance("rho-eps", R, 3)
    x = random_gl(R, 3, rng, 3)
    g, h = random_gl(R, 3, rng, 2), random_gl(R, 3, rng, 2)
    assert twist_act(phi, g * h, x) == twist_act(phi, g, twist_act(phi, h, x))


def test_orbit_product_is_conjugation_invariant():
    # y = g x phi(g^-1)  =>  prod(y) is conjugate to prod(x); compare traces
    R = R_(3, "poly")
    rng = random.Random(1)
    phi = case_instance("rho-eps", R, 3)
    r = phi.rho.order() * 2
    x = random_gl(R, 3, rng, 3)
    g = random_gl(R, 3, rng, 2)
    y = twist_act(phi, g, x)
    assert orbit_invariant(phi, y, r).trace() == orbit_invariant(phi, x, r).trace()


def test_fixed_point_orbit_product():
    R = R_(4, "laurent")
    phi = StdAut.ring_map(RingAut(R, 1), 3)
    x = witness_x(2, R, 3)
    assert orbit_invariant(phi, x, 2) == x ** 2


def test_swap_orbit_product():
    R = R_(3, "laurent")
    phi = case_instance("rho-eps", R, 3)
    r = phi.rho.order()
    for m in (1, 2):
        seed = e12(R, R.s_power(m), 3)
        assert orbit_invariant(StdAut(R, 3, None, phi.rho, None, True), seed, 2 * r) == witness_x(m, R, 3) ** r


@pytest.mark.parametrize("q", [2, 3, 4])
@pytest.mark.parametrize("flavor", ["poly", "laurent"])
@pytest.mark.parametrize("case", CASES)
def test_every_case_separates(q, flavor, case):
    R = R_(q, flavor)
    cert = certify_separation(case_instance(case, R, 3), case, range(1, 5))
    assert cert.separated, cert.notes
    r_eff = 1 if case in ("eps", "iota-h") else cert.r
    assert cert.s_degrees == [2 * r_eff * m for m in range(1, 5)]
    assert len(set(cert.traces)) == 4


def test_iota_h_trace_identity():
    R = R_(5, "poly")
    a = R.const(3)
    h = h_mat(R, a, 3)
    for m in (1, 2, 3):
        x = witness_x(m, R, 3)
        assert (x * h).trace() == R.const(0) + a + x.block(2).trace()


def test_certificate_rejects_wrong_shape():
    R = R_(3, "laurent")
    with pytest.raises(ValueError):
        certify_separation(case_instance("rho", R, 3), "rho-eps", [1, 2])
    with pytest.raises(ValueError):
        certify_separation(case_instance("rho", R, 3), "bogus", [1, 2])
    with pytest.raises(ValueError):
        certify_separation(case_instance("rho", R, 3), "rho", [0, 1])


def test_certificate_json():
    R = R_(2, "laurent")
    cert = certify_separation(case_instance("rho", R, 3), "rho", [1, 2, 3])
    data = cert.to_json()
    assert data["verdict"] == "separated"
    assert data["indices"] == [1, 2, 3] and len(data["traces"]) == 3


def test_generic_fixed_point_needs_order():
    R = R_(3, "laurent")
    phi = GroupMap.from_std(StdAut.ring_map(RingAut(R), 2))
    with pytest.raises(ValueError):
        certify_separation(phi, "fixed-point", [1, 2])
    phi.order = 1
    assert certify_separation(phi, "fixed-point", [1, 2]).separated


@pytest.mark.parametrize("q,flavor", [(2, "laurent"), (3, "poly")])
def test_bfs_balls_disjoint(q, flavor):
    R = R_(q, flavor)
    for case in ("rho", "rho-eps", "iota-h-rho"):
        phi = case_instance(case, R, 3)
        elems = case_witnesses(case, R, 3, [1, 2, 3])
        assert balls_disjoint(phi, elems, default_generators(R, 3), 2) == []


def test_bfs_ball_contains_twisted_conjugates():
    R = R_(2, "poly")
    phi = case_instance("eps", R, 3)
    gens = default_generators(R, 3)
    x = witness_x(1, R, 3)
    ball = bounded_orbit_bfs(phi, x, gens, 2)
    g = gens[0] * gens[1]
    assert twist_act(phi, g, x) in ball


def test_certify_h0_examples():
    R = R_(4, "poly")
    cert = certify_h0(3, R, 4, [1, 2])
    assert cert.separated and cert.r == 4 and cert.s_degrees == [8, 16]
    R3 = R_(3, "poly")
    cert = certify_h0(3, R3, 3, [1, 2], rho=RingAut(R3, 0, 1, 1))
    # 2de = 2 but t -> t + 1 has order 3, so the orbit uses N = 6
    assert cert.separated and cert.r == 6
    assert any("lcm" in n for n in cert.notes)


def test_certify_h0_over_extension():
    # s built over GF(2) inside GF(4): d = 2
    R = R_(4, "laurent")
    cert = certify_h0(3, R, 2, [1, 2], a0=R.elem((2,)))
    assert cert.separated and cert.r == 4


def brute_subgroup(R, gens, window=24):
    F = R.spec
    elems = {(1, 0)}
    frontier = [(1, 0)]
    steps = []
    for g in gens:
        lam, k = g.unit_decompose()
        steps += [(lam.code, k), (F.inv(lam.code), -k)]
    while frontier:
        nxt = []
        for a, k in frontier:
            for b, j in steps:
                c = (F.mul(a, b), k + j)
                if abs(c[1]) <= window and c not in elems:
                    elems.add(c)
                    nxt.append(c)
        frontier = nxt
    return elems


@pytest.mark.parametrize("q", [3, 4, 5, 7])
def test_det_subgroup_against_closure(q):
    R = R_(q, "laurent")
    rng = random.Random(q)
    for _ in range(12):
        gens = [R.elem((rng.randrange(1, q),), rng.randint(-3, 3)) for _ in range(rng.randint(1, 3))]
        D = DetSubgroup(R, gens)
        closure = brute_subgroup(R, gens)
        for lam in range(1, q):
            for k in range(-4, 5):
                assert D.contains_unit(R.elem((lam,), k)) == ((lam, k) in closure)
        tors = {c for c, k in closure if k == 0}
        assert D.torsion_order() == len(tors)


def test_det_subgroup_examples():
    R = R_(5, "laurent")
    D = DetSubgroup(R, [R.elem((2,), 1)])
    # <2t> meets F^x trivially
    assert D.torsion_order() == 1 and D.t_step() == 1
    D = DetSubgroup(R, [R.elem((2,), 2), R.elem((3,), 2)])
    # (2t^2)/(3t^2) = 4 has order 2
    assert D.torsion_order() == 2 and torsion_part(D).torsion_order() == 2
    g = h_mat(R, R.elem((4,)), 2)
    assert det_subgroup_member(D, g)
