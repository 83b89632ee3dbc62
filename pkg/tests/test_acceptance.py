"""Acceptance criteria 1-11, exact arithmetic throughout.

Each test records one PASS/FAIL line; the lines are printed at the end of the
pytest run (see conftest.py) and by ``python tests/test_acceptance.py``.
"""
import itertools
import random
import sys
import time
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent))

from twistedgl.amalgam import (AmalgamWord, ReinerMap, edge_elements, edge_shuffle, element_length,
                               lemma_length_parity, nagao_decompose, nagao_spec, random_word, reiner_apply,
                               reiner_apply_word, reiner_valid)
from twistedgl.automorphisms import UnitCharacter, _unit_character_from_values, contragredient, homothety_injective
from twistedgl.field import field_of_order
from twistedgl.gl2_laurent import (GammaGroup, aut_order, compose_realized, compose_types, fixed_subgroup_check,
                                   generator_decompose, laurent_ring, order_bound, realized_family, realized_image,
                                   separation_report, type_of)
from twistedgl.matrix import (Mat, e12, elem_as_commutator, elem_as_commutator_sl2, elementary, random_gl,
                              swap_u, trace_power, witness_x)
from twistedgl.ring import Ring, all_ring_auts, s_expansion
from twistedgl.automorphisms import StdAut
from twistedgl.twisted import (CASES, GroupMap, balls_disjoint, case_instance, case_witnesses,
                               certify_separation, default_generators)
from oracles import NaiveGF, homothety_kernel_scan

RESULTS = {}

FLAVORS = ("poly", "laurent")


def record(n, ok, detail):
    line = f"criterion {n:>2}: {'PASS' if ok else 'FAIL'}  {detail}"
    RESULTS[n] = line
    print(line)
    assert ok, line


def ring(q, flavor):
    return Ring(field_of_order(q), flavor)


# 1 -------------------------------------------------------------------------------

def test_criterion_01_trace_separation():
    t0 = time.perf_counter()
    bad = []
    count = cross = 0
    for q in (2, 3, 4):
        for flavor in FLAVORS:
            R = ring(q, flavor)
            p = R.spec.p
            everything = {}
            for r in range(1, 7):
                seen = {}
                for m in range(1, 9):
                    tr = trace_power(m, r, R)
                    c = s_expansion(tr)
                    count += 1
                    if c is None or len(c) - 1 != 2 * r * m or c[-1] != (-1) ** r % p:
                        bad.append((q, flavor, m, r))
                    if tr in seen:
                        bad.append((q, flavor, m, r, "equal to", seen[tr]))
                    seen[tr] = m
                    # across different r only Frobenius coincidences tr(x_m^(pr)) = tr(x_(pm)^r) occur
                    other = everything.get(tr)
                    if other is not None:
                        cross += 1
                        if other[0] * other[1] != m * r:
                            bad.append((q, flavor, m, r, "cross", other))
                    everything[tr] = (m, r)
    dt = time.perf_counter() - t0
    record(1, not bad and dt < 10,
           f"{count} traces, degree 2rm and lead (-1)^r, distinct in m for each r, {dt:.2f}s "
           f"({cross} cross-r coincidences, all with equal rm)")


# 2 -------------------------------------------------------------------------------

def test_criterion_02_recurrence_vs_powers():
    bad = 0
    count = 0
    for q in (2, 3, 4):
        for flavor in FLAVORS:
            R = ring(q, flavor)
            for m in range(1, 9):
                x = witness_x(m, R)
                acc = x
                for r in range(1, 7):
                    count += 1
                    if trace_power(m, r, R) != acc.trace():
                        bad += 1
                    acc = acc * x
    record(2, bad == 0, f"{count} recurrence values equal the traces of explicit powers")


# 3 -------------------------------------------------------------------------------

def _seq(*fs):
    def run(x):
        for f in reversed(fs):
            x = f(x)
        return x
    return run


def _random_character(R, n, rng):
    F = R.spec
    k = rng.randrange(F.q - 1) if F.q > 2 else 0
    c = rng.randrange(1, F.q) if R.laurent else 1
    m = rng.choice((0, -1)) if (R.laurent and n == 2) else 0
    return UnitCharacter(R, k, c, m, raw=True)


def _relation_instances(R, n, rng):
    rho = rng.choice(all_ring_auts(R))
    g = random_gl(R, n, rng, 3)
    chi = _random_character(R, n, rng)
    x = random_gl(R, n, rng, 4)
    rho_m = lambda a: a.map_entries(rho)
    eps = contragredient
    iota = lambda h: (lambda a: h * a * h.inverse())
    mu = lambda ch: (lambda a: a * ch(a))
    eta_fn = lambda d: rho.inverse()(chi.on_unit(rho(d)))
    eta = _unit_character_from_values(R, eta_fn(R.elem((R.spec.generator,))),
                                      eta_fn(R.t()) if R.laurent else R.one())
    neg_chi = lambda a: a * chi(a).inverse()
    return {
        "i": (_seq(rho_m, iota(g))(x), _seq(iota(g.map_entries(rho)), rho_m)(x)),
        "ii": (_seq(eps, rho_m)(x), _seq(rho_m, eps)(x)),
        "iii": (_seq(eps, iota(g))(x), _seq(iota(eps(g)), eps)(x)),
        "iv": (_seq(mu(chi), rho_m)(x), _seq(rho_m, mu(eta))(x)),
        "v": (_seq(neg_chi, eps)(x), _seq(eps, lambda a: a * chi(eps(a)))(x)),
    }


def test_criterion_03_commutation_relations():
    fails = {k: 0 for k in ("i", "ii", "iii", "iv", "v")}
    total = 0
    for q in (2, 3, 4):
        for n in (2, 3):
            rng = random.Random(1000 * q + n)
            for j in range(200):
                R = ring(q, FLAVORS[j % 2])
                for name, (lhs, rhs) in _relation_instances(R, n, rng).items():
                    if lhs != rhs:
                        fails[name] += 1
                total += 1
    record(3, not any(fails.values()),
           f"relations (i)-(v) on {total} instances each (q 2,3,4; n 2,3; both rings), failures {fails}")


# 4 -------------------------------------------------------------------------------

def test_criterion_04_case_analysis():
    failed, notes, hits_total, runs = [], set(), 0, 0
    for q in (2, 3):
        for flavor in FLAVORS:
            R = ring(q, flavor)
            gens = default_generators(R, 3)
            for case in CASES:
                phi = case_instance(case, R, 3)
                cert = certify_separation(phi, case, range(1, 7))
                runs += 1
                if not cert.separated:
                    failed.append((q, flavor, case))
                notes.update(n for n in cert.notes if n.startswith("degenerate"))
                hits = balls_disjoint(phi, case_witnesses(case, R, 3, range(1, 7)), gens, 3)
                hits_total += len(hits)
    detail = f"{runs} certificates separated, BFS radius 3 collisions {hits_total}"
    if notes:
        detail += f"; degenerate instances noted: {sorted(notes)}"
    record(4, not failed and hits_total == 0, detail)


# 5 -------------------------------------------------------------------------------

def _random_bounded_gl2(R, rng, max_deg=5):
    while True:
        g = random_gl(R, 2, rng, rng.randint(1, 6), 2)
        if max(x.degree() for row in g.rows for x in row) <= max_deg:
            return g


def test_criterion_05_nagao_roundtrip():
    bad = 0
    count = 0
    for q in (2, 3, 4):
        R = ring(q, "poly")
        spec = nagao_spec(R)
        edges = edge_elements(R)
        rng = random.Random(q)
        for _ in range(500):
            g = _random_bounded_gl2(R, rng)
            w = nagao_decompose(g)
            tags = w.tags
            alternating = all(a != b for a, b in zip(tags, tags[1:])) and w.is_weakly_reduced()
            s = edge_shuffle(w, edges, rng)
            ok = (w.product() == g and alternating and s.product() == g and s.length == w.length
                  and s.is_weakly_reduced() and element_length(s.product(), spec) == w.length)
            bad += not ok
            count += 1
    record(5, bad == 0, f"{count} matrices (deg <= 5, q 2,3,4) round trip, alternate, keep length under shuffles")


# 6 -------------------------------------------------------------------------------

def test_criterion_06_length_dichotomy():
    t0 = time.perf_counter()
    counts = {}
    rng = random.Random(2024)
    for i in range(1000):
        q = (2, 3)[i % 2]
        spec = nagao_spec(ring(q, "poly"))
        k = rng.randint(2, 4)
        m = 2 * rng.randint(1, 3)
        z = random_word(spec, rng, k, first=(k + 1) % 2)
        x = random_word(spec, rng, m, first=rng.randrange(2))
        w = random_word(spec, rng, k, first=0)
        verdict, _ = lemma_length_parity(z, x, w)
        counts[verdict] = counts.get(verdict, 0) + 1
    dt = time.perf_counter() - t0
    ok = counts.get("violation", 0) == 0 and counts.get("hypothesis", 0) == 0 and dt < 30
    record(6, ok, f"1000 triples: {dict(sorted(counts.items()))}, {dt:.2f}s")


# 7 -------------------------------------------------------------------------------

def _z_sample(R):
    """Every weakly reduced word of length <= 3 over finite factor pools:
    all of GL2(F) outside B0 and the shears e12(a t + b), a != 0."""
    F = R.spec
    spec = nagao_spec(R)
    consts = [R.elem((c,)) for c in range(F.q)]
    p0 = [Mat(R, [[a, b], [c, d]]) for a, b, c, d in itertools.product(consts, repeat=4)
          if c and (a * d - b * c)]
    p1 = [e12(R, R.t().scale(a) + R.elem((b,))) for a in range(1, F.q) for b in range(F.q)]
    out = list(edge_elements(R))
    for length in (1, 2, 3):
        for first in (0, 1):
            pools = [(p0, p1)[(first + i) % 2] for i in range(length)]
            for combo in itertools.product(*pools):
                acc = combo[0]
                for m in combo[1:]:
                    acc = acc * m
                out.append(acc)
    return out, spec


def test_criterion_07_factor_preserving():
    R = ring(2, "poly")
    zs, spec = _z_sample(R)
    g0, g1 = swap_u(R), e12(R, R.t())
    xs = {r: (g0 * g1) ** r for r in range(1, 7)}
    psis = {
        "rho t->t+1": StdAut.ring_map(all_ring_auts(R)[1], 2),
        "reiner": GroupMap.from_reiner(ReinerMap(R, 2, [R.t() + R.t() ** 2, R.t() ** 2])),
    }
    assert not all_ring_auts(R)[1].is_identity()
    collisions = 0
    lengths_ok = all(element_length(x, spec) == 2 * r for r, x in xs.items())
    checked = 0
    for name, psi in psis.items():
        for z in zs:
            pz = psi(z.inverse())
            for r, x in xs.items():
                y = z * x * pz
                ly = element_length(y, spec)
                checked += 1
                if ly % 2 == 0 and ly != 2 * r:
                    collisions += 1
                if any(y == xs[s] for s in xs if s != r):
                    collisions += 1
    record(7, lengths_ok and collisions == 0,
           f"l(x_r) = 2r for r <= 6; {len(zs)} z per map, {checked} twisted conjugates, collisions {collisions}")


# 8 -------------------------------------------------------------------------------

def test_criterion_08_reiner():
    R = ring(3, "poly")
    F = R.spec
    nu = ReinerMap(R, 3, [R.t() + R.t() ** 2, R.t() ** 2 + R.t() ** 3, R.t() ** 3])
    assert reiner_valid(nu)
    rng = random.Random(8)
    hom_bad = 0
    for _ in range(200):
        a, b = random_gl(R, 2, rng, 4), random_gl(R, 2, rng, 4)
        hom_bad += reiner_apply(nu, a * b) != reiner_apply(nu, a) * reiner_apply(nu, b)
    consts = [R.elem((c,)) for c in range(F.q)]
    g0 = [Mat(R, [[a, b], [c, d]]) for a, b, c, d in itertools.product(consts, repeat=4) if a * d - b * c]
    id_bad = sum(reiner_apply(nu, g) != g for g in g0)
    shear_bad = 0
    for _ in range(100):
        f = R.random(rng, 6)
        shear_bad += reiner_apply(nu, e12(R, f)) != e12(R, nu(f))
    edges = edge_elements(R)
    dec_bad = 0
    for _ in range(100):
        a, b = random_gl(R, 2, rng, 3), random_gl(R, 2, rng, 3)
        g = a * b
        raw = AmalgamWord(nagao_decompose(a).factors + nagao_decompose(b).factors, nagao_spec(R))
        shuffled = edge_shuffle(nagao_decompose(g), edges, rng)
        dec_bad += not (reiner_apply_word(nu, raw) == reiner_apply(nu, g) == reiner_apply_word(nu, shuffled))
    ok = hom_bad == id_bad == shear_bad == dec_bad == 0
    record(8, ok, f"homomorphism 200 pairs, identity on all {len(g0)} of GL2(F_3), shears 100, "
                  f"decomposition independence 100; failures {hom_bad + id_bad + shear_bad + dec_bad}")


# 9 -------------------------------------------------------------------------------

def test_criterion_09_commutators():
    R2 = ring(2, "poly")
    bad = 0
    n3 = 0
    for coeffs in itertools.product(range(2), repeat=5):
        x = R2.elem(coeffs)
        for i, j in itertools.permutations(range(1, 4), 2):
            bad += elem_as_commutator(i, j, x, 3, R2).evaluate() != elementary(R2, i, j, x, 3)
            n3 += 1
    R4 = ring(4, "poly")
    n2 = 0
    for coeffs in itertools.product(range(4), repeat=5):
        x = R4.elem(coeffs)
        bad += elem_as_commutator_sl2(x, R4).evaluate() != e12(R4, x)
        n2 += 1
    record(9, bad == 0, f"{n3} elementary commutators over F_2 (n=3), {n2} SL2 words over F_4; failures {bad}")


# 10 ------------------------------------------------------------------------------

def test_criterion_10_gl2_laurent():
    t0 = time.perf_counter()
    problems = []
    # generator words
    rng = random.Random(10)
    for i in range(200):
        R = laurent_ring(field_of_order((2, 3, 4)[i % 3]))
        while True:
            g = random_gl(R, 2, rng, rng.randint(1, 4), 2)
            if max(x.span() for row in g.rows for x in row) <= 6:
                break
        if generator_decompose(g).evaluate() != g:
            problems.append("generator word")
    sizes = {}
    pairs = 0
    for q in (2, 3, 4):
        F = field_of_order(q)
        R = laurent_ring(F)
        G = GammaGroup(F)
        sizes[q] = len(G)
        if len(G) != (q - 1) ** 2 * 8 * F.e or not all(G.check_axioms().values()):
            problems.append(f"gamma q={q}")
        fam = realized_family(R)
        if not realized_image(R, fam)["injective"]:
            problems.append(f"injectivity q={q}")
        for a, pa in fam.items():
            for b, pb in fam.items():
                pairs += 1
                if type_of(compose_realized(pa, pb), R, check=False) != compose_types(F, a, b):
                    problems.append(f"compose q={q} {a} {b}")
        for t, phi in fam.items():
            if order_bound(F, t) % aut_order(phi):
                problems.append(f"order bound q={q} {t}")
            if t.eps == -1:
                K = 6
                rep = fixed_subgroup_check(phi, K, 200 if t.phi0[1] == 0 else 0, seed=q, ring=R)
                if not rep["ok"]:
                    problems.append(f"fixed subgroup q={q} {t}")
                if separation_report(phi, range(1, 9))["verdict"] != "separated":
                    problems.append(f"separation q={q} {t}")
    for q in (5,):
        G = GammaGroup(field_of_order(q))
        if not all(G.check_axioms().values()):
            problems.append("gamma q=5")
    dt = time.perf_counter() - t0
    record(10, not problems,
           f"200 generator words; |Gamma| {sizes}; {pairs} realized pairs compose; order bounds; "
           f"fixed subgroups and separations for eps = -1; {dt:.1f}s"
           + (f"; problems {problems[:5]}" if problems else ""))


# 11 ------------------------------------------------------------------------------

def test_criterion_11_homothety_injectivity():
    checked = disagreements = 0
    for q in (3, 4, 5):
        for flavor in FLAVORS:
            R = ring(q, flavor)
            F = R.spec
            N = NaiveGF(F.p, F.modulus)
            for n in (2, 3):
                ms = (0, -1) if (R.laurent and n == 2) else (0,)
                cs = range(1, q) if R.laurent else (1,)
                for k, c, m in itertools.product(range(q - 1), cs, ms):
                    chi = UnitCharacter(R, k, c, m, raw=True)
                    ok, _ = homothety_injective(chi, n)
                    hits = homothety_kernel_scan(N, n, k, tuple(F.to_vec(c)), m, R.laurent)
                    checked += 1
                    disagreements += ok != (not hits)
    record(11, disagreements == 0, f"{checked} characters agree with the central kernel scan")


if __name__ == "__main__":
    failures = 0
    for name, fn in sorted(globals().items()):
        if name.startswith("test_criterion_"):
            try:
                fn()
            except AssertionError:
                failures += 1
    sys.exit(1 if failures else 0)
