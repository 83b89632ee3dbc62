"""Automorphisms of GL2(F_q[t, t^-1]) that stabilise the diagonal torus.

``G0 = GL2(F_q)``, ``T0`` its diagonal subgroup, ``u`` the antidiagonal swap.
An automorphism ``phi`` with ``phi(G0) = G0`` and ``phi(T) = T`` has a type
``(h, eps, u^i)`` read off from ``phi(diag(t, 1))``, plus the class ``phi0``
of its restriction to G0 among ``frob^k o eps^b``.
"""
from __future__ import annotations

import itertools
import math
import random as _random
from dataclasses import dataclass

from .automorphisms import StdAut, UnitCharacter, std_compose
from .field import FieldSpec, FqElem
from .matrix import Mat, diagonal, e12, e21, swap_u
from .ring import LAURENT, Ring, RingAut, RingElem
from .twisted import GroupMap


def laurent_ring(spec: FieldSpec) -> Ring:
    return Ring(spec, LAURENT)


def delta_t(ring: Ring, power: int = 1) -> Mat:
    """``diag(t^power, 1)``."""
    return diagonal(ring, ring.mono(1, power), ring.one())


# -- generator words --------------------------------------------------------------

class GeneratorWord:
    """Tokens ``("G", m)`` with ``m`` in GL2(F_q) or ``("T", +-1)`` for ``diag(t, 1)^(+-1)``."""

    def __init__(self, tokens, ring: Ring):
        self.tokens = list(tokens)
        self.ring = ring

    def __len__(self):
        return len(self.tokens)

    def evaluate(self) -> Mat:
        acc = Mat.identity(self.ring, 2)
        T = delta_t(self.ring)
        Tinv = delta_t(self.ring, -1)
        for kind, val in self.tokens:
            if kind == "G":
                acc = acc * val
            else:
                acc = acc * (T if val == 1 else Tinv)
        return acc

    def __repr__(self):
        parts = []
        for kind, val in self.tokens:
            parts.append(repr(val) if kind == "G" else ("T" if val == 1 else "T^-1"))
        return "GeneratorWord(" + " . ".join(parts) + ")"

    def to_json(self):
        return [{"G": v.to_json()} if k == "G" else {"T": v} for k, v in self.tokens]


def _const_mat(ring, rows):
    return Mat(ring, [[ring.elem((c,)) for c in r] for r in rows])


def _tokens_e12(ring: Ring, f: RingElem):
    """``e12(f)`` as ``prod_k T^k e12(c_k) T^-k``."""
    out = []
    for k, c in f.terms():
        out += [("T", k)]
        out.append(("G", e12(ring, ring.elem((c,)))))
        out += [("T", -k)]
    return out


def _tokens_diag(ring: Ring, a: RingElem, d: RingElem):
    """``diag(lam t^i, mu t^j) = diag(lam, mu) T^i (u T u)^j``."""
    (lam, i), (mu, j) = a.unit_decompose(), d.unit_decompose()
    u = swap_u(ring)
    out = [("G", diagonal(ring, ring.elem((lam.code,)), ring.elem((mu.code,)))), ("T", i)]
    if j:
        out += [("G", u), ("T", j), ("G", u)]
    return out


def _normalize_tokens(ring: Ring, tokens):
    """Merge neighbouring G0 tokens and T powers, then expand powers to +-1."""
    merged = []
    for kind, val in tokens:
        if kind == "T" and val == 0:
            continue
        if merged and merged[-1][0] == kind:
            prev = merged.pop()[1]
            val = prev * val if kind == "G" else prev + val
            if (kind == "G" and val.is_identity()) or (kind == "T" and val == 0):
                continue
        elif kind == "G" and val.is_identity():
            continue
        merged.append((kind, val))
    out = []
    for kind, val in merged:
        if kind == "T":
            out += [("T", 1 if val > 0 else -1)] * abs(val)
        else:
            out.append((kind, val))
    return out


def generator_decompose(g: Mat) -> GeneratorWord:
    """Write ``g`` in GL2(F_q[t, t^-1]) over ``GL2(F_q)`` and ``diag(t, 1)``."""
    ring = g.ring
    if not ring.laurent or g.n != 2:
        raise ValueError("generator words are for 2 x 2 matrices over the Laurent ring")
    if not g.det().is_unit():
        raise ValueError("not in GL_2(A): determinant is not a unit")
    u = swap_u(ring)
    tokens = []
    m = g
    # Euclid on the first column with the span as measure
    while m.rows[1][0]:
        a, c = m.rows[0][0], m.rows[1][0]
        if a and a.span() >= c.span():
            quo = a.divmod(c)[0]
            m = e12(ring, -quo) * m
            tokens += _tokens_e12(ring, quo)
        else:
            m = u * m
            tokens.append(("G", u))
    a, b, d = m.rows[0][0], m.rows[0][1], m.rows[1][1]
    tokens += _tokens_diag(ring, a, d)
    tokens += _tokens_e12(ring, a.inverse() * b)
    return GeneratorWord(_normalize_tokens(ring, tokens), ring)


# -- G0 data ------------------------------------------------------------------

def g0_elements(ring: Ring):
    F = ring.spec
    out = []
    for a, b, c, d in itertools.product(range(F.q), repeat=4):
        if F.sub(F.mul(a, d), F.mul(b, c)):
            out.append(_const_mat(ring, [[a, b], [c, d]]))
    return out


def g0_generators(ring: Ring):
    """Generators of GL2(F_q): ``diag(z, 1)``, ``e12(1)``, ``e12(w)``, ``u``."""
    F = ring.spec
    gens = [e12(ring, ring.one()), swap_u(ring)]
    if F.q > 2:
        gens.append(diagonal(ring, ring.elem((F.generator,)), ring.one()))
    if F.e > 1:
        gens.append(e12(ring, ring.elem((F.generator,))))
    return gens


def probe_generators(ring: Ring):
    return g0_generators(ring) + [delta_t(ring)]


def phi0_candidate(ring: Ring, label):
    """``frob^k o eps^b`` as a StdAut on 2 x 2 matrices."""
    k, b = label
    return StdAut(ring, 2, None, RingAut(ring, k), None, bool(b))


def phi0_labels(spec: FieldSpec):
    return [(k, b) for k in range(spec.e) for b in (0, 1)]


def phi0_compose(l1, l2, e: int):
    """Label of ``l1 o l2``; Frobenius and eps commute."""
    return ((l1[0] + l2[0]) % e, (l1[1] + l2[1]) % 2)


# -- types and the group Gamma ------------------------------------------------------

@dataclass(frozen=True)
class AutType:
    """Type ``(h, eps, u^i)`` with ``h = diag(alpha, beta)`` (field codes) and
    the G0 class ``phi0 = (frob_exp, eps_flag)``."""
    h: tuple
    eps: int
    i: int
    phi0: tuple

    def to_json(self, spec: FieldSpec = None):
        h = list(self.h) if spec is None else [list(spec.to_vec(c)) for c in self.h]
        return {"h": h, "eps": self.eps, "i": self.i, "phi0": list(self.phi0)}


GammaElem = AutType


def _act_phi0(spec: FieldSpec, label, h):
    """Action of ``frob^k o eps^b`` on ``diag(alpha, beta)``."""
    k, b = label
    a, c = h
    if b:
        a, c = spec.inv(a), spec.inv(c)
    return (spec.frob(a, k), spec.frob(c, k))


def compose_types(spec: FieldSpec, psi: AutType, phi: AutType) -> AutType:
    """Type of ``psi o phi``.

    The factor from ``psi`` is inverted when ``phi`` has ``eps = -1`` and
    conjugated by u (entries swapped) when ``phi`` has the u-flag; the
    factor from ``phi`` is moved through ``psi0``.
    """
    g = psi.h
    if phi.eps == -1:
        g = (spec.inv(g[0]), spec.inv(g[1]))
    if phi.i == 1:
        g = (g[1], g[0])
    ph = _act_phi0(spec, psi.phi0, phi.h)
    x = (spec.mul(g[0], ph[0]), spec.mul(g[1], ph[1]))
    return AutType(x, psi.eps * phi.eps, (psi.i + phi.i) % 2, phi0_compose(psi.phi0, phi.phi0, spec.e))


def gamma_elements(spec: FieldSpec):
    units = range(1, spec.q)
    return [AutType((a, b), eps, i, lab)
            for a in units for b in units for eps in (1, -1) for i in (0, 1)
            for lab in phi0_labels(spec)]


def gamma_identity(spec: FieldSpec) -> AutType:
    return AutType((1, 1), 1, 0, (0, 0))


class GammaGroup:
    """The finite group of types under the composition law, with its table."""

    def __init__(self, spec: FieldSpec):
        self.spec = spec
        self.elements = gamma_elements(spec)
        self.index = {x: i for i, x in enumerate(self.elements)}
        n = len(self.elements)
        self.table = [[self.index[compose_types(spec, a, b)] for b in self.elements] for a in self.elements]
        self.identity = self.index[gamma_identity(spec)]

    def __len__(self):
        return len(self.elements)

    def mul(self, i, j):
        return self.table[i][j]

    def check_axioms(self):
        """Closure, identity, inverses and associativity, exhaustively."""
        n = len(self.elements)
        e = self.identity
        report = {"order": n, "closure": True, "identity": True, "inverses": True, "associative": True}
        report["identity"] = all(self.table[e][i] == i and self.table[i][e] == i for i in range(n))
        report["inverses"] = all(any(self.table[i][j] == e and self.table[j][i] == e for j in range(n))
                                 for i in range(n))
        T = self.table
        for a in range(n):
            Ta = T[a]
            for b in range(n):
                ab = Ta[b]
                Tab, Tb = T[ab], T[b]
                for c in range(n):
                    if Tab[c] != Ta[Tb[c]]:
                        report["associative"] = False
                        return report
        return report

    def to_json(self):
        spec = self.spec
        return {"order": len(self.elements),
                "elements": [x.to_json(spec) for x in self.elements],
                "table": self.table}


def gamma_group_build(spec: FieldSpec) -> GammaGroup:
    return GammaGroup(spec)


# -- realized automorphisms ------------------------------------------------------

def build_realized_aut(ring: Ring, t: AutType) -> GroupMap:
    """A closed-form automorphism of the given type.

    ``phi = mu_chi o rho o eps^b`` with ``rho = frob^k, t -> lam t^e`` and
    ``chi(lam' t^j) = c^j t^(m j)``, ``m = 0`` (no u-flag) or ``-1`` (u-flag).
    With ``sigma = (-1)^b`` this has ``h = diag(c^(e sigma) lam^sigma, c^(e sigma))``
    and type sign ``e sigma`` (``m = 0``) or ``-e sigma`` (``m = -1``).
    """
    F = ring.spec
    k, b = t.phi0
    sigma = -1 if b else 1
    e_ring = t.eps * sigma if t.i == 0 else -t.eps * sigma
    alpha, beta = t.h
    if not (0 < alpha < F.q and 0 < beta < F.q):
        raise ValueError("h must lie in T0")
    if t.eps not in (1, -1) or t.i not in (0, 1) or not (0 <= k < F.e and b in (0, 1)):
        raise ValueError("realizability unknown: parameters outside the closed-form family")
    c = F.pow(beta, e_ring * sigma)
    lam = F.pow(F.div(alpha, beta), sigma)
    # rho = frob^k then t -> lam' t^e; our RingAut applies frob to scalars and t -> a t^e
    rho = RingAut(ring, k, lam, 0, e_ring, raw=True)
    chi = UnitCharacter(ring, 0, c, -1 if t.i else 0, raw=True)
    std = StdAut(ring, 2, chi, rho, None, bool(b))
    phi = GroupMap(std, _type_label(F, t), None, std)
    phi.order = aut_order(phi, ring)
    return phi


def _type_label(F, t):
    a, b = (F.to_vec(c) for c in t.h)
    return f"type(diag({a},{b}),{t.eps:+d},u^{t.i};frob^{t.phi0[0]}{'*eps' if t.phi0[1] else ''})"


def realized_family(ring: Ring):
    return {t: build_realized_aut(ring, t) for t in gamma_elements(ring.spec)}


def compose_realized(psi: GroupMap, phi: GroupMap) -> GroupMap:
    std = std_compose(psi.data, phi.data)
    return GroupMap(std, f"{psi.label} o {phi.label}", None, std)


def decomposition_independent(phi, g: Mat) -> bool:
    """``phi(g)`` equals the product of ``phi`` over a generator word of ``g``."""
    ring = g.ring
    acc = Mat.identity(ring, 2)
    T, Tinv = phi(delta_t(ring)), phi(delta_t(ring, -1))
    for kind, val in generator_decompose(g).tokens:
        acc = acc * (phi(val) if kind == "G" else (T if val == 1 else Tinv))
    return acc == phi(g)


def realized_image(ring: Ring, family=None):
    """Types of the realized family, checked to be pairwise distinct maps on
    the generators."""
    family = family or realized_family(ring)
    probes = probe_generators(ring)
    seen = {}
    for t, phi in family.items():
        seen.setdefault(tuple(phi(x) for x in probes), []).append(t)
    injective = all(len(v) == 1 for v in seen.values())
    return {"types": [type_of(phi, ring) for phi in family.values()], "injective": injective}


def separation_report(phi, indices=range(1, 9), q: int = None):
    """Certificate for a realized map with ``eps = -1``.

    ``phi0`` of Frobenius type fixes every ``x_m``; with the contragredient
    it swaps ``e12(s^m)`` and ``e21(-s^m)``.  Types with ``eps = +1`` are
    left to the determinant quotient and not machine-checked here.
    """
    from .twisted import certify_separation
    ring = phi.data.ring
    t = type_of(phi, ring)
    if t.eps == 1:
        return {"type": t.to_json(ring.spec), "verdict": "separated via abelian quotient (not machine-checked)"}
    case = "unipotent-swap" if t.phi0[1] else "fixed-point"
    cert = certify_separation(phi, case, list(indices), q=q)
    out = cert.to_json()
    out["type"] = t.to_json(ring.spec)
    return out


# -- reading types -------------------------------------------------------------

class _Phi0Table:
    def __init__(self, ring):
        self.probes = g0_generators(ring)
        self.labels = phi0_labels(ring.spec)
        self.images = {lab: [phi0_candidate(ring, lab)(x) for x in self.probes] for lab in self.labels}
        self.elements = None

    def classify(self, ring, imgs):
        for lab in self.labels:
            if self.images[lab] == imgs:
                return lab, None
        # up to an inner automorphism of G0
        if self.elements is None:
            self.elements = g0_elements(ring)
        for g in self.elements:
            ginv = g.inverse()
            for lab in self.labels:
                if all(g * y * ginv == z for y, z in zip(self.images[lab], imgs)):
                    return lab, g
        return None, None


_PHI0_TABLES = {}


def _phi0_table(ring):
    tab = _PHI0_TABLES.get(ring)
    if tab is None:
        tab = _PHI0_TABLES[ring] = _Phi0Table(ring)
    return tab


def type_of(phi, ring: Ring = None, check: bool = True) -> AutType:
    """Read the type of ``phi`` from ``phi(diag(t, 1))`` and its action on G0."""
    if ring is None:
        ring = phi.data.ring
    F = ring.spec
    img = phi(delta_t(ring))
    if check:
        others = [phi(diagonal(ring, ring.one(), ring.t()))]
        if F.q > 2:
            z = ring.elem((F.generator,))
            others.append(phi(diagonal(ring, z, ring.one())))
        if not all(m.is_diagonal() for m in [img] + others):
            raise ValueError("automorphism does not stabilize the diagonal torus")
    if not img.is_diagonal():
        raise ValueError("does not stabilize T in normalized form")
    ua = img.rows[0][0].unit_decompose()
    ub = img.rows[1][1].unit_decompose()
    if ua is None or ub is None:
        raise ValueError("does not stabilize T in normalized form")
    (alpha, a), (beta, b) = ua, ub
    if b == 0 and a in (1, -1):
        eps, i = a, 0
    elif a == 0 and b in (1, -1):
        eps, i = b, 1
    else:
        raise ValueError("does not stabilize T in normalized form")
    tab = _phi0_table(ring)
    imgs = [phi(x) for x in tab.probes]
    if not all(m.is_constant() for m in imgs):
        raise ValueError("automorphism does not stabilize GL2(F_q)")
    lab, _ = tab.classify(ring, imgs)
    if lab is None:
        raise ValueError("restriction to GL2(F_q) matches no candidate class")
    return AutType((alpha.code, beta.code), eps, i, lab)


# -- orders ----------------------------------------------------------------

def aut_order(phi, ring: Ring = None, limit: int = 100_000) -> int:
    """Least ``n`` with ``phi^n`` fixing ``G0`` generators and ``diag(t, 1)``."""
    if ring is None:
        ring = phi.data.ring
    order = 1
    for x in probe_generators(ring):
        y = phi(x)
        n = 1
        while y != x:
            y = phi(y)
            n += 1
            if n > limit:
                raise ValueError("order bound exceeded")
        order = order * n // math.gcd(order, n)
    return order


def _t0_order(spec: FieldSpec, label) -> int:
    """Order of ``phi0`` restricted to T0 (a permutation of a finite set)."""
    best = 1
    for a in range(1, spec.q):
        for b in range(1, spec.q):
            h = (a, b)
            cur = _act_phi0(spec, label, h)
            n = 1
            while cur != h:
                cur = _act_phi0(spec, label, cur)
                n += 1
            best = best * n // math.gcd(best, n)
    return best


def _label_order(spec: FieldSpec, label) -> int:
    k, b = label
    ok = spec.e // math.gcd(spec.e, k) if k else 1
    return ok * (2 if b else 1) // math.gcd(ok, 2 if b else 1)


def order_bound(spec: FieldSpec, t: AutType) -> int:
    """Multiple of the order from the finite-order argument.

    For types ``(v, 1, 0)`` the bound is ``k (r + q - 2)`` with ``k`` the order
    of ``phi0`` and ``r`` the order of ``phi0`` on T0.  Other types are first
    squared, which lands in that shape, and the bound is doubled.
    """
    if t.eps == 1 and t.i == 0:
        k = _label_order(spec, t.phi0)
        r = _t0_order(spec, t.phi0)
        return k * (r + spec.q - 2)
    sq = compose_types(spec, t, t)
    return 2 * order_bound(spec, sq)


# -- fixed subgroups --------------------------------------------------------

def _e_k(ring, k, q, lower=False):
    f = ring.mono(1, (q - 1) * k)
    return e21(ring, f) if lower else e12(ring, f)


def random_fp_s_word(ring: Ring, rng, length: int = 6, max_s: int = 3) -> Mat:
    """Random product of generators of GL2(F_p[s])."""
    F = ring.spec
    p = F.p
    gens = [swap_u(ring), e21(ring, ring.one())]
    if p > 2:
        gens.append(diagonal(ring, ring.const(_prime_root(p)), ring.one()))
    acc = Mat.identity(ring, 2)
    for _ in range(length):
        if rng.random() < 0.5:
            c = rng.randrange(1, p)
            j = rng.randint(0, max_s)
            acc = acc * e12(ring, ring.s_power(j).scale(c))
        else:
            acc = acc * rng.choice(gens)
    return acc


def _prime_root(p):
    for g in range(1, p):
        if all(pow(g, (p - 1) // d, p) != 1 for d in range(2, p) if (p - 1) % d == 0 and _isprime(d)):
            return g
    return 1


def _isprime(n):
    return n > 1 and all(n % d for d in range(2, int(n ** 0.5) + 1))


def fixed_subgroup_check(phi, K: int = 6, samples: int = 200, seed: int = 0, ring: Ring = None):
    """Check the fixed-subgroup identities for a type with ``eps = -1``.

    ``phi0 = frob^k``: ``phi(e_k) = e_-k`` (no u-flag) or ``phi(e_k) = e_k``
    (u-flag), ``e_k e_-k = e12(t^((q-1)k) + t^((1-q)k))`` is fixed, and
    random elements of GL2(F_p[s]) are fixed.
    ``phi0 = frob^k o eps``: ``phi(e12(s^k)) = e21(-s^k)`` and
    ``phi(e21(s^k)) = e12(-s^k)``.
    """
    if ring is None:
        ring = phi.data.ring
    t = type_of(phi, ring)
    if t.eps != -1:
        raise ValueError("fixed-subgroup check is for types with eps = -1")
    q = ring.spec.q
    report = {"type": t.to_json(ring.spec), "checks": {}, "ok": True}

    def record(name, ok):
        report["checks"][name] = bool(ok)
        report["ok"] = report["ok"] and bool(ok)

    if t.phi0[1] == 0:
        shape = "u" if t.i else "1"
        report["shape"] = f"(h,-1,{shape})"
        for k in range(-K, K + 1):
            if k == 0:
                continue
            target = _e_k(ring, k, q) if t.i else _e_k(ring, -k, q)
            record(f"phi(e_{k})", phi(_e_k(ring, k, q)) == target)
        for k in range(1, K + 1):
            prod = _e_k(ring, k, q) * _e_k(ring, -k, q)
            record(f"e_{k} e_-{k} form", prod == e12(ring, ring.mono(1, (q - 1) * k) + ring.mono(1, (1 - q) * k)))
            record(f"e_{k} e_-{k} fixed", phi(prod) == prod)
        rng = _random.Random(seed)
        bad = 0
        for _ in range(samples):
            w = random_fp_s_word(ring, rng)
            if phi(w) != w:
                bad += 1
        record(f"{samples} random GL2(F_p[s]) words fixed", bad == 0)
    else:
        report["shape"] = "phi0 = rho o eps"
        for k in range(1, K + 1):
            sk = ring.s_power(k)
            record(f"phi(e12(s^{k})) = e21(-s^{k})", phi(e12(ring, sk)) == e21(ring, -sk))
            record(f"phi(e21(s^{k})) = e12(-s^{k})", phi(e21(ring, sk)) == e12(ring, -sk))
            ek = _e_k(ring, k, q) * _e_k(ring, -k, q)
            ekp = _e_k(ring, k, q, True) * _e_k(ring, -k, q, True)
            record(f"phi(e_{k} e_-{k}) inverse lower", phi(ek) == ekp.inverse())
    return report
