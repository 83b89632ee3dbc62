"""Twisted conjugacy: the action ``g.x = g x phi(g^-1)``, orbit products and
trace certificates separating twisted classes.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

from .automorphisms import StdAut, valid_characters
from .matrix import Mat, diagonal, e12, elementary, h_mat, witness_x
from .ring import Ring, RingAut, RingElem, ring_aut_order, s_expansion


class GroupMap:
    """A homomorphism of a matrix group given by a callable.

    ``compose(psi, phi)`` (or ``psi @ phi``) means apply ``phi`` first.
    ``order`` is the finite order when known.
    """

    def __init__(self, fn, label: str = "map", order: int = None, data=None):
        self.fn = fn
        self.label = label
        self.order = order
        self.data = data

    def __call__(self, a: Mat) -> Mat:
        return self.fn(a)

    def __matmul__(self, other: "GroupMap") -> "GroupMap":
        return compose_maps(self, other)

    def __repr__(self):
        return f"GroupMap({self.label})"

    @classmethod
    def identity(cls):
        return cls(lambda a: a, "id", 1)

    @classmethod
    def from_std(cls, phi: StdAut, order: int = None):
        return cls(phi, repr(phi), order, phi)

    @classmethod
    def from_reiner(cls, nu):
        from .amalgam import reiner_apply
        return cls(lambda a: reiner_apply(nu, a), "reiner", None, nu)

    def power(self, k: int) -> "GroupMap":
        def fn(a):
            for _ in range(k):
                a = self.fn(a)
            return a
        return GroupMap(fn, f"({self.label})^{k}")

    def to_json(self):
        if hasattr(self.data, "to_json"):
            return {"label": self.label, "data": self.data.to_json()}
        return {"label": self.label}


def compose_maps(psi: GroupMap, phi: GroupMap) -> GroupMap:
    return GroupMap(lambda a: psi.fn(phi.fn(a)), f"{psi.label} o {phi.label}")


def twist_act(phi, g: Mat, x: Mat) -> Mat:
    """``g x phi(g^-1)``."""
    return g * x * phi(g.inverse())


def orbit_invariant(phi, x: Mat, r: int = None) -> Mat:
    """``x phi(x) ... phi^(r-1)(x)``; ``r`` defaults to the known order of ``phi``."""
    if r is None:
        r = getattr(phi, "order", None)
    if r is None or r < 1:
        raise ValueError("orbit invariant needs a known finite order")
    acc = x
    cur = x
    for _ in range(r - 1):
        cur = phi(cur)
        acc = acc * cur
    return acc


# -- certificates -------------------------------------------------------------

CASES = ("rho", "eps", "rho-eps", "mu-rho", "mu-rho-eps", "iota-h", "iota-h-rho", "iota-h-rho-eps")
GENERIC_CASES = ("fixed-point", "unipotent-swap")


@dataclass
class TraceCertificate:
    aut: str
    case: str
    indices: list
    r: int
    traces: list
    s_degrees: list
    verdict: str
    offset: object = None
    notes: list = field(default_factory=list)

    @property
    def separated(self) -> bool:
        return self.verdict == "separated"

    def to_json(self):
        off = self.offset
        if isinstance(off, RingElem):
            off = off.to_json()
        return {"aut": self.aut, "case": self.case, "indices": list(self.indices), "r": self.r,
                "traces": [t.to_json() for t in self.traces], "s_degrees": list(self.s_degrees),
                "offset": off, "notes": list(self.notes), "verdict": self.verdict}


def _std_of(phi):
    if isinstance(phi, StdAut):
        return phi
    if isinstance(phi, GroupMap) and isinstance(phi.data, StdAut):
        return phi.data
    return None


def _h_entry(g: Mat):
    """``a`` if ``g == h(a) = diag(1, ..., 1, a)``, else None."""
    if not g.is_diagonal():
        return None
    if any(g.rows[i][i] != g.ring.one() for i in range(g.n - 1)):
        return None
    return g.rows[-1][-1]


def _shape_error(case, phi):
    raise ValueError(f"automorphism {phi!r} does not have the shape of case {case!r}")


def _check_shape(case: str, std: StdAut):
    has_h = not std.g.is_identity()
    a = _h_entry(std.g) if has_h else None
    if has_h and a is None:
        _shape_error(case, std)
    want_eps = case.endswith("eps")
    if std.use_eps != want_eps:
        _shape_error(case, std)
    # a trivial character or h = I is accepted: some small fields have no other
    if case.startswith("mu"):
        if has_h:
            _shape_error(case, std)
    elif std.chi is not None:
        _shape_error(case, std)
    if case.startswith("iota-h"):
        if not has_h:
            a = std.ring.one()
        if case == "iota-h" and not std.rho.is_identity():
            _shape_error(case, std)
    elif has_h:
        _shape_error(case, std)
    if case == "eps" and not std.rho.is_identity():
        _shape_error(case, std)
    return a


def _h_orbit_scalar(rho: RingAut, a: RingElem, r: int, eps: bool) -> RingElem:
    """Diagonal entry ``b`` with ``prod theta^j(h(a)) = h(b)`` over the orbit."""
    R = rho.ring
    acc = R.one()
    cur = a
    terms = 2 * r if eps else r
    for j in range(terms):
        if eps and j % 2 == 1:
            acc = acc * cur.inverse()
        else:
            acc = acc * cur
        cur = rho(cur)
    return acc


def certify_separation(phi, case: str, indices, n: int = None, q: int = None) -> TraceCertificate:
    """Trace certificate that the chosen elements lie in distinct twisted classes.

    For each index m the case fixes an invariant matrix whose trace, after
    subtracting a known constant, must be a polynomial in s of degree
    ``2*r*m``.  Distinct degrees give distinct traces; in the homothety
    cases they also rule out an unknown scalar factor.
    """
    indices = sorted(set(indices))
    if not indices or indices[0] < 1:
        raise ValueError("indices must be positive integers")
    if case in GENERIC_CASES:
        return _certify_generic(phi, case, indices, q)
    if case not in CASES:
        raise ValueError(f"unknown case tag {case!r}; expected one of {CASES + GENERIC_CASES}")
    std = _std_of(phi)
    if std is None:
        raise ValueError("this case needs a standard automorphism")
    a = _check_shape(case, std)
    R, n = std.ring, std.n
    if a is not None and n < 3:
        raise ValueError("the h(a) cases need n >= 3")
    F = R.spec
    r = ring_aut_order(std.rho)
    uses_eps = case.endswith("eps")
    # the auxiliary map whose orbit products are invariants
    aux = StdAut(R, n, None, std.rho, None, uses_eps)
    r_eff = 1 if case in ("eps", "iota-h") else r
    terms = 2 * r_eff if uses_eps else r_eff
    notes = []
    if case.startswith("mu") and std.chi is None:
        notes.append("degenerate instance: trivial character")
    if case.startswith("iota-h") and a == R.one():
        notes.append("degenerate instance: h = I")
    if a is not None:
        b = a if case == "iota-h" else _h_orbit_scalar(std.rho, a, r, uses_eps)
        offset = R.const(n - 3) + b
    else:
        b = None
        offset = R.const(n - 2)
    traces, degrees = [], []
    ok = True
    for m in indices:
        xm = witness_x(m, R, n, q)
        seed = e12(R, R.s_power(m, q), n) if uses_eps else xm
        if a is not None:
            seed = seed * h_mat(R, a, n)
        if case == "iota-h":
            inv = seed
        elif case.startswith("mu"):
            # the homothety is trivial on these determinant-one elements
            inv = orbit_invariant(std, seed, terms)
            if inv != orbit_invariant(aux, seed, terms):
                ok = False
                notes.append(f"m={m}: homothety moved a determinant-one element")
        else:
            inv = orbit_invariant(aux, seed, terms)
        expected = xm ** r_eff
        if b is not None:
            expected = expected * h_mat(R, b, n)
        if inv != expected:
            ok = False
            notes.append(f"m={m}: orbit product differs from the predicted closed form")
        tr = inv.trace()
        core = tr - offset
        coeffs = s_expansion(core, q)
        deg = None if coeffs is None else len(coeffs) - 1
        if deg != 2 * r_eff * m:
            ok = False
            notes.append(f"m={m}: s-degree {deg}, expected {2 * r_eff * m}")
        traces.append(tr)
        degrees.append(deg)
    if len(set(traces)) != len(traces):
        ok = False
        notes.append("traces not pairwise distinct")
    if case.startswith("mu"):
        # tr(x_k^r) = v tr(x_m^r) must fail for every scalar v
        for (i, ti), (j, tj) in itertools.combinations(enumerate(traces), 2):
            for v in range(1, F.q):
                if ti == tj.scale(v) or tj == ti.scale(v):
                    ok = False
                    notes.append(f"indices {indices[i]}, {indices[j]} equalized by a scalar")
    return TraceCertificate(repr(std), case, indices, r_eff, traces, degrees,
                            "separated" if ok else "failed", offset, notes)


def case_instance(case: str, ring: Ring, n: int = 3, frob: int = 0) -> StdAut:
    """A representative standard automorphism for a case tag.

    The ring map is ``t -> t + 1`` (polynomial) or ``t -> z t^-1`` (Laurent,
    ``z`` the field generator), after ``frob^frob``.  Homothety cases use the
    first nontrivial valid character when there is one; the h cases use
    ``h = diag(1, .., 1, z)``, or ``t`` over F_2[t, t^-1].
    """
    if case not in CASES:
        raise ValueError(f"unknown case tag {case!r}; expected one of {CASES}")
    F = ring.spec
    z = F.generator
    if ring.laurent:
        rho = RingAut(ring, frob, z, 0, -1, raw=True)
    else:
        rho = RingAut(ring, frob, 1, 1, 1, raw=True)
    chi = None
    if case.startswith("mu"):
        chars = [c for c in valid_characters(ring, n) if not c.is_trivial()]
        chi = chars[0] if chars else None
    g = None
    if case.startswith("iota-h"):
        if F.q > 2:
            a = ring.elem((z,))
        else:
            a = ring.t() if ring.laurent else ring.one()
        g = h_mat(ring, a, n)
    use_rho = case not in ("eps", "iota-h")
    return StdAut(ring, n, chi, rho if use_rho else None, g, case.endswith("eps"))


def case_witnesses(case: str, ring: Ring, n: int, indices, q: int = None):
    """The elements a certificate separates, for cross-checks by search."""
    out = []
    for m in indices:
        if case.endswith("eps") or case == "unipotent-swap":
            out.append(e12(ring, ring.s_power(m, q), n))
        else:
            out.append(witness_x(m, ring, n, q))
    return out


def _certify_generic(phi, case, indices, q):
    """Separation for maps of known finite order fixing ``x_m`` or swapping
    ``e12(s^m)`` with ``e21(-s^m)``."""
    o = getattr(phi, "order", None)
    if o is None:
        raise ValueError("generic certificate needs a map of known finite order")
    probe = phi.data
    R = getattr(probe, "ring", None)
    n = getattr(probe, "n", 2)
    if R is None:
        raise ValueError("map does not expose its ring")
    notes = []
    ok = True
    if case == "unipotent-swap":
        if o % 2:
            raise ValueError("a swapping map has even order")
        r_eff = o // 2
    else:
        r_eff = o
    traces, degrees = [], []
    for m in indices:
        xm = witness_x(m, R, n, q)
        if case == "fixed-point":
            if phi(xm) != xm:
                _shape_error(case, phi)
            seed = xm
        else:
            seed = e12(R, R.s_power(m, q), n)
            if phi(seed) != elementary(R, 2, 1, -R.s_power(m, q), n):
                _shape_error(case, phi)
        inv = orbit_invariant(phi, seed, o)
        if inv != xm ** r_eff:
            ok = False
            notes.append(f"m={m}: orbit product is not x_m^{r_eff}")
        tr = inv.trace()
        coeffs = s_expansion(tr - R.const(n - 2), q)
        deg = None if coeffs is None else len(coeffs) - 1
        if deg != 2 * r_eff * m:
            ok = False
            notes.append(f"m={m}: s-degree {deg}, expected {2 * r_eff * m}")
        traces.append(tr)
        degrees.append(deg)
    if len(set(traces)) != len(traces):
        ok = False
    return TraceCertificate(phi.label, case, indices, r_eff, traces, degrees,
                            "separated" if ok else "failed", n - 2, notes)


def certify_h0(n: int, ring: Ring, q: int, indices, rho: RingAut = None, a0=1, d: int = None):
    """Trace certificate for a determinant-torsion subgroup automorphism.

    ``ring`` is F[t] or F[t, t^-1] over a field GF(q^d) containing GF(q);
    ``s`` is built from ``q``.  The orbit product over ``N`` steps of
    ``rho`` applied to ``x_k h(a0)`` is ``x_k^N h(u)``, so a twisted
    conjugacy between ``x_k`` and ``x_m`` would force
    ``tr(x_k^N) + (n-3) + u = tr(x_m^N) + (n-3) + v`` for field elements
    ``u, v``.  The certificate shows the two sides have different s-degree
    and confirms by scanning every pair ``(u, v)``.
    """
    if n < 3:
        raise ValueError("needs n >= 3")
    F = ring.spec
    p = F.p
    e = round(math.log(q, p))
    if p ** e != q or F.e % e:
        raise ValueError(f"GF({q}) is not a subfield of {F!r}")
    if d is None:
        d = F.e // e
    rho = rho or RingAut.identity(ring)
    for c in (rho.a, rho.b):
        if F.pow(c, q) != c:
            raise ValueError("ring automorphism parameters must lie in GF(q)")
    a0 = ring.coerce(a0)
    if not a0.is_const() or not a0:
        raise ValueError("a0 must be a nonzero constant")
    N_stated = 2 * d * e
    o = ring_aut_order(rho)
    N = N_stated * o // math.gcd(N_stated, o)
    notes = []
    if N != N_stated:
        notes.append(f"rho has order {o}; using N = lcm({N_stated}, {o}) = {N} so rho^N = id")
    h = h_mat(ring, a0, n)
    phi = StdAut(ring, n, None, rho)
    traces, degrees = [], []
    ok = True
    u_val = None
    for k in indices:
        xk = witness_x(k, ring, n, q)
        prod = orbit_invariant(phi, xk * h, N)
        u = _h_orbit_scalar(rho, a0, N, False)
        u_val = u
        if prod != xk ** N * h_mat(ring, u, n):
            ok = False
            notes.append(f"k={k}: orbit product is not x_k^N h(u)")
        core = (xk ** N).block(2).trace()
        coeffs = s_expansion(core, q)
        deg = None if coeffs is None else len(coeffs) - 1
        if deg != 2 * N * k:
            ok = False
        traces.append(core + ring.const(n - 3))
        degrees.append(deg)
    # no (u, v) equalizes two different indices
    consts = [ring.elem((c,)) for c in range(F.q)]
    for i, j in itertools.combinations(range(len(traces)), 2):
        diff = traces[i] - traces[j]
        if diff.is_const():
            ok = False
        if F.q <= 64:
            for u in consts:
                for v in consts:
                    if traces[i] + u == traces[j] + v:
                        ok = False
    cert = TraceCertificate(f"iota_h(a0) o {rho!r} on n={n}", "h0", sorted(indices), N, traces, degrees,
                            "separated" if ok else "failed", u_val, notes)
    return cert


# -- bounded orbit search ------------------------------------------------------

def bounded_orbit_bfs(phi, x: Mat, generators, radius: int):
    """All ``w x phi(w^-1)`` for words ``w`` of length ``<= radius`` in the
    generators and their inverses."""
    steps = []
    seen_gen = set()
    for g in generators:
        for h in (g, g.inverse()):
            if h not in seen_gen:
                seen_gen.add(h)
                steps.append((h, phi(h.inverse())))
    ball = {x}
    frontier = [x]
    for _ in range(radius):
        nxt = []
        for y in frontier:
            for h, ph in steps:
                z = h * y * ph
                if z not in ball:
                    ball.add(z)
                    nxt.append(z)
        frontier = nxt
    return ball


def default_generators(ring: Ring, n: int):
    """A small generating set: unit shears, ``e12(t)`` and, for the Laurent
    ring, ``diag(t, 1, ...)``."""
    gens = []
    for i in range(1, n):
        gens.append(elementary(ring, i, i + 1, ring.one(), n))
        gens.append(elementary(ring, i + 1, i, ring.one(), n))
    gens.append(elementary(ring, 1, 2, ring.t(), n))
    F = ring.spec
    if F.q > 2:
        d = [ring.one()] * n
        d[0] = ring.elem((F.generator,))
        gens.append(diagonal(ring, *d))
    if ring.laurent:
        d = [ring.one()] * n
        d[0] = ring.t()
        gens.append(diagonal(ring, *d))
    return gens


def balls_disjoint(phi, elems, generators, radius: int):
    """Pairwise disjointness of twisted balls; returns the colliding index pairs."""
    balls = [bounded_orbit_bfs(phi, x, generators, radius) for x in elems]
    hits = []
    for i, j in itertools.combinations(range(len(balls)), 2):
        if balls[i] & balls[j]:
            hits.append((i, j))
    return hits


# -- determinant subgroups --------------------------------------------------------

class DetSubgroup:
    """A subgroup ``D`` of units of R, generated by ``gens``.

    Units ``lam t^k`` are tracked as lattice points ``(log lam, k)`` modulo
    ``(q - 1, 0)``; the lattice is kept in a two-row echelon basis.
    """

    def __init__(self, ring: Ring, gens):
        self.ring = ring
        F = ring.spec
        self.gens = [ring.coerce(g) for g in gens]
        self._x1, self._y1 = 0, 0     # basis vector with the t-exponent gcd
        self._x2 = F.q - 1            # torsion step: (x2, 0) spans the k = 0 part
        for g in self.gens:
            u = g.unit_decompose()
            if u is None:
                raise ValueError(f"{g} is not a unit")
            self._add(self._vec(u))

    def _vec(self, u):
        lam, k = u
        F = self.ring.spec
        return (F.dlog(lam.code) if F.q > 2 else 0, k)

    def _add(self, v):
        a, k = v
        M = self.ring.spec.q - 1
        if k == 0:
            self._x2 = math.gcd(self._x2, a % M) or M
            self._x2 = math.gcd(self._x2, M)
            return
        if self._y1 == 0:
            if k < 0:
                a, k = -a, -k
            self._x1, self._y1 = a % M, k
            return
        if k < 0:
            a, k = -a, -k
        g, s, t = _ext_gcd(self._y1, k)
        new1 = ((s * self._x1 + t * a), g)
        # combination with zero t-exponent
        zx = (k // g) * self._x1 - (self._y1 // g) * a
        self._x1, self._y1 = new1[0] % M, new1[1]
        self._x2 = math.gcd(self._x2, zx % M) or M
        self._x2 = math.gcd(self._x2, M)
        self._x1 %= self._x2

    def contains_unit(self, f: RingElem) -> bool:
        u = self.ring.coerce(f).unit_decompose()
        if u is None:
            return False
        a, k = self._vec(u)
        if self._y1 == 0:
            if k != 0:
                return False
            return a % self._x2 == 0
        if k % self._y1:
            return False
        return (a - (k // self._y1) * self._x1) % self._x2 == 0

    def torsion_part(self) -> "DetSubgroup":
        F = self.ring.spec
        return DetSubgroup(self.ring, [self.ring.elem((F.pow(F.generator, self._x2),))])

    def torsion_order(self) -> int:
        return (self.ring.spec.q - 1) // self._x2

    def t_step(self) -> int:
        return self._y1

    def __repr__(self):
        return f"DetSubgroup(gens={self.gens!r})"


def _ext_gcd(a, b):
    if b == 0:
        return (abs(a), 1 if a >= 0 else -1, 0)
    g, s, t = _ext_gcd(b, a % b)
    return g, t, s - (a // b) * t


def det_subgroup_member(D: DetSubgroup, g: Mat) -> bool:
    return D.contains_unit(g.det())


def torsion_part(D: DetSubgroup) -> DetSubgroup:
    return D.torsion_part()
