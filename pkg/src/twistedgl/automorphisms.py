"""Standard automorphisms of GL_n(R) and SL_n(R).

A :class:`StdAut` is stored in the canonical shape ``mu_chi o rho o iota_g o eps^b``
and applied in closed form (right to left).
"""
from __future__ import annotations

import math

from .field import FqElem
from .matrix import Mat, diagonal, elementary, h_mat, mat_det
from .ring import Ring, RingAut, RingElem, all_ring_auts, ring_aut_compose


class UnitCharacter:
    """A character through det: ``lam * t^j  ->  lam^k * c^j * t^(m*j)``.

    ``c`` is ``t_image`` and ``m`` is ``t_power``.  Both only matter for the
    Laurent ring.  Values lie in F^x whenever ``t_power == 0``; a nonzero
    ``t_power`` is only allowed for ``n = 2``, where the homothety with
    ``m = -1`` is still bijective.
    """

    __slots__ = ("ring", "k", "t_image", "t_power")

    def __init__(self, ring: Ring, k: int = 0, t_image=1, t_power: int = 0, raw: bool = False):
        F = ring.spec
        self.ring = ring
        self.k = k % (F.q - 1) if F.q > 2 else 0
        c = t_image if raw else ring._code(t_image)
        if c == 0:
            raise ValueError("t_image must be nonzero")
        if not ring.laurent:
            c, t_power = 1, 0
        self.t_image = c
        self.t_power = t_power

    @classmethod
    def trivial(cls, ring):
        return cls(ring)

    def is_trivial(self) -> bool:
        return self.k == 0 and self.t_image == 1 and self.t_power == 0

    def key(self):
        return (self.k, self.t_image, self.t_power)

    def __eq__(self, other):
        return isinstance(other, UnitCharacter) and self.ring is other.ring and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def __repr__(self):
        F = self.ring.spec
        bits = [f"k={self.k}"]
        if self.ring.laurent:
            bits.append(f"t->{FqElem(F, self.t_image)!r}" + (f"*t^{self.t_power}" if self.t_power else ""))
        return "chi(" + ", ".join(bits) + ")"

    def on_unit(self, d: RingElem) -> RingElem:
        u = d.unit_decompose()
        if u is None:
            raise ValueError(f"{d} is not a unit")
        lam, j = u
        F = self.ring.spec
        val = F.mul(F.pow(lam.code, self.k), F.pow(self.t_image, j))
        return self.ring.mono(FqElem(F, val), self.t_power * j)

    def __call__(self, a: Mat) -> RingElem:
        return self.on_unit(mat_det(a))

    def to_json(self):
        F = self.ring.spec
        out = {"k": self.k, "t_image": list(F.to_vec(self.t_image))}
        if self.t_power:
            out["t_power"] = self.t_power
        return out

    @staticmethod
    def from_json(ring, data):
        if data is None:
            return None
        return UnitCharacter(ring, data.get("k", 0), data.get("t_image", 1), data.get("t_power", 0))


def _unit_character_from_values(ring: Ring, at_gen: RingElem, at_t: RingElem):
    """Recover the character from its values on the field generator and on t."""
    F = ring.spec
    u = at_gen.unit_decompose()
    if u is None or u[1] != 0:
        raise ValueError("character value on a constant must be a constant unit")
    k = F.dlog(u[0].code) if F.q > 2 else 0
    if not ring.laurent:
        return UnitCharacter(ring, k)
    v = at_t.unit_decompose()
    if v is None:
        raise ValueError("character value on t must be a unit")
    return UnitCharacter(ring, k, v[0].code, v[1], raw=True)


def contragredient(a: Mat) -> Mat:
    return a.transpose().inverse()


class StdAut:
    """``mu_chi o rho o iota_g o eps^use_eps`` acting on n x n matrices."""

    __slots__ = ("ring", "n", "chi", "rho", "g", "use_eps", "_ginv")

    def __init__(self, ring: Ring, n: int, chi: UnitCharacter = None, rho: RingAut = None,
                 g: Mat = None, use_eps: bool = False):
        self.ring = ring
        self.n = n
        if chi is not None and chi.is_trivial():
            chi = None
        if chi is not None and chi.t_power and n != 2:
            raise ValueError("a t-valued homothety is not an automorphism for n >= 3")
        self.chi = chi
        self.rho = rho if rho is not None else RingAut.identity(ring)
        if g is None:
            g = Mat.identity(ring, n)
        if g.n != n or g.ring is not ring:
            raise ValueError("conjugator has wrong size or ring")
        self._ginv = g.inverse()
        self.g = g
        self.use_eps = bool(use_eps)

    # convenient constructors
    @classmethod
    def identity(cls, ring, n):
        return cls(ring, n)

    @classmethod
    def eps(cls, ring, n):
        return cls(ring, n, use_eps=True)

    @classmethod
    def inner(cls, g: Mat):
        return cls(g.ring, g.n, g=g)

    @classmethod
    def ring_map(cls, rho: RingAut, n: int):
        return cls(rho.ring, n, rho=rho)

    @classmethod
    def homothety(cls, chi: UnitCharacter, n: int):
        return cls(chi.ring, n, chi=chi)

    def __call__(self, a: Mat) -> Mat:
        return std_apply(self, a)

    def __repr__(self):
        parts = []
        if self.chi is not None:
            parts.append(f"mu[{self.chi!r}]")
        if not self.rho.is_identity():
            parts.append(repr(self.rho))
        if not self.g.is_identity():
            parts.append(f"iota[{self.g!r}]")
        if self.use_eps:
            parts.append("eps")
        return "StdAut(" + (" o ".join(parts) or "id") + ")"

    def linear_part(self, a: Mat) -> Mat:
        """``rho o iota_g o eps^b`` without the homothety."""
        if self.use_eps:
            a = contragredient(a)
        if not self.g.is_identity():
            a = self.g * a * self._ginv
        if not self.rho.is_identity():
            a = a.map_entries(self.rho)
        return a

    def is_canonical_identity(self) -> bool:
        """Trivial data: no homothety, no ring map, no eps, central conjugator."""
        if self.chi is not None or self.use_eps or not self.rho.is_identity():
            return False
        g = self.g
        return g.is_diagonal() and all(g.rows[i][i] == g.rows[0][0] for i in range(g.n))

    def to_json(self):
        return {"chi": None if self.chi is None else self.chi.to_json(),
                "rho": self.rho.to_json(), "g": self.g.to_json(), "use_eps": self.use_eps}

    @staticmethod
    def from_json(ring, data):
        g = Mat.from_json(ring, data["g"])
        return StdAut(ring, g.n, UnitCharacter.from_json(ring, data.get("chi")),
                      RingAut.from_json(ring, data["rho"]), g, data.get("use_eps", False))


def std_apply(phi: StdAut, a: Mat) -> Mat:
    if a.n != phi.n:
        raise ValueError("dimension mismatch")
    b = phi.linear_part(a)
    if phi.chi is not None:
        b = b * phi.chi(b)
    return b


def _scalar_image(L: StdAut, c: RingElem) -> RingElem:
    """``L(c I)`` is the scalar ``rho(c^(+-1))`` for a linear-part-only map ``L``."""
    c = c.inverse() if L.use_eps else c
    return L.rho(c)


def std_compose(psi: StdAut, phi: StdAut) -> StdAut:
    """Canonical form of ``psi o phi`` (``phi`` applied first)."""
    if psi.ring is not phi.ring or psi.n != phi.n:
        raise ValueError("automorphisms of different groups")
    R, n = psi.ring, psi.n
    rho1, rho2 = phi.rho, psi.rho
    g2 = psi.g.map_entries(rho1.inverse())
    g1 = contragredient(phi.g) if psi.use_eps else phi.g
    rho = ring_aut_compose(rho2, rho1)
    use_eps = phi.use_eps != psi.use_eps
    lin = StdAut(R, n, None, rho, g2 * g1, use_eps)
    if phi.chi is None and psi.chi is None:
        return lin
    L1 = StdAut(R, n, None, rho1, phi.g, phi.use_eps)
    L2 = StdAut(R, n, None, rho2, psi.g, psi.use_eps)
    rho2_inv = rho2.inverse()
    sigma2 = -1 if psi.use_eps else 1

    def total(D: RingElem) -> RingElem:
        # scalar multiplying L(a) when det(L(a)) = D
        d1 = rho2_inv(D)
        d1 = d1.inverse() if sigma2 == -1 else d1
        c1 = phi.chi.on_unit(d1) if phi.chi is not None else R.one()
        s1 = _scalar_image(L2, c1)
        if psi.chi is None:
            return s1
        return psi.chi.on_unit(D * s1 ** n) * s1

    F = R.spec
    gen = R.elem((F.generator,))
    chi = _unit_character_from_values(R, total(gen), total(R.t()) if R.laurent else R.one())
    return StdAut(R, n, chi, rho, g2 * g1, use_eps)


def std_inverse(phi: StdAut, bound: int = 10_000) -> StdAut:
    """Inverse via the finite order of the outer data when possible."""
    cur = phi
    for _ in range(bound):
        nxt = std_compose(phi, cur)
        if nxt.is_canonical_identity():
            return cur
        cur = nxt
    raise ValueError("could not invert: order exceeds bound")


def probe_set(ring: Ring, n: int):
    """Small generating set of GL_n(R) used for pointwise comparisons."""
    F = ring.spec
    out = []
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            if i != j:
                out.append(elementary(ring, i, j, ring.one(), n))
                out.append(elementary(ring, i, j, ring.t(), n))
                if F.e > 1:
                    out.append(elementary(ring, i, j, ring.elem((F.generator,)), n))
    for i in range(n):
        d = [ring.one()] * n
        d[i] = ring.elem((F.generator,))
        out.append(diagonal(ring, *d))
        if ring.laurent:
            d = [ring.one()] * n
            d[i] = ring.t()
            out.append(diagonal(ring, *d))
    return out


def pointwise_equal(f, g, probes) -> bool:
    return all(f(x) == g(x) for x in probes)


def std_order(phi: StdAut, bound: int):
    """Least ``r <= bound`` with ``phi^r`` trivial, both on probes and canonically."""
    probes = probe_set(phi.ring, phi.n)
    cur = phi
    for r in range(1, bound + 1):
        if cur.is_canonical_identity() and all(cur(x) == x for x in probes):
            return r
        cur = std_compose(phi, cur)
    return None


def homothety_injective(chi: UnitCharacter, n: int):
    """``(True, None)`` if ``mu_chi`` is injective, else ``(False, witness)``.

    Only constant scalars need scanning: see the module notes on central
    units with a t-part.
    """
    ring = chi.ring
    F = ring.spec
    for lam in range(2, F.q) if F.q > 2 else ():
        z = ring.elem((lam,))
        if chi.on_unit(z ** n) == z.inverse():
            return False, diagonal(ring, *([z] * n))
    return True, None


def valid_characters(ring: Ring, n: int, allow_t_power: bool = None):
    """All characters giving a bijective homothety of GL_n(R)."""
    F = ring.spec
    if allow_t_power is None:
        allow_t_power = n == 2
    out = []
    ks = range(F.q - 1) if F.q > 2 else (0,)
    cs = range(1, F.q) if ring.laurent else (1,)
    ms = ((0, -1) if allow_t_power else (0,)) if ring.laurent else (0,)
    for k in ks:
        if math.gcd(n * k + 1, F.q - 1) != 1:
            continue
        for c in cs:
            for m in ms:
                chi = UnitCharacter(ring, k, c, m, raw=True)
                if homothety_injective(chi, n)[0]:
                    out.append(chi)
    return out


def transversal_enumerate(group: str, n: int, ring: Ring, unit_sample=None, chars=None):
    """Representatives ``rho``, ``rho o eps`` and the group-specific extras."""
    group = group.upper()
    if group not in ("GL", "SL"):
        raise ValueError(f"group must be GL or SL, got {group!r}")
    if n < 3:
        raise ValueError("the transversal needs n >= 3")
    rhos = all_ring_auts(ring)
    out = []
    for rho in rhos:
        for b in (False, True):
            out.append(StdAut(ring, n, None, rho, None, b))
    if group == "SL":
        seen = set()
        for alpha in unit_sample or ():
            alpha = ring.coerce(alpha)
            if alpha == ring.one() or alpha in seen:
                continue
            if not alpha.is_unit():
                raise ValueError(f"{alpha} is not a unit")
            seen.add(alpha)
            h = h_mat(ring, alpha, n)
            for rho in rhos:
                for b in (False, True):
                    out.append(StdAut(ring, n, None, rho, h, b))
    else:
        for chi in chars or ():
            if chi.is_trivial():
                continue
            for rho in rhos:
                for b in (False, True):
                    out.append(StdAut(ring, n, chi, rho, None, b))
    return out
