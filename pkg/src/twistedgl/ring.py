"""Polynomial and Laurent polynomial rings over GF(p^e).

A :class:`RingElem` is stored densely as ``(low, codes)``: the coefficient of
``t**(low + i)`` is the field code ``codes[i]``.  Values are normalized on
construction, so equality is structural.
"""
from __future__ import annotations

import random as _random

import numpy as np

from .field import FieldSpec, FqElem

POLY = "poly"
LAURENT = "laurent"

# above this many coefficient products multiplication goes through numpy
_NUMPY_CUTOFF = 256


def _flavor(flavor) -> str:
    f = str(flavor).lower()
    if f in ("poly", "polynomial"):
        return POLY
    if f in ("laurent",):
        return LAURENT
    raise ValueError(f"unknown flavor {flavor!r} (expected 'poly' or 'laurent')")


class Ring:
    """F[t] or F[t, t^-1] over a fixed :class:`FieldSpec`."""

    _cache: dict = {}

    def __new__(cls, spec: FieldSpec, flavor=POLY):
        flavor = _flavor(flavor)
        key = (spec, flavor)
        inst = cls._cache.get(key)
        if inst is None:
            inst = super().__new__(cls)
            inst.spec = spec
            inst.flavor = flavor
            inst._s_powers = {}
            cls._cache[key] = inst
        return inst

    def __reduce__(self):
        return (Ring, (self.spec, self.flavor))

    @property
    def laurent(self) -> bool:
        return self.flavor == LAURENT

    @property
    def p(self):
        return self.spec.p

    @property
    def q(self):
        return self.spec.q

    def __repr__(self):
        var = "t, t^-1" if self.laurent else "t"
        return f"{self.spec!r}[{var}]"

    # -- constructors -------------------------------------------------------

    def elem(self, codes, low: int = 0) -> "RingElem":
        return RingElem(self, low, codes)

    def zero(self):
        return RingElem(self, 0, ())

    def one(self):
        return RingElem(self, 0, (1,))

    def const(self, c) -> "RingElem":
        return RingElem(self, 0, (self._code(c),))

    def t(self):
        return RingElem(self, 0, (0, 1))

    def mono(self, c, k: int) -> "RingElem":
        code = self._code(c)
        if k < 0 and not self.laurent:
            raise ValueError("negative exponent in a polynomial ring")
        if self.laurent:
            return RingElem(self, k, (code,))
        return RingElem(self, 0, (0,) * k + (code,))

    def from_terms(self, terms) -> "RingElem":
        """Build from ``{exponent: coefficient}`` or an iterable of pairs."""
        items = terms.items() if isinstance(terms, dict) else terms
        acc = {}
        F = self.spec
        for k, c in items:
            acc[k] = F.add(acc.get(k, 0), self._code(c))
        acc = {k: v for k, v in acc.items() if v}
        if not acc:
            return self.zero()
        lo, hi = min(acc), max(acc)
        if lo < 0 and not self.laurent:
            raise ValueError("negative exponent in a polynomial ring")
        if not self.laurent:
            lo = 0
        return RingElem(self, lo, tuple(acc.get(k, 0) for k in range(lo, hi + 1)))

    def _code(self, c) -> int:
        if isinstance(c, FqElem):
            if c.field != self.spec:
                raise ValueError("scalar from a different field")
            return c.code
        if isinstance(c, int):
            return c % self.spec.p
        if isinstance(c, (list, tuple)):
            return self.spec.from_vec(c)
        raise TypeError(f"cannot interpret {c!r} as a field element")

    def coerce(self, x) -> "RingElem":
        if isinstance(x, RingElem):
            if x.ring is not self:
                raise ValueError(f"ring mismatch: {x.ring!r} vs {self!r}")
            return x
        return self.const(x)

    def random(self, rng: _random.Random, max_deg: int = 3, min_exp: int = None) -> "RingElem":
        """A random element; Laurent values have exponents in ``[min_exp, max_deg]``."""
        if min_exp is None:
            min_exp = -max_deg if self.laurent else 0
        if not self.laurent:
            min_exp = 0
        q = self.spec.q
        return self.from_terms({k: self.spec.to_vec(rng.randrange(q)) for k in range(min_exp, max_deg + 1)})

    def random_unit(self, rng: _random.Random, span: int = 2) -> "RingElem":
        lam = rng.randrange(1, self.spec.q)
        k = rng.randint(-span, span) if self.laurent else 0
        return self.mono(self.spec.to_vec(lam), k)

    # -- the invariant element s ---------------------------------------------

    def special_s(self, q: int = None) -> "RingElem":
        """``t^(q-1) + t^(1-q)`` (Laurent) or ``(t^q - t)^(q-1)`` (polynomial).

        ``q`` defaults to the order of the coefficient field; a smaller
        subfield order may be passed when the ring is an extension of the
        field the automorphisms are defined over.
        """
        q = self.spec.q if q is None else q
        if self.laurent:
            return self.mono(1, q - 1) + self.mono(1, 1 - q)
        return (self.mono(1, q) - self.t()) ** (q - 1)

    def s_power(self, j: int, q: int = None) -> "RingElem":
        q = self.spec.q if q is None else q
        powers = self._s_powers.setdefault(q, [self.one()])
        while len(powers) <= j:
            if len(powers) == 1:
                powers.append(self.special_s(q))
            else:
                powers.append(powers[-1] * powers[1])
        return powers[j]


class RingElem:
    """An element of F[t] or F[t, t^-1]."""

    __slots__ = ("ring", "low", "codes", "_hash")

    def __init__(self, ring: Ring, low: int, codes):
        codes = tuple(codes)
        # strip zeros at both ends
        hi = len(codes)
        while hi and codes[hi - 1] == 0:
            hi -= 1
        lo = 0
        if ring.flavor == LAURENT:
            while lo < hi and codes[lo] == 0:
                lo += 1
        codes = codes[lo:hi]
        if not codes:
            low = 0
        else:
            low += lo
            if ring.flavor == POLY and low != 0:
                if low < 0:
                    raise ValueError("negative exponent in a polynomial ring")
                codes = (0,) * low + codes
                low = 0
        self.ring = ring
        self.low = low
        self.codes = codes
        self._hash = None

    # -- basic views ---------------------------------------------------------

    @property
    def spec(self) -> FieldSpec:
        return self.ring.spec

    @property
    def flavor(self) -> str:
        return self.ring.flavor

    @property
    def coeffs(self):
        return [FqElem(self.ring.spec, c) for c in self.codes]

    def is_zero(self) -> bool:
        return not self.codes

    def __bool__(self):
        return bool(self.codes)

    @property
    def high(self) -> int:
        """Top exponent; ``-1`` for zero in F[t]."""
        return self.low + len(self.codes) - 1

    def degree(self) -> int:
        if not self.codes:
            return -1
        return self.high

    @property
    def valuation(self) -> int:
        """Lowest exponent carrying a nonzero coefficient."""
        for i, c in enumerate(self.codes):
            if c:
                return self.low + i
        raise ValueError("zero has no valuation")

    def span(self) -> int:
        """``high - valuation``; the Euclidean measure on the Laurent ring."""
        if not self.codes:
            return -1
        return self.high - self.valuation

    def coeff(self, k: int) -> int:
        i = k - self.low
        if 0 <= i < len(self.codes):
            return self.codes[i]
        return 0

    def lead(self) -> int:
        return self.codes[-1]

    def is_const(self) -> bool:
        return not self.codes or (len(self.codes) == 1 and self.low == 0)

    def const_code(self) -> int:
        if not self.is_const():
            raise ValueError(f"{self} is not a constant")
        return self.codes[0] if self.codes else 0

    def terms(self):
        return [(self.low + i, c) for i, c in enumerate(self.codes) if c]

    # -- arithmetic ---------------------------------------------------------

    def _other(self, other):
        if isinstance(other, RingElem):
            if other.ring is not self.ring:
                raise ValueError(f"ring mismatch: {other.ring!r} vs {self.ring!r}")
            return other
        if isinstance(other, (int, FqElem)):
            return self.ring.const(other)
        return None

    def __add__(self, other):
        g = self._other(other)
        if g is None:
            return NotImplemented
        if not g.codes:
            return self
        if not self.codes:
            return g
        F = self.ring.spec
        lo = min(self.low, g.low)
        hi = max(self.high, g.high)
        a = [0] * (hi - lo + 1)
        for i, c in enumerate(self.codes):
            a[self.low - lo + i] = c
        off = g.low - lo
        if F.e == 1:
            p = F.p
            for i, c in enumerate(g.codes):
                a[off + i] = (a[off + i] + c) % p
        else:
            for i, c in enumerate(g.codes):
                a[off + i] = F.add(a[off + i], c)
        return RingElem(self.ring, lo, a)

    __radd__ = __add__

    def __neg__(self):
        F = self.ring.spec
        return RingElem(self.ring, self.low, [F.neg(c) for c in self.codes])

    def __sub__(self, other):
        g = self._other(other)
        if g is None:
            return NotImplemented
        return self + (-g)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c: int) -> "RingElem":
        """Multiply by the field code ``c``."""
        F = self.ring.spec
        if c == 1:
            return self
        return RingElem(self.ring, self.low, [F.mul(c, x) for x in self.codes])

    def shift(self, k: int) -> "RingElem":
        """Multiply by ``t**k``."""
        if not self.codes:
            return self
        if self.ring.laurent or k >= 0:
            return RingElem(self.ring, self.low + k, self.codes)
        if any(self.codes[:-k]):
            raise ValueError("result is not a polynomial")
        return RingElem(self.ring, 0, self.codes[-k:])

    def __mul__(self, other):
        g = self._other(other)
        if g is None:
            return NotImplemented
        if not self.codes or not g.codes:
            return self.ring.zero()
        return RingElem(self.ring, self.low + g.low, _mul_codes(self.ring.spec, self.codes, g.codes))

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        result = self.ring.one()
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def __eq__(self, other):
        if isinstance(other, RingElem):
            return self.ring is other.ring and self.low == other.low and self.codes == other.codes
        if isinstance(other, (int, FqElem)):
            try:
                return self == self.ring.const(other)
            except ValueError:
                return False
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.ring.flavor, self.low, self.codes))
        return self._hash

    # -- units and division -----------------------------------------------

    def unit_decompose(self):
        """``(lam, k)`` with ``self == lam * t**k`` if this is a unit, else None."""
        if len(self.codes) != 1:
            return None
        if not self.ring.laurent and self.low != 0:
            return None
        return FqElem(self.ring.spec, self.codes[0]), self.low

    def is_unit(self) -> bool:
        return self.unit_decompose() is not None

    def inverse(self) -> "RingElem":
        u = self.unit_decompose()
        if u is None:
            raise ValueError(f"{self} is not a unit")
        lam, k = u
        return RingElem(self.ring, -k, (self.ring.spec.inv(lam.code),))

    def divmod(self, g: "RingElem"):
        """Euclidean division.

        Polynomial ring: the usual division by degree.  Laurent ring: the
        remainder has strictly smaller span than ``g`` and shares the
        valuation of ``self``.
        """
        g = self._other(g)
        if not g.codes:
            raise ZeroDivisionError("division by zero polynomial")
        R = self.ring
        if not self.codes:
            return R.zero(), R.zero()
        if R.laurent:
            la, lc = self.valuation, g.valuation
            a0 = self.shift(-la)
            c0 = g.shift(-lc)
            Q, Rm = _poly_divmod(R, a0, c0)
            return Q.shift(la - lc), Rm.shift(la)
        return _poly_divmod(R, self, g)

    def __floordiv__(self, g):
        return self.divmod(g)[0]

    def __mod__(self, g):
        return self.divmod(g)[1]

    # -- misc -----------------------------------------------------------------

    def frobenius(self, k: int) -> "RingElem":
        F = self.ring.spec
        if k % F.e == 0:
            return self
        return RingElem(self.ring, self.low, [F.frob(c, k) for c in self.codes])

    def evaluate(self, x):
        """Evaluate at a field element (code or FqElem); returns a code."""
        F = self.ring.spec
        x = self.ring._code(x)
        if self.low < 0 and x == 0:
            raise ZeroDivisionError("evaluating a Laurent polynomial at 0")
        acc = 0
        for c in reversed(self.codes):
            acc = F.add(F.mul(acc, x), c)
        return F.mul(acc, F.pow(x, self.low)) if self.low else acc

    def in_prime_subring(self) -> bool:
        return all(c < self.ring.spec.p for c in self.codes)

    def __repr__(self):
        return format_elem(self)

    def to_json(self):
        F = self.ring.spec
        return {"flavor": self.ring.flavor, "low": self.low,
                "coeffs": [list(F.to_vec(c)) for c in self.codes]}

    @staticmethod
    def from_json(ring: Ring, data):
        if _flavor(data.get("flavor", ring.flavor)) != ring.flavor:
            raise ValueError("flavor mismatch in JSON value")
        F = ring.spec
        return RingElem(ring, int(data.get("low", 0)), [F.from_vec(c) for c in data["coeffs"]])


def format_elem(f: RingElem) -> str:
    if not f.codes:
        return "0"
    F = f.ring.spec
    parts = []
    for k, c in reversed(f.terms()):
        cs = repr(FqElem(F, c))
        if F.e > 1 and "+" in cs:
            cs = f"({cs})"
        if k == 0:
            parts.append(cs)
            continue
        mono = "t" if k == 1 else f"t^{k}"
        parts.append(mono if c == 1 else f"{cs}*{mono}")
    return " + ".join(parts)


# -- multiplication kernels --------------------------------------------------

def _mul_codes(F: FieldSpec, a, b):
    la, lb = len(a), len(b)
    if la * lb > _NUMPY_CUTOFF:
        return _mul_numpy(F, a, b)
    out = [0] * (la + lb - 1)
    if F.e == 1:
        p = F.p
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    out[i + j] += x * y
        return [v % p for v in out]
    if F.tabulated:
        add = F._tables[0]
        mul = F._tables[1]
        for i, x in enumerate(a):
            if x:
                row = mul[x]
                for j, y in enumerate(b):
                    if y:
                        out[i + j] = add[out[i + j]][row[y]]
        return out
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                if y:
                    out[i + j] = F.add(out[i + j], F.mul(x, y))
    return out


def _digits(F: FieldSpec, codes):
    arr = np.asarray(codes, dtype=np.int64)
    rows = []
    for _ in range(F.e):
        arr, r = np.divmod(arr, F.p)
        rows.append(r)
    return rows


_REDUCTION = {}


def _x_powers(F: FieldSpec):
    """Coordinates of ``x^k`` for ``k < 2e - 1`` in the polynomial basis."""
    red = _REDUCTION.get(F)
    if red is None:
        red = []
        vec = [1] + [0] * (F.e - 1)
        xcode = F.from_vec([0, 1]) if F.e > 1 else 0
        code = 1
        for _ in range(2 * F.e - 1):
            red.append(F.to_vec(code))
            code = F.mul(code, xcode)
        _REDUCTION[F] = red
    return red


def _mul_numpy(F: FieldSpec, a, b):
    p = F.p
    if F.e == 1:
        prod = np.convolve(np.asarray(a, dtype=np.int64), np.asarray(b, dtype=np.int64)) % p
        return prod.tolist()
    da, db = _digits(F, a), _digits(F, b)
    e = F.e
    n = len(a) + len(b) - 1
    raw = [np.zeros(n, dtype=np.int64) for _ in range(2 * e - 1)]
    for i in range(e):
        if not da[i].any():
            continue
        for j in range(e):
            if db[j].any():
                raw[i + j] += np.convolve(da[i], db[j])
    red = _x_powers(F)
    out = [np.zeros(n, dtype=np.int64) for _ in range(e)]
    for k in range(2 * e - 1):
        row = raw[k] % p
        for m, c in enumerate(red[k]):
            if c:
                out[m] += c * row
    code = np.zeros(n, dtype=np.int64)
    for m in range(e - 1, -1, -1):
        code = code * p + out[m] % p
    return code.tolist()


def _poly_divmod(R: Ring, a: RingElem, c: RingElem):
    """Quotient and remainder of polynomials stored with nonnegative exponents."""
    F = R.spec
    # work on plain coefficient lists from exponent 0
    num = [0] * a.low + list(a.codes)
    den = [0] * c.low + list(c.codes)
    dc = len(den) - 1
    inv_lead = F.inv(den[-1])
    if len(num) - 1 < dc:
        return R.zero(), a
    quot = [0] * (len(num) - dc)
    for k in range(len(num) - 1, dc - 1, -1):
        coef = num[k]
        if coef:
            factor = F.mul(coef, inv_lead)
            quot[k - dc] = factor
            for m in range(dc + 1):
                if den[m]:
                    num[k - dc + m] = F.sub(num[k - dc + m], F.mul(factor, den[m]))
    Rem = RingElem(R, 0, num[:dc]) if dc else R.zero()
    return RingElem(R, 0, quot), Rem


# -- ring automorphisms ------------------------------------------------------

class RingAut:
    """``f(t) -> frob^k(f)(a*t^eps + b)``.

    Polynomial rings need ``eps = 1``; Laurent rings need ``b = 0``.
    """

    __slots__ = ("ring", "frob_exp", "a", "b", "eps")

    def __init__(self, ring: Ring, frob_exp: int = 0, a=1, b=0, eps: int = 1, raw: bool = False):
        # raw=True: a and b are already field codes
        F = ring.spec
        if not raw:
            a = ring._code(a)
            b = ring._code(b)
        if a == 0:
            raise ValueError("ring automorphism needs a nonzero scale a")
        if eps not in (1, -1):
            raise ValueError("eps must be +1 or -1")
        if not ring.laurent and eps != 1:
            raise ValueError("t -> t^-1 is not defined on a polynomial ring")
        if ring.laurent and b != 0:
            raise ValueError("a Laurent ring automorphism must have b = 0")
        self.ring = ring
        self.frob_exp = frob_exp % F.e
        self.a = a
        self.b = b
        self.eps = eps

    @classmethod
    def identity(cls, ring):
        return cls(ring)

    def key(self):
        return (self.frob_exp, self.a, self.b, self.eps)

    def __eq__(self, other):
        return isinstance(other, RingAut) and self.ring is other.ring and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def is_identity(self) -> bool:
        return self.key() == (0, 1, 0, 1)

    def __repr__(self):
        F = self.ring.spec
        img = f"{FqElem(F, self.a)!r}*t" if self.a != 1 else "t"
        if self.eps == -1:
            img += "^-1"
        if self.b:
            img += f" + {FqElem(F, self.b)!r}"
        fr = f", frob^{self.frob_exp}" if self.frob_exp else ""
        return f"RingAut(t -> {img}{fr})"

    def apply_scalar(self, c: int) -> int:
        return self.ring.spec.frob(c, self.frob_exp)

    def __call__(self, f: RingElem) -> RingElem:
        return ring_aut_apply(self, f)

    def compose(self, other: "RingAut") -> "RingAut":
        return ring_aut_compose(self, other)

    def inverse(self) -> "RingAut":
        F = self.ring.spec
        k = self.frob_exp
        if self.ring.laurent:
            # frob^k(a') = a^(-eps)
            target = F.pow(self.a, -self.eps)
            return RingAut(self.ring, -k, F.frob(target, -k), 0, self.eps, raw=True)
        ainv = F.inv(self.a)
        a2 = F.frob(ainv, -k)
        b2 = F.frob(F.neg(F.mul(self.b, ainv)), -k)
        return RingAut(self.ring, -k, a2, b2, 1, raw=True)

    def order(self) -> int:
        return ring_aut_order(self)

    def to_json(self):
        F = self.ring.spec
        return {"frob_exp": self.frob_exp, "a": list(F.to_vec(self.a)),
                "b": list(F.to_vec(self.b)), "eps": self.eps}

    @staticmethod
    def from_json(ring, data):
        return RingAut(ring, data.get("frob_exp", 0), data.get("a", 1), data.get("b", 0), data.get("eps", 1))


def ring_aut_apply(rho: RingAut, f: RingElem) -> RingElem:
    R = rho.ring
    if f.ring is not R:
        raise ValueError("ring automorphism applied to an element of another ring")
    if not f.codes:
        return f
    F = R.spec
    codes = [F.frob(c, rho.frob_exp) for c in f.codes] if rho.frob_exp else list(f.codes)
    if rho.b == 0:
        # t^k -> a^k t^(eps k)
        a = rho.a
        if R.laurent:
            out = {}
            for i, c in enumerate(codes):
                if c:
                    k = f.low + i
                    out[rho.eps * k] = F.mul(c, F.pow(a, k))
            return R.from_terms({k: F.to_vec(v) for k, v in out.items()})
        scaled = []
        ak = 1
        for c in codes:
            scaled.append(F.mul(c, ak))
            ak = F.mul(ak, a)
        return RingElem(R, 0, scaled)
    # Horner in the image of t
    image = RingElem(R, 0, (rho.b, rho.a))
    acc = R.zero()
    for c in reversed(codes):
        acc = acc * image + RingElem(R, 0, (c,))
    return acc


def ring_aut_compose(r1: RingAut, r2: RingAut) -> RingAut:
    """The automorphism ``r1 o r2`` (apply ``r2`` first)."""
    if r1.ring is not r2.ring:
        raise ValueError("ring automorphisms over different rings")
    R = r1.ring
    F = R.spec
    k1 = r1.frob_exp
    fa2 = F.frob(r2.a, k1)
    if R.laurent:
        # t -> r1(a2 t^eps2) = F^k1(a2) (a1 t^eps1)^eps2
        a = F.mul(fa2, F.pow(r1.a, r2.eps))
        return RingAut(R, k1 + r2.frob_exp, a, 0, r1.eps * r2.eps, raw=True)
    a = F.mul(fa2, r1.a)
    b = F.add(F.mul(fa2, r1.b), F.frob(r2.b, k1))
    return RingAut(R, k1 + r2.frob_exp, a, b, 1, raw=True)


def ring_aut_order(r: RingAut) -> int:
    cur = r
    n = 1
    while not cur.is_identity():
        cur = ring_aut_compose(r, cur)
        n += 1
    return n


def all_ring_auts(ring: Ring, laurent_b_zero: bool = True):
    """Every automorphism with ``a, b`` in the coefficient field."""
    F = ring.spec
    out = []
    eps_list = (1, -1) if ring.laurent else (1,)
    b_list = (0,) if ring.laurent else range(F.q)
    for k in range(F.e):
        for a in range(1, F.q):
            for b in b_list:
                for eps in eps_list:
                    out.append(RingAut(ring, k, a, b, eps, raw=True))
    return out


# -- s-expansion ---------------------------------------------------------------

def special_s(spec: FieldSpec, flavor, q: int = None) -> RingElem:
    return Ring(spec, flavor).special_s(q)


def s_expansion(f: RingElem, q: int = None):
    """Coordinates of ``f`` in powers of s with coefficients in Z/p, or None.

    The leading exponent of ``s^j`` is ``j*d`` with coefficient 1, where
    ``d`` is the top degree of s; this makes the system triangular on those
    pivot columns.  After solving for the pivots, the whole residual must
    vanish, otherwise ``f`` is not in F_p[s].
    """
    R = f.ring
    F = R.spec
    if not f.codes:
        return []
    s = R.s_power(1, q)
    d = s.high
    hi = f.high
    if hi < 0 or hi % d:
        return None
    n = hi // d
    if R.laurent and f.valuation != -hi:
        return None
    if not R.laurent and f.valuation < 0:
        return None
    coeffs = [0] * (n + 1)
    resid = f
    for j in range(n, -1, -1):
        c = resid.coeff(j * d)
        if c == 0:
            continue
        if c >= F.p:
            return None
        coeffs[j] = c
        resid = resid - R.s_power(j, q).scale(c)
    if resid.codes:
        return None
    return coeffs


def from_s_coeffs(ring: Ring, coeffs, q: int = None) -> RingElem:
    acc = ring.zero()
    for j, c in enumerate(coeffs):
        if c % ring.spec.p:
            acc = acc + ring.s_power(j, q).scale(c % ring.spec.p)
    return acc


def unit_decompose(f: RingElem):
    return f.unit_decompose()
