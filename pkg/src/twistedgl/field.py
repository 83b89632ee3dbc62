"""Finite fields GF(p^e) in a polynomial basis.

Elements are stored as integer codes ``sum(c_i * p**i)`` where ``c_0..c_{e-1}``
are the coordinates of the residue modulo the defining polynomial.  The ring
and matrix layers work directly on codes; :class:`FqElem` is the friendly
wrapper for user-facing values.
"""
from __future__ import annotations

import itertools
from functools import cached_property

# extension fields above this size compute products on the fly
_TABLE_LIMIT = 256


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


def _poly_mulmod(a, b, modulus, p):
    """Multiply coefficient lists ``a``, ``b`` (low first) mod the monic ``modulus``."""
    e = len(modulus) - 1
    prod = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                prod[i + j] += x * y
    for k in range(len(prod) - 1, e - 1, -1):
        c = prod[k] % p
        if c:
            for m in range(e):
                prod[k - e + m] -= c * modulus[m]
        prod[k] = 0
    out = [v % p for v in prod[:e]]
    return out + [0] * (e - len(out))


def _has_root_or_factor(modulus, p):
    """True when the monic ``modulus`` over Z/p is reducible (brute force)."""
    e = len(modulus) - 1
    if e == 1:
        return False
    # a reducible polynomial of degree e has a monic factor of degree <= e // 2
    for d in range(1, e // 2 + 1):
        for tail in itertools.product(range(p), repeat=d):
            divisor = list(tail) + [1]
            rem = list(modulus)
            for k in range(e, d - 1, -1):
                c = rem[k] % p
                if c:
                    for m in range(d + 1):
                        rem[k - d + m] -= c * divisor[m]
            if all(v % p == 0 for v in rem[:d]):
                return True
    return False


def is_irreducible(modulus, p: int) -> bool:
    if not modulus or modulus[-1] % p != 1:
        return False
    return not _has_root_or_factor([c % p for c in modulus], p)


class FieldSpec:
    """The field GF(p^e) = Z/p[x]/(modulus).

    ``modulus`` is the monic defining polynomial, coefficients listed from the
    constant term upward.  When omitted, the lexicographically least monic
    irreducible (comparing ``[c_0, ..., c_{e-1}]``) is chosen, so that the
    same ``(p, e)`` always yields the same model of the field.
    """

    def __init__(self, p: int, e: int = 1, modulus=None):
        if not is_prime(p):
            raise ValueError(f"p = {p} is not prime")
        if e < 1:
            raise ValueError(f"extension degree must be >= 1, got {e}")
        if p ** (2 * e) > 2 ** 62 and e > 1:
            raise ValueError("field too large for this library")
        if modulus is None:
            modulus = self._least_irreducible(p, e)
        else:
            modulus = [int(c) % p for c in modulus]
            if len(modulus) != e + 1 or modulus[-1] != 1:
                raise ValueError(f"modulus must be monic of degree {e}")
            if not is_irreducible(modulus, p):
                raise ValueError(f"modulus {modulus} is reducible over GF({p})")
        self.p = p
        self.e = e
        self.q = p ** e
        self.modulus = tuple(modulus)
        self._key = (p, e, self.modulus)

    @staticmethod
    def _least_irreducible(p, e):
        if e == 1:
            return [0, 1]
        for tail in itertools.product(range(p), repeat=e):
            cand = list(tail) + [1]
            if is_irreducible(cand, p):
                return cand
        raise AssertionError("no irreducible polynomial found")  # pragma: no cover

    def __eq__(self, other):
        return isinstance(other, FieldSpec) and self._key == other._key

    def __hash__(self):
        return hash(self._key)

    def __repr__(self):
        if self.e == 1:
            return f"GF({self.p})"
        return f"GF({self.p}^{self.e}, modulus={list(self.modulus)})"

    # -- codes <-> coordinate vectors -------------------------------------

    def to_vec(self, code: int) -> tuple:
        p = self.p
        out = []
        for _ in range(self.e):
            code, r = divmod(code, p)
            out.append(r)
        return tuple(out)

    def from_vec(self, vec) -> int:
        vec = list(vec)
        if len(vec) > self.e:
            raise ValueError(f"coefficient vector longer than e = {self.e}")
        code = 0
        for c in reversed(vec):
            code = code * self.p + (int(c) % self.p)
        return code

    def from_int(self, n: int) -> int:
        """Image of the integer ``n`` in the prime field, as a code."""
        return n % self.p

    # -- arithmetic on codes ----------------------------------------------

    @cached_property
    def _tables(self):
        q = self.q
        vecs = [self.to_vec(c) for c in range(q)]
        add = [[self.from_vec([(x + y) for x, y in zip(vecs[a], vecs[b])]) for b in range(q)]
               for a in range(q)]
        mul = [[self.from_vec(_poly_mulmod(vecs[a], vecs[b], self.modulus, self.p)) for b in range(q)]
               for a in range(q)]
        neg = [self.from_vec([-x for x in vecs[a]]) for a in range(q)]
        return add, mul, neg

    @property
    def tabulated(self) -> bool:
        return self.e > 1 and self.q <= _TABLE_LIMIT

    def add(self, a: int, b: int) -> int:
        if self.e == 1:
            return (a + b) % self.p
        if self.tabulated:
            return self._tables[0][a][b]
        return self.from_vec([x + y for x, y in zip(self.to_vec(a), self.to_vec(b))])

    def neg(self, a: int) -> int:
        if self.e == 1:
            return (-a) % self.p
        if self.tabulated:
            return self._tables[2][a]
        return self.from_vec([-x for x in self.to_vec(a)])

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        if self.e == 1:
            return (a * b) % self.p
        if self.tabulated:
            return self._tables[1][a][b]
        return self.from_vec(_poly_mulmod(self.to_vec(a), self.to_vec(b), self.modulus, self.p))

    def pow(self, a: int, k: int) -> int:
        if k < 0:
            a = self.inv(a)
            k = -k
        if self.e == 1:
            return pow(a, k, self.p)
        result = 1
        while k:
            if k & 1:
                result = self.mul(result, a)
            a = self.mul(a, a)
            k >>= 1
        return result

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("inverse of zero in " + repr(self))
        if self.e == 1:
            return pow(a, self.p - 2, self.p)
        return self.pow(a, self.q - 2)

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def frob(self, a: int, k: int = 1) -> int:
        """``a ** (p ** k)``; the exponent is reduced mod e."""
        k %= self.e
        if k == 0 or self.e == 1:
            return a
        if self.tabulated:
            return self._frob_tables[k][a]
        return self.pow(a, self.p ** k)

    @cached_property
    def _frob_tables(self):
        return [[self.pow(a, self.p ** k) for a in range(self.q)] for k in range(self.e)]

    def mult_order(self, a: int) -> int:
        if a == 0:
            raise ValueError("zero has no multiplicative order")
        n = self.q - 1
        order = n
        for d in _prime_factors(n):
            while order % d == 0 and self.pow(a, order // d) == 1:
                order //= d
        return order

    @cached_property
    def generator(self) -> int:
        """Least code generating the cyclic group GF(q)^x."""
        for a in range(1, self.q):
            if self.mult_order(a) == self.q - 1:
                return a
        raise AssertionError("unreachable")  # pragma: no cover

    @cached_property
    def _dlog(self):
        table = {}
        x = 1
        for k in range(self.q - 1):
            table[x] = k
            x = self.mul(x, self.generator)
        return table

    def dlog(self, a: int) -> int:
        """Discrete log of ``a`` to the base :attr:`generator` (brute force table)."""
        if a == 0:
            raise ValueError("log of zero")
        return self._dlog[a]

    def in_prime_field(self, a: int) -> bool:
        return a < self.p

    def is_square(self, a: int) -> bool:
        if a == 0:
            return True
        if self.p == 2:
            return True
        return self.dlog(a) % 2 == 0

    # -- element views ------------------------------------------------------

    def __call__(self, x) -> "FqElem":
        if isinstance(x, FqElem):
            if x.field != self:
                raise ValueError("element belongs to a different field")
            return x
        if isinstance(x, int):
            return FqElem(self, x % self.p)
        return FqElem(self, self.from_vec(x))

    def zero(self) -> "FqElem":
        return FqElem(self, 0)

    def one(self) -> "FqElem":
        return FqElem(self, 1)

    def gen(self) -> "FqElem":
        return FqElem(self, self.generator)

    def elements(self):
        return [FqElem(self, c) for c in range(self.q)]

    def units(self):
        return [FqElem(self, c) for c in range(1, self.q)]

    def to_json(self):
        return {"p": self.p, "e": self.e, "modulus": list(self.modulus)}

    @classmethod
    def from_json(cls, data):
        return cls(data["p"], data["e"], data.get("modulus"))


def fq_make(p: int, e: int = 1, modulus=None) -> FieldSpec:
    return FieldSpec(p, e, modulus)


def field_of_order(q: int) -> FieldSpec:
    """GF(q) for a prime power ``q`` with the default modulus."""
    for p in range(2, q + 1):
        if q % p == 0:
            break
    e = 0
    n = q
    while n % p == 0:
        n //= p
        e += 1
    if n != 1 or not is_prime(p):
        raise ValueError(f"{q} is not a prime power")
    return FieldSpec(p, e)


def _prime_factors(n):
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


class FqElem:
    """An element of GF(p^e)."""

    __slots__ = ("field", "code")

    def __init__(self, field: FieldSpec, code: int):
        self.field = field
        self.code = code

    @property
    def coeffs(self) -> tuple:
        return self.field.to_vec(self.code)

    def _coerce(self, other):
        if isinstance(other, FqElem):
            if other.field != self.field:
                raise ValueError("field mismatch")
            return other.code
        if isinstance(other, int):
            return other % self.field.p
        return NotImplemented

    def __add__(self, other):
        b = self._coerce(other)
        if b is NotImplemented:
            return b
        return FqElem(self.field, self.field.add(self.code, b))

    __radd__ = __add__

    def __neg__(self):
        return FqElem(self.field, self.field.neg(self.code))

    def __sub__(self, other):
        b = self._coerce(other)
        if b is NotImplemented:
            return b
        return FqElem(self.field, self.field.sub(self.code, b))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        b = self._coerce(other)
        if b is NotImplemented:
            return b
        return FqElem(self.field, self.field.mul(self.code, b))

    __rmul__ = __mul__

    def __truediv__(self, other):
        b = self._coerce(other)
        if b is NotImplemented:
            return b
        return FqElem(self.field, self.field.div(self.code, b))

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, k: int):
        return FqElem(self.field, self.field.pow(self.code, k))

    def inverse(self) -> "FqElem":
        return FqElem(self.field, self.field.inv(self.code))

    def frobenius(self, k: int = 1) -> "FqElem":
        return FqElem(self.field, self.field.frob(self.code, k))

    def order(self) -> int:
        return self.field.mult_order(self.code)

    def is_zero(self) -> bool:
        return self.code == 0

    def __bool__(self):
        return self.code != 0

    def __eq__(self, other):
        if isinstance(other, FqElem):
            return self.field == other.field and self.code == other.code
        if isinstance(other, int):
            return self.code == other % self.field.p
        return NotImplemented

    def __hash__(self):
        return hash((self.field, self.code))

    def __repr__(self):
        if self.field.e == 1:
            return str(self.code)
        terms = []
        for i, c in enumerate(self.coeffs):
            if c:
                mono = "" if i == 0 else ("w" if i == 1 else f"w^{i}")
                terms.append(f"{c}{mono}" if mono and c != 1 else (mono or str(c)))
        return "+".join(reversed(terms)) or "0"

    def to_json(self):
        return list(self.coeffs)


def fq_frobenius(x: FqElem, k: int) -> FqElem:
    return x.frobenius(k)
