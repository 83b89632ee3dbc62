"""Square matrices over F[t] and F[t, t^-1].

Indices in the named constructors are 1-based, matching the usual
``e_ij`` notation; ``Mat.rows`` itself is a plain 0-based tuple of tuples.
"""
from __future__ import annotations

import itertools

from .field import FqElem
from .ring import Ring, RingElem


class Mat:
    __slots__ = ("ring", "n", "rows", "_hash")

    def __init__(self, ring: Ring, rows):
        rows = tuple(tuple(ring.coerce(x) for x in row) for row in rows)
        n = len(rows)
        if n < 1 or any(len(r) != n for r in rows):
            raise ValueError("matrix must be square")
        self.ring = ring
        self.n = n
        self.rows = rows
        self._hash = None

    @classmethod
    def _raw(cls, ring, rows):
        # rows already hold RingElems of the right ring
        m = object.__new__(cls)
        m.ring = ring
        m.n = len(rows)
        m.rows = rows
        m._hash = None
        return m

    @classmethod
    def identity(cls, ring: Ring, n: int):
        one, zero = ring.one(), ring.zero()
        return cls._raw(ring, tuple(tuple(one if i == j else zero for j in range(n)) for i in range(n)))

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def _check(self, other):
        if not isinstance(other, Mat):
            raise TypeError("expected a Mat")
        if other.ring is not self.ring:
            raise ValueError("matrices over different rings")
        if other.n != self.n:
            raise ValueError(f"dimension mismatch: {self.n} vs {other.n}")

    def __mul__(self, other):
        if isinstance(other, (RingElem, int, FqElem)):
            c = self.ring.coerce(other)
            return Mat._raw(self.ring, tuple(tuple(c * x for x in row) for row in self.rows))
        self._check(other)
        return mat_mul(self, other)

    def __rmul__(self, other):
        return self * other

    def __add__(self, other):
        self._check(other)
        return Mat._raw(self.ring, tuple(tuple(x + y for x, y in zip(r1, r2))
                                         for r1, r2 in zip(self.rows, other.rows)))

    def __sub__(self, other):
        self._check(other)
        return Mat._raw(self.ring, tuple(tuple(x - y for x, y in zip(r1, r2))
                                         for r1, r2 in zip(self.rows, other.rows)))

    def __neg__(self):
        return Mat._raw(self.ring, tuple(tuple(-x for x in row) for row in self.rows))

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        result = Mat.identity(self.ring, self.n)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def __eq__(self, other):
        if not isinstance(other, Mat):
            return NotImplemented
        return self.ring is other.ring and self.rows == other.rows

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(self.key())
        return self._hash

    def key(self):
        """Hashable canonical form, used for set membership in orbit searches."""
        return tuple((x.low, x.codes) for row in self.rows for x in row)

    def transpose(self):
        return Mat._raw(self.ring, tuple(zip(*self.rows)))

    def trace(self) -> RingElem:
        return mat_trace(self)

    def det(self) -> RingElem:
        return mat_det(self)

    def inverse(self):
        return mat_inverse(self)

    def map_entries(self, f):
        return Mat._raw(self.ring, tuple(tuple(f(x) for x in row) for row in self.rows))

    def is_identity(self) -> bool:
        return self == Mat.identity(self.ring, self.n)

    def is_constant(self) -> bool:
        return all(x.is_const() for row in self.rows for x in row)

    def is_upper(self) -> bool:
        return all(not self.rows[i][j] for i in range(self.n) for j in range(i))

    def is_diagonal(self) -> bool:
        return all(not self.rows[i][j] for i in range(self.n) for j in range(self.n) if i != j)

    def block(self, k: int):
        """Leading ``k x k`` block."""
        return Mat._raw(self.ring, tuple(row[:k] for row in self.rows[:k]))

    def __repr__(self):
        body = "; ".join(", ".join(repr(x) for x in row) for row in self.rows)
        return f"[{body}]"

    def to_json(self):
        return {"n": self.n, "entries": [[x.to_json() for x in row] for row in self.rows]}

    @staticmethod
    def from_json(ring: Ring, data):
        rows = [[RingElem.from_json(ring, x) for x in row] for row in data["entries"]]
        m = Mat(ring, rows)
        if "n" in data and data["n"] != m.n:
            raise ValueError("declared n does not match entries")
        return m


# -- kernels -----------------------------------------------------------------

def mat_mul(a: Mat, b: Mat) -> Mat:
    n = a.n
    zero = a.ring.zero()
    cols = tuple(zip(*b.rows))
    out = []
    for row in a.rows:
        new = []
        for col in cols:
            acc = zero
            for x, y in zip(row, col):
                if x.codes and y.codes:
                    acc = acc + x * y
            new.append(acc)
        out.append(tuple(new))
    return Mat._raw(a.ring, tuple(out))


def mat_trace(a: Mat) -> RingElem:
    acc = a.ring.zero()
    for i in range(a.n):
        acc = acc + a.rows[i][i]
    return acc


def _det_rows(rows, ring):
    n = len(rows)
    if n == 1:
        return rows[0][0]
    if n == 2:
        return rows[0][0] * rows[1][1] - rows[0][1] * rows[1][0]
    acc = ring.zero()
    for j in range(n):
        x = rows[0][j]
        if not x.codes:
            continue
        minor = [r[:j] + r[j + 1:] for r in rows[1:]]
        term = x * _det_rows(minor, ring)
        acc = acc + term if j % 2 == 0 else acc - term
    return acc


def mat_det(a: Mat) -> RingElem:
    """Cofactor expansion along the first row."""
    return _det_rows(a.rows, a.ring)


def mat_inverse(a: Mat) -> Mat:
    d = mat_det(a)
    if not d.is_unit():
        raise ValueError("not in GL_n(R): determinant is not a unit")
    dinv = d.inverse()
    n = a.n
    if n == 1:
        return Mat._raw(a.ring, ((dinv,),))
    if n == 2:
        (p, q), (r, s) = a.rows
        return Mat._raw(a.ring, ((s * dinv, -q * dinv), (-r * dinv, p * dinv)))
    rows = a.rows
    adj = [[None] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            minor = [r[:j] + r[j + 1:] for k, r in enumerate(rows) if k != i]
            c = _det_rows(minor, a.ring)
            adj[j][i] = c * dinv if (i + j) % 2 == 0 else -(c * dinv)
    return Mat._raw(a.ring, tuple(tuple(r) for r in adj))


def gl_member(a: Mat) -> bool:
    return mat_det(a).is_unit()


def sl_member(a: Mat) -> bool:
    return mat_det(a) == a.ring.one()


# -- named constructors ------------------------------------------------------

def elementary(ring: Ring, i: int, j: int, lam, n: int = 2) -> Mat:
    """``e_ij(lam)``; indices are 1-based."""
    if i == j:
        raise ValueError("elementary matrix needs i != j")
    if not (1 <= i <= n and 1 <= j <= n):
        raise ValueError(f"index out of range for n = {n}")
    lam = ring.coerce(lam)
    one, zero = ring.one(), ring.zero()
    rows = [[one if r == c else zero for c in range(n)] for r in range(n)]
    rows[i - 1][j - 1] = lam
    return Mat._raw(ring, tuple(tuple(r) for r in rows))


def e12(ring, lam, n: int = 2) -> Mat:
    return elementary(ring, 1, 2, lam, n)


def e21(ring, lam, n: int = 2) -> Mat:
    return elementary(ring, 2, 1, lam, n)


def diagonal(ring: Ring, *entries) -> Mat:
    if len(entries) == 1 and isinstance(entries[0], (list, tuple)):
        entries = entries[0]
    n = len(entries)
    zero = ring.zero()
    d = [ring.coerce(x) for x in entries]
    return Mat._raw(ring, tuple(tuple(d[i] if i == j else zero for j in range(n)) for i in range(n)))


def h_mat(ring: Ring, a, n: int) -> Mat:
    """``diag(1, ..., 1, a)``."""
    return diagonal(ring, *([ring.one()] * (n - 1) + [ring.coerce(a)]))


def swap_u(ring: Ring) -> Mat:
    """The antidiagonal matrix ``[[0, 1], [1, 0]]``."""
    one, zero = ring.one(), ring.zero()
    return Mat._raw(ring, ((zero, one), (one, zero)))


def embed_block(block: Mat, n: int) -> Mat:
    """``diag(block, I)`` of size ``n``."""
    k = block.n
    if n < k:
        raise ValueError("target size smaller than block")
    if n == k:
        return block
    ring = block.ring
    one, zero = ring.one(), ring.zero()
    rows = []
    for i in range(n):
        if i < k:
            rows.append(tuple(block.rows[i]) + (zero,) * (n - k))
        else:
            rows.append(tuple(one if j == i else zero for j in range(n)))
    return Mat._raw(ring, tuple(rows))


def witness_x(m: int, ring: Ring, n: int = 2, q: int = None) -> Mat:
    """``e12(s^m) e21(-s^m)`` embedded in the top-left corner."""
    if m < 1:
        raise ValueError("witness index m must be >= 1")
    u = ring.s_power(m, q)
    one = ring.one()
    block = Mat._raw(ring, ((one - u * u, u), (-u, one)))
    return embed_block(block, n)


def trace_power(m: int, r: int, ring: Ring, q: int = None) -> RingElem:
    """``tr(x_m^r)`` for the 2x2 witness, by the two-term recurrence."""
    if m < 1 or r < 1:
        raise ValueError("m and r must be >= 1")
    u2 = ring.s_power(2 * m, q)
    c = ring.const(2) - u2
    prev, cur = c, ring.const(2) - u2.scale(ring.spec.from_int(4)) + u2 * u2
    if r == 1:
        return prev
    for _ in range(r - 2):
        prev, cur = cur, c * cur - prev
    return cur


def random_gl(ring: Ring, n: int, rng, length: int = 6, max_deg: int = 2) -> Mat:
    """A random invertible matrix: product of random shears and a unit diagonal."""
    g = diagonal(ring, *[ring.random_unit(rng, 1) for _ in range(n)])
    for _ in range(length):
        i, j = rng.sample(range(1, n + 1), 2)
        g = g * elementary(ring, i, j, ring.random(rng, max_deg), n)
    return g


def random_mat(ring: Ring, n: int, rng, max_deg: int = 2) -> Mat:
    return Mat(ring, [[ring.random(rng, max_deg) for _ in range(n)] for _ in range(n)])


# -- commutator certificates -----------------------------------------------

def commutator(a: Mat, b: Mat) -> Mat:
    return a * b * a.inverse() * b.inverse()


class CommutatorWord:
    """A product of commutators ``[a1, b1][a2, b2]...`` kept in factored form."""

    def __init__(self, pairs, ring: Ring, n: int):
        self.pairs = list(pairs)
        self.ring = ring
        self.n = n

    def __len__(self):
        return len(self.pairs)

    def evaluate(self) -> Mat:
        acc = Mat.identity(self.ring, self.n)
        for a, b in self.pairs:
            acc = acc * commutator(a, b)
        return acc

    def to_json(self):
        return [[a.to_json(), b.to_json()] for a, b in self.pairs]

    def __repr__(self):
        return f"CommutatorWord({len(self.pairs)} commutators, n={self.n})"


def elem_as_commutator(i: int, j: int, x, n: int, ring: Ring) -> CommutatorWord:
    """``e_ij(x) = [e_ik(x), e_kj(1)]`` for the least ``k`` outside ``{i, j}``."""
    if n < 3:
        raise ValueError("a single elementary commutator needs n >= 3")
    if i == j:
        raise ValueError("i and j must differ")
    k = next(k for k in range(1, n + 1) if k not in (i, j))
    x = ring.coerce(x)
    return CommutatorWord([(elementary(ring, i, k, x, n), elementary(ring, k, j, ring.one(), n))], ring, n)


def elem_as_commutator_sl2(x, ring: Ring) -> CommutatorWord:
    """``e12(x)`` in SL2 as ``ord(u)`` copies of ``[d, e12(y)]``.

    With ``lam`` generating GF(q)^x and ``u = lam^2 - 1``, the commutator
    ``[diag(lam, 1/lam), e12(y)]`` is ``e12(u*y)``.  Taking
    ``y = u^(N-1) x / N`` with ``N = ord(u)`` and repeating it ``N`` times
    gives ``e12(x)``; ``N`` divides ``q - 1`` so it is invertible mod p.
    """
    F = ring.spec
    if F.q < 4:
        raise ValueError("no such certificate by this construction: need q >= 4")
    x = ring.coerce(x)
    if not x.codes:
        return CommutatorWord([], ring, 2)
    lam = F.generator
    u = F.sub(F.mul(lam, lam), 1)
    N = F.mult_order(u)
    coef = F.mul(F.pow(u, N - 1), F.inv(F.from_int(N)))
    d = diagonal(ring, ring.elem((lam,)), ring.elem((F.inv(lam),)))
    pair = (d, e12(ring, x.scale(coef)))
    return CommutatorWord([pair] * N, ring, 2)
