"""Weakly reduced words in an amalgam ``G0 *_L G1`` and the Nagao splitting.

For GL2(F[t]) the factors are ``G0 = GL2(F)`` and ``G1 = B`` (upper
triangular matrices over F[t]) glued along ``B0 = B n GL2(F)``.  Words keep
the actual matrices so every reduction can be multiplied back and checked.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

from .field import FqElem
from .matrix import Mat, diagonal, e12, swap_u
from .ring import Ring, RingElem

EDGE = "edge"


@dataclass(frozen=True)
class AmalgamSpec:
    in_factor0: Callable[[Mat], bool]
    in_factor1: Callable[[Mat], bool]
    in_edge: Callable[[Mat], bool]
    ring: Ring
    n: int = 2

    def tag(self, m: Mat):
        if self.in_edge(m):
            return EDGE
        if self.in_factor0(m):
            return 0
        if self.in_factor1(m):
            return 1
        raise ValueError(f"matrix lies in neither factor: {m!r}")


def _in_g0(m: Mat) -> bool:
    return m.is_constant() and m.det().is_unit()


def _in_b(m: Mat) -> bool:
    if not m.is_upper():
        return False
    return all(m.rows[i][i].is_const() and m.rows[i][i] for i in range(m.n))


def _in_b0(m: Mat) -> bool:
    return m.is_constant() and _in_b(m)


def nagao_spec(ring: Ring) -> AmalgamSpec:
    if ring.laurent:
        raise ValueError("the Nagao splitting is for F[t], not the Laurent ring")
    return AmalgamSpec(_in_g0, _in_b, _in_b0, ring, 2)


class AmalgamWord:
    """A weakly reduced word: ``factors`` is a list of ``(tag, Mat)``.

    ``tag`` is 0 or 1 for factor elements outside the edge group; the
    edge-only word of a nontrivial edge element is ``[("edge", c)]`` and
    the identity is the empty word.
    """

    def __init__(self, factors, spec: AmalgamSpec):
        self.factors = list(factors)
        self.spec = spec

    def __len__(self):
        return len(self.factors)

    @property
    def length(self) -> int:
        return len(self.factors)

    @property
    def tags(self):
        return [t for t, _ in self.factors]

    def mats(self):
        return [m for _, m in self.factors]

    def product(self) -> Mat:
        acc = Mat.identity(self.spec.ring, self.spec.n)
        for _, m in self.factors:
            acc = acc * m
        return acc

    def is_weakly_reduced(self) -> bool:
        if len(self.factors) == 1 and self.factors[0][0] == EDGE:
            return not self.factors[0][1].is_identity() and self.spec.in_edge(self.factors[0][1])
        for i, (t, m) in enumerate(self.factors):
            if t == EDGE or self.spec.tag(m) != t:
                return False
            if i and self.factors[i - 1][0] == t:
                return False
        return True

    def inverse(self) -> "AmalgamWord":
        return AmalgamWord([(t, m.inverse()) for t, m in reversed(self.factors)], self.spec)

    def __repr__(self):
        return "AmalgamWord(" + " . ".join(f"{t}:{m!r}" for t, m in self.factors) + ")"

    def to_json(self):
        return [{"factor": t, "mat": m.to_json()} for t, m in self.factors]

    @staticmethod
    def from_json(data, spec: AmalgamSpec) -> "AmalgamWord":
        return AmalgamWord([(d["factor"], Mat.from_json(spec.ring, d["mat"])) for d in data], spec)


def word_reduce(raw, spec: AmalgamSpec) -> AmalgamWord:
    """Merge neighbours in a common factor and absorb edge elements.

    Each raw matrix must lie in one of the factors.  Edge elements are
    multiplied into the factor on their left (or held as a prefix until the
    first non-edge factor).  When two same-factor neighbours multiply into
    the edge group the product is absorbed into the factor on its left,
    which never lands in the edge group, so no further cascade is needed.
    """
    ring, n = spec.ring, spec.n
    ident = Mat.identity(ring, n)
    stack = []
    pre = ident
    for x in raw:
        if isinstance(x, tuple):
            x = x[1]
        tag = spec.tag(x)
        if tag == EDGE:
            if stack:
                t0, top = stack[-1]
                stack[-1] = (t0, top * x)
            else:
                pre = pre * x
            continue
        if not stack:
            stack.append((tag, pre * x))
            pre = ident
            continue
        t0, top = stack[-1]
        if t0 != tag:
            stack.append((tag, x))
            continue
        y = top * x
        if spec.in_edge(y):
            stack.pop()
            if stack:
                t1, top1 = stack[-1]
                stack[-1] = (t1, top1 * y)
            else:
                pre = y
        else:
            stack[-1] = (tag, y)
    if not stack:
        if pre.is_identity():
            return AmalgamWord([], spec)
        return AmalgamWord([(EDGE, pre)], spec)
    return AmalgamWord(stack, spec)


def word_length(w: AmalgamWord) -> int:
    return len(w.factors)


def element_length(g: Mat, spec: AmalgamSpec) -> int:
    return word_length(nagao_decompose(g, spec=spec))


def concat(*words) -> AmalgamWord:
    spec = words[0].spec
    mats = [m for w in words for m in w.mats()]
    return word_reduce(mats, spec)


def edge_shuffle(w: AmalgamWord, edge_elems, rng) -> AmalgamWord:
    """Replace ``x_i, x_(i+1)`` by ``x_i h, h^-1 x_(i+1)`` with random edge ``h``."""
    fs = list(w.factors)
    for i in range(len(fs) - 1):
        h = rng.choice(edge_elems)
        t0, a = fs[i]
        t1, b = fs[i + 1]
        fs[i] = (t0, a * h)
        fs[i + 1] = (t1, h.inverse() * b)
    return AmalgamWord(fs, w.spec)


# -- Nagao decomposition --------------------------------------------------------

def _swap(ring: Ring, group: str) -> Mat:
    if group == "SL2":
        one, zero = ring.one(), ring.zero()
        return Mat._raw(ring, ((zero, one), (-one, zero)))
    return swap_u(ring)


def nagao_decompose(g: Mat, group: str = "GL2", spec: AmalgamSpec = None) -> AmalgamWord:
    """Write ``g`` in GL2(F[t]) as a weakly reduced word in ``GL2(F)`` and ``B``.

    Euclid on the first column: when ``deg a >= deg c`` clear the top entry
    with a shear from B, otherwise swap the rows with a constant matrix.
    For SL2 the swap is ``[[0, 1], [-1, 0]]`` so every factor has det 1.
    """
    ring = g.ring
    if spec is None:
        spec = nagao_spec(ring)
    group = group.upper()
    if group not in ("GL2", "SL2"):
        raise ValueError(f"group must be GL2 or SL2, got {group!r}")
    if g.n != 2:
        raise ValueError("Nagao decomposition is for 2 x 2 matrices")
    d = g.det()
    if not d.is_unit():
        raise ValueError("not in GL_2(F[t]): determinant is not a unit")
    if group == "SL2" and d != ring.one():
        raise ValueError("not in SL_2(F[t]): determinant is not 1")
    w = _swap(ring, group)
    winv = w.inverse()
    factors = []
    m = g
    while m.rows[1][0]:
        a, c = m.rows[0][0], m.rows[1][0]
        if a.degree() >= c.degree():
            quo = a.divmod(c)[0]
            m = e12(ring, -quo) * m
            factors.append(e12(ring, quo))
        else:
            m = winv * m
            factors.append(w)
    factors.append(m)
    return word_reduce(factors, spec)


# -- length parity --------------------------------------------------------------------

def lemma_length_parity(z: AmalgamWord, x: AmalgamWord, w: AmalgamWord):
    """Check the dichotomy ``l(zxw) == m`` or ``l(zxw)`` odd.

    Returns ``(verdict, length)`` with verdict one of ``"equals-m"``,
    ``"odd"``, ``"violation"`` or ``"hypothesis"`` (inputs outside the
    required shape; not a failure).
    """
    k = len(z)
    m = len(x)
    ok = (k >= 2 and len(w) == k and m >= 2 and m % 2 == 0
          and all(wd.is_weakly_reduced() for wd in (z, x, w))
          and z.factors[-1][0] == 0 and w.factors[0][0] == 0)
    if not ok:
        return "hypothesis", None
    total = concat(z, x, w)
    length = len(total)
    if length == m:
        return "equals-m", length
    if length % 2 == 1:
        return "odd", length
    return "violation", length


# -- random factor elements ----------------------------------------------------

def random_g0_nonedge(ring: Ring, rng) -> Mat:
    F = ring.spec
    while True:
        vals = [ring.elem((rng.randrange(F.q),)) for _ in range(4)]
        m = Mat(ring, [vals[:2], vals[2:]])
        if vals[2] and m.det():
            return m


def random_b_nonedge(ring: Ring, rng, max_deg: int = 2) -> Mat:
    F = ring.spec
    while True:
        f = ring.random(rng, max_deg)
        if f.degree() >= 1:
            lam = ring.elem((rng.randrange(1, F.q),))
            mu = ring.elem((rng.randrange(1, F.q),))
            return Mat(ring, [[lam, f], [ring.zero(), mu]])


def random_edge(ring: Ring, rng) -> Mat:
    F = ring.spec
    lam = ring.elem((rng.randrange(1, F.q),))
    mu = ring.elem((rng.randrange(1, F.q),))
    return Mat(ring, [[lam, ring.elem((rng.randrange(F.q),))], [ring.zero(), mu]])


def random_word(spec: AmalgamSpec, rng, length: int, first: int = None, max_deg: int = 2) -> AmalgamWord:
    """Alternating word of the given length starting in factor ``first``."""
    if first is None:
        first = rng.randrange(2)
    fs = []
    tag = first
    for _ in range(length):
        m = random_g0_nonedge(spec.ring, rng) if tag == 0 else random_b_nonedge(spec.ring, rng, max_deg)
        fs.append((tag, m))
        tag = 1 - tag
    return AmalgamWord(fs, spec)


def edge_elements(ring: Ring):
    F = ring.spec
    out = []
    for a in range(1, F.q):
        for d in range(1, F.q):
            for b in range(F.q):
                out.append(Mat(ring, [[ring.elem((a,)), ring.elem((b,))], [ring.zero(), ring.elem((d,))]]))
    return out


# -- Reiner automorphisms ------------------------------------------------------

class ReinerMap:
    """An additive bijection ``nu`` of F[t] fixing constants, identity above degree ``D``.

    ``images[i - 1]`` is ``nu(t^i)`` for ``1 <= i <= D`` (an F-linear map).
    Alternatively ``fp_images[(i, a)]`` gives ``nu(x^a t^i)`` on the F_p-basis
    ``x^a`` of F, describing a map that need only be F_p-linear.
    """

    def __init__(self, ring: Ring, D: int, images=None, fp_images=None):
        if ring.laurent:
            raise ValueError("Reiner maps act on F[t]")
        F = ring.spec
        self.ring = ring
        self.D = D
        table = {}
        if fp_images is not None:
            for (i, a), img in fp_images.items():
                table[(i, a)] = ring.coerce(img)
        else:
            images = [ring.coerce(f) for f in (images or [])]
            if len(images) != D:
                raise ValueError(f"need exactly D = {D} images")
            for i in range(1, D + 1):
                for a in range(F.e):
                    xa = F.from_vec([0] * a + [1])
                    table[(i, a)] = images[i - 1].scale(xa)
        for a in range(F.e):
            xa = F.from_vec([0] * a + [1])
            if table.get((0, a), ring.elem((xa,))) != ring.elem((xa,)):
                raise ValueError("a Reiner map must fix constants")
            table[(0, a)] = ring.elem((xa,))
        for (i, a), img in table.items():
            if i > D or img.degree() > D:
                raise ValueError("images must have degree <= D")
        if len(table) != (D + 1) * F.e:
            raise ValueError("F_p-linear table is incomplete")
        self.table = table
        if not self._invertible():
            raise ValueError("Reiner map data is not invertible")

    @classmethod
    def identity(cls, ring, D=1):
        return cls(ring, D, [ring.mono(1, i) for i in range(1, D + 1)])

    def _matrix_fp(self):
        """Matrix over Z/p of ``nu`` on the span of ``x^a t^i``, ``i <= D``."""
        F = self.ring.spec
        cols = []
        for i in range(self.D + 1):
            for a in range(F.e):
                img = self.table[(i, a)]
                col = []
                for j in range(self.D + 1):
                    col.extend(F.to_vec(img.coeff(j)))
                cols.append(col)
        return [list(r) for r in zip(*cols)]

    def _invertible(self) -> bool:
        return _rank_mod_p(self._matrix_fp(), self.ring.spec.p) == (self.D + 1) * self.ring.spec.e

    def __call__(self, f: RingElem) -> RingElem:
        F = self.ring.spec
        f = self.ring.coerce(f)
        acc = {}
        high = []
        for k, c in f.terms():
            if k > self.D:
                high.append((k, c))
                continue
            for a, ca in enumerate(F.to_vec(c)):
                if ca:
                    img = self.table[(k, a)]
                    for j, cj in img.terms():
                        acc[j] = F.add(acc.get(j, 0), F.mul(F.from_int(ca), cj))
        for k, c in high:
            acc[k] = F.add(acc.get(k, 0), c)
        return self.ring.from_terms({k: F.to_vec(v) for k, v in acc.items()})

    def is_linear_over(self, sub_gens) -> bool:
        """``nu(c f) == c nu(f)`` for ``c`` in the given scalars on the basis."""
        F = self.ring.spec
        for c in sub_gens:
            for i in range(self.D + 1):
                for a in range(F.e):
                    xa = F.from_vec([0] * a + [1])
                    basis = self.ring.mono(FqElem(F, xa), i)
                    if self(basis.scale(c)) != self(basis).scale(c):
                        return False
        return True

    def to_json(self):
        return {"D": self.D, "table": [[i, a, img.to_json()] for (i, a), img in sorted(self.table.items())]}


def _rank_mod_p(rows, p):
    rows = [[v % p for v in r] for r in rows]
    rank = 0
    ncols = len(rows[0]) if rows else 0
    for col in range(ncols):
        piv = next((r for r in range(rank, len(rows)) if rows[r][col]), None)
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        inv = pow(rows[rank][col], p - 2, p)
        rows[rank] = [v * inv % p for v in rows[rank]]
        for r in range(len(rows)):
            if r != rank and rows[r][col]:
                f = rows[r][col]
                rows[r] = [(v - f * w) % p for v, w in zip(rows[r], rows[rank])]
        rank += 1
    return rank


def square_subfield(spec) -> list:
    """Codes of the subfield generated by the squares of F (closure under + and *)."""
    elems = {spec.mul(a, a) for a in range(spec.q)}
    changed = True
    while changed:
        changed = False
        cur = list(elems)
        for a in cur:
            for b in cur:
                for c in (spec.add(a, b), spec.mul(a, b)):
                    if c not in elems:
                        elems.add(c)
                        changed = True
    return sorted(elems)


def reiner_valid(nu: ReinerMap, group: str = "GL2") -> bool:
    """F-linearity for GL2, linearity over the square subfield for SL2."""
    F = nu.ring.spec
    if group.upper() == "GL2":
        scalars = range(1, F.q)
    else:
        scalars = square_subfield(F)
    return nu.is_linear_over([c for c in scalars if c])


def reiner_valid_sl2(nu: ReinerMap) -> bool:
    return reiner_valid(nu, "SL2")


def reiner_on_factor(nu: ReinerMap, tag, m: Mat) -> Mat:
    if tag != 1:
        return m
    ring = m.ring
    lam, f = m.rows[0][0], m.rows[0][1]
    linv = lam.inverse()
    return Mat._raw(ring, ((lam, lam * nu(f * linv)), (ring.zero(), m.rows[1][1])))


def reiner_apply_word(nu: ReinerMap, w: AmalgamWord) -> Mat:
    acc = Mat.identity(w.spec.ring, 2)
    for tag, m in w.factors:
        acc = acc * reiner_on_factor(nu, tag, m)
    return acc


def reiner_apply(nu: ReinerMap, g: Mat) -> Mat:
    if g.ring is not nu.ring:
        raise ValueError("ring mismatch")
    if not g.det().is_unit():
        raise ValueError("not in GL_2(F[t])")
    return reiner_apply_word(nu, nagao_decompose(g))


def reiner_map_factor_word(nu: ReinerMap, w: AmalgamWord) -> AmalgamWord:
    """Image word, factor by factor (factors stay in their factor groups)."""
    return AmalgamWord([(t, reiner_on_factor(nu, t, m)) for t, m in w.factors], w.spec)
