"""Text input for ring elements and matrices.

Grammar (whitespace ignored)::

    elem   := term ('+' term)*
    term   := coeff | [coeff '*'] 't' ['^' ['-'] digits]
    coeff  := digits          # field code: base-p digits of c are the coordinates
    matrix := '[' row (',' row)* ']'
    row    := '[' elem (',' elem)* ']'

Negative exponents are only accepted over the Laurent ring.  Errors carry the
1-based column of the offending character.
"""
from __future__ import annotations

from .field import FqElem
from .matrix import Mat
from .ring import Ring, RingElem


class ParseError(ValueError):
    def __init__(self, msg: str, col: int, text: str):
        self.col = col
        self.text = text
        super().__init__(f"column {col}: {msg}")


class _Cursor:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def skip(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self):
        self.skip()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def fail(self, msg, pos=None):
        raise ParseError(msg, (self.pos if pos is None else pos) + 1, self.text)

    def expect(self, ch):
        if self.peek() != ch:
            got = self.peek() or "end of input"
            self.fail(f"expected {ch!r}, got {got!r}")
        self.pos += 1

    def digits(self):
        self.skip()
        start = self.pos
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            self.pos += 1
        if start == self.pos:
            self.fail("expected digits")
        return int(self.text[start:self.pos]), start


def _term(cur: _Cursor, ring: Ring):
    F = ring.spec
    coeff, exp = 1, 0
    if cur.peek().isdigit():
        coeff, at = cur.digits()
        if coeff >= F.q:
            cur.fail(f"coefficient {coeff} is not a code below q = {F.q}", at)
        if cur.peek() != "*":
            return coeff, 0
        cur.expect("*")
    if cur.peek() != "t":
        cur.fail(f"expected 't' or a coefficient, got {cur.peek() or 'end of input'!r}")
    cur.pos += 1
    exp = 1
    if cur.peek() == "^":
        cur.pos += 1
        sign = 1
        at = cur.pos
        if cur.peek() == "-":
            sign = -1
            cur.pos += 1
            at = cur.pos - 1
        val, _ = cur.digits()
        exp = sign * val
        if exp < 0 and not ring.laurent:
            cur.fail("negative exponent over the polynomial ring", at)
    return coeff, exp


def _elem(cur: _Cursor, ring: Ring) -> RingElem:
    F = ring.spec
    acc = {}
    while True:
        c, k = _term(cur, ring)
        acc[k] = F.add(acc.get(k, 0), c)
        if cur.peek() != "+":
            break
        cur.pos += 1
    return ring.from_terms((k, FqElem(F, c)) for k, c in acc.items())


def _finish(cur: _Cursor):
    if cur.peek():
        cur.fail(f"unexpected {cur.peek()!r}")


def parse_elem(text: str, ring: Ring) -> RingElem:
    cur = _Cursor(text)
    out = _elem(cur, ring)
    _finish(cur)
    return out


def parse_matrix(text: str, ring: Ring) -> Mat:
    cur = _Cursor(text)
    rows = []
    cur.expect("[")
    while True:
        start = cur.pos
        cur.expect("[")
        row = [_elem(cur, ring)]
        while cur.peek() == ",":
            cur.pos += 1
            row.append(_elem(cur, ring))
        cur.expect("]")
        if rows and len(row) != len(rows[0]):
            cur.fail(f"row has {len(row)} entries, expected {len(rows[0])}", start)
        rows.append(row)
        if cur.peek() != ",":
            break
        cur.pos += 1
    cur.expect("]")
    _finish(cur)
    if len(rows) != len(rows[0]):
        raise ParseError("matrix is not square", 1, text)
    return Mat(ring, rows)


def parse_range(text: str):
    """``a..b`` (inclusive) or a comma list of integers."""
    try:
        if ".." in text:
            a, b = text.split("..", 1)
            lo, hi = int(a), int(b)
            if hi < lo:
                raise ValueError
            return list(range(lo, hi + 1))
        return [int(x) for x in text.split(",")]
    except ValueError:
        raise ParseError(f"bad range {text!r}; use a..b or a,b,c", 1, text) from None
