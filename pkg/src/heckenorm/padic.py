"""Exact p-adic linear algebra on 2x2 rational matrices.

Rationals stand in for elements of Q_p: a rational with non-p denominator
is a p-adic integer, and unit parts are carried along exactly.  Every
decomposition below returns matrices whose product reproduces the input
bit-for-bit.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

INF = float("inf")


def valuation(p: int, q) -> int:
    """p-adic valuation of a nonzero rational."""
    q = Fraction(q)
    if q == 0:
        raise ValueError("valuation of zero")
    return ord_p(p, q)


def ord_p(p: int, q) -> float:
    """valuation, extended by +inf at zero."""
    q = Fraction(q)
    if q == 0:
        return INF
    v = 0
    num, den = q.numerator, q.denominator
    while num % p == 0:
        num //= p
        v += 1
    while den % p == 0:
        den //= p
        v -= 1
    return v


def unit_part(p: int, q) -> Fraction:
    q = Fraction(q)
    return q / Fraction(p) ** valuation(p, q)


def to_residue(p: int, q, prec: int) -> int:
    """Image of a p-integral rational in Z/p^prec."""
    q = Fraction(q)
    mod = p ** prec
    if q.denominator % p == 0:
        raise ValueError(f"{q} is not p-integral for p={p}")
    return (q.numerator * pow(q.denominator, -1, mod)) % mod if mod > 1 else 0


@dataclass(frozen=True)
class Mat2:
    a: Fraction
    b: Fraction
    c: Fraction
    d: Fraction

    def __post_init__(self):
        for name in "abcd":
            object.__setattr__(self, name, Fraction(getattr(self, name)))

    @classmethod
    def identity(cls):
        return cls(1, 0, 0, 1)

    @classmethod
    def diag(cls, x, y):
        return cls(x, 0, 0, y)

    @classmethod
    def scalar(cls, x):
        return cls(x, 0, 0, x)

    def rows(self):
        return ((self.a, self.b), (self.c, self.d))

    def entries(self):
        return (self.a, self.b, self.c, self.d)

    def __matmul__(self, o: "Mat2") -> "Mat2":
        return Mat2(
            self.a * o.a + self.b * o.c,
            self.a * o.b + self.b * o.d,
            self.c * o.a + self.d * o.c,
            self.c * o.b + self.d * o.d,
        )

    def scale(self, x) -> "Mat2":
        x = Fraction(x)
        return Mat2(self.a * x, self.b * x, self.c * x, self.d * x)

    def det(self) -> Fraction:
        return self.a * self.d - self.b * self.c

    def inv(self) -> "Mat2":
        det = self.det()
        if det == 0:
            raise ZeroDivisionError("singular matrix")
        return Mat2(self.d / det, -self.b / det, -self.c / det, self.a / det)

    def minval(self, p: int) -> float:
        return min(ord_p(p, x) for x in self.entries())

    def to_json(self):
        return [[f"{x.numerator}/{x.denominator}" for x in row] for row in self.rows()]

    @classmethod
    def from_json(cls, obj):
        (a, b), (c, d) = obj
        return cls(Fraction(a), Fraction(b), Fraction(c), Fraction(d))


@dataclass(frozen=True)
class GElement:
    """A pair of invertible 2x2 matrices."""

    slot1: Mat2
    slot2: Mat2

    @classmethod
    def identity(cls):
        return cls(Mat2.identity(), Mat2.identity())

    def __matmul__(self, o: "GElement") -> "GElement":
        return GElement(self.slot1 @ o.slot1, self.slot2 @ o.slot2)

    def inv(self) -> "GElement":
        return GElement(self.slot1.inv(), self.slot2.inv())

    def to_json(self):
        return [self.slot1.to_json(), self.slot2.to_json()]

    @classmethod
    def from_json(cls, obj):
        return cls(Mat2.from_json(obj[0]), Mat2.from_json(obj[1]))


def spread(p: int, g: Mat2) -> int:
    """Smallest M >= 0 with g^{-1} Gamma(p^M) g inside GL2(Z_p)."""
    return int(max(0, -(g.minval(p) + g.inv().minval(p))))


def in_gl2_zp(p: int, m: Mat2) -> bool:
    return m.minval(p) >= 0 and ord_p(p, m.det()) == 0


def iwasawa_decompose(p: int, g: Mat2):
    """Write g = [[p^t1, y], [0, p^t2]] @ k with k in GL2(Z_p).

    Returns (t1, t2, y, k).  The bottom row pivot is its minimum-valuation
    entry, ties going to the left column.
    """
    if g.det() == 0:
        raise ValueError("singular matrix")
    c, d = g.c, g.d
    # column operations only, recorded as a matrix acting on the right
    ops = Mat2.identity()
    h = g
    if ord_p(p, c) <= ord_p(p, d):
        swap = Mat2(0, 1, 1, 0)
        h = h @ swap
        ops = ops @ swap
    # now v(h.d) <= v(h.c): clear bottom-left
    if h.c != 0:
        e = Mat2(1, 0, -h.c / h.d, 1)
        h = h @ e
        ops = ops @ e
    t2 = valuation(p, h.d)
    t1 = valuation(p, h.a)
    fix = Mat2.diag(Fraction(p) ** t1 / h.a, Fraction(p) ** t2 / h.d)
    h = h @ fix
    ops = ops @ fix
    k = ops.inv()
    upper = h
    assert upper.c == 0 and upper @ k == g
    return int(t1), int(t2), upper.b, k


def hermite_form(p: int, g: Mat2):
    """Upper-triangular representative of g GL2(Z_p) in the shape
    [[p^a, b], [0, p^c]] with b reduced to a canonical residue.

    The residue is taken modulo p^a Z_p, as an integer combination
    sum_{a' <= i < a} b_i p^i with 0 <= b_i < p.
    """
    t1, t2, y, _ = iwasawa_decompose(p, g)
    # b is determined modulo p^t1 Z_p
    if y == 0 or valuation(p, y) >= t1:
        return t1, t2, Fraction(0)
    v = int(valuation(p, y))
    prec = t1 - v
    res = to_residue(p, y / Fraction(p) ** v, prec)
    return t1, t2, Fraction(res) * Fraction(p) ** v


def smith_normal_form(p: int, g: Mat2):
    """Return (a, c, k1, k2) with g = k1 @ diag(p^a, p^c) @ k2, a <= c."""
    if g.det() == 0:
        raise ValueError("singular matrix")
    vals = [ord_p(p, x) for x in g.entries()]
    i = vals.index(min(vals))
    left = Mat2.identity()  # accumulates row ops (applied on the left)
    right = Mat2.identity()  # accumulates column ops (applied on the right)
    h = g
    swap = Mat2(0, 1, 1, 0)
    if i in (2, 3):
        h = swap @ h
        left = swap @ left
    if i in (1, 3):
        h = h @ swap
        right = right @ swap
    # pivot at (0,0) has minimum valuation, so the eliminations are integral
    er = Mat2(1, 0, -h.c / h.a, 1)
    h = er @ h
    left = er @ left
    ec = Mat2(1, -h.b / h.a, 0, 1)
    h = h @ ec
    right = right @ ec
    a = int(valuation(p, h.a))
    c = int(valuation(p, h.d))
    fix = Mat2.diag(Fraction(p) ** a / h.a, Fraction(p) ** c / h.d)
    h = h @ fix
    right = right @ fix
    k1 = left.inv()
    k2 = right.inv()
    assert k1 @ Mat2.diag(Fraction(p) ** a, Fraction(p) ** c) @ k2 == g
    return a, c, k1, k2


def snf_divisors(p: int, g: Mat2):
    vmin = int(g.minval(p))
    return vmin, int(valuation(p, g.det())) - vmin


def solve_double_coset(p: int, A: Mat2, B: Mat2):
    """Find k in GL2(Z_p) with A @ k @ B in GL2(Z_p), or None."""
    a1, c1, k1, k2 = smith_normal_form(p, A)
    a2, c2, l1, l2 = smith_normal_form(p, B.inv())
    if (a1, c1) != (a2, c2):
        return None
    k = k2.inv() @ l2
    assert in_gl2_zp(p, A @ k @ B)
    return k
