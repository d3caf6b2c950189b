"""Polynomial model of the spherical Hecke algebra of GL2 x GL2.

An element is a finite Laurent polynomial in the central operators S1, S2
(invertible) and polynomial in T1, T2, with coefficients in Q(sqrt p).
Monomials are keyed by exponent tuples (e1, t1, e2, t2).
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from math import comb

from .field import QSqrtP

Key = tuple  # (e1, t1, e2, t2)


class HeckeElement:
    __slots__ = ("p", "terms")

    def __init__(self, p: int, terms=None):
        self.p = int(p)
        clean = {}
        for key, c in (terms or {}).items():
            c = c if isinstance(c, QSqrtP) else QSqrtP(p, c)
            if not c.is_zero():
                clean[tuple(int(x) for x in key)] = c
        self.terms = clean

    # constructors

    @classmethod
    def zero(cls, p):
        return cls(p)

    @classmethod
    def one(cls, p):
        return cls(p, {(0, 0, 0, 0): 1})

    @classmethod
    def monomial(cls, p, e1=0, t1=0, e2=0, t2=0, coeff=1):
        if t1 < 0 or t2 < 0:
            raise ValueError("T exponents must be non-negative")
        return cls(p, {(e1, t1, e2, t2): coeff})

    @classmethod
    def S(cls, p, slot, power=1):
        return cls.monomial(p, e1=power) if slot == 1 else cls.monomial(p, e2=power)

    @classmethod
    def T(cls, p, slot, power=1):
        return cls.monomial(p, t1=power) if slot == 1 else cls.monomial(p, t2=power)

    @classmethod
    def S_p(cls, p, power=1):
        return cls.monomial(p, e1=power, e2=power)

    # arithmetic

    def _coerce(self, other):
        if isinstance(other, HeckeElement):
            if other.p != self.p:
                raise ValueError("mixed primes")
            return other
        if isinstance(other, (int, Fraction, QSqrtP)):
            return HeckeElement(self.p, {(0, 0, 0, 0): other})
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        terms = dict(self.terms)
        for k, c in o.terms.items():
            terms[k] = terms[k] + c if k in terms else c
        return HeckeElement(self.p, terms)

    __radd__ = __add__

    def __neg__(self):
        return HeckeElement(self.p, {k: -c for k, c in self.terms.items()})

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, QSqrtP)):
            return HeckeElement(self.p, {k: c * other for k, c in self.terms.items()})
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        terms = {}
        for k1, c1 in self.terms.items():
            for k2, c2 in o.terms.items():
                k = (k1[0] + k2[0], k1[1] + k2[1], k1[2] + k2[2], k1[3] + k2[3])
                c = c1 * c2
                terms[k] = terms[k] + c if k in terms else c
        return HeckeElement(self.p, terms)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("only monomials in S are invertible here")
        out = HeckeElement.one(self.p)
        for _ in range(n):
            out = out * self
        return out

    def __eq__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return self.terms == o.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def is_zero(self):
        return not self.terms

    def __repr__(self):
        if not self.terms:
            return "HeckeElement(0)"
        parts = []
        for k in sorted(self.terms):
            parts.append(f"{self.terms[k]!r}*S1^{k[0]}T1^{k[1]}S2^{k[2]}T2^{k[3]}")
        return "HeckeElement(" + " + ".join(parts) + ")"

    # serialization

    def to_json_obj(self):
        return [
            {"e1": k[0], "t1": k[1], "e2": k[2], "t2": k[3], **c.to_json()}
            for k, c in sorted(self.terms.items())
        ]

    @classmethod
    def from_json_obj(cls, p, obj):
        terms = {}
        for row in obj:
            key = (row["e1"], row["t1"], row["e2"], row["t2"])
            terms[key] = QSqrtP.from_json(p, row)
        return cls(p, terms)

    def to_json(self) -> str:
        return json.dumps(self.to_json_obj(), sort_keys=True, separators=(",", ":"))


@dataclass(frozen=True)
class SatakeData:
    """Unramified parameters (alpha1, beta1) x (alpha2, beta2)."""

    p: int
    a1: QSqrtP
    b1: QSqrtP
    a2: QSqrtP
    b2: QSqrtP

    @classmethod
    def from_values(cls, p, a1, b1, a2, b2):
        conv = lambda x: x if isinstance(x, QSqrtP) else QSqrtP(p, x)  # noqa: E731
        return cls(p, conv(a1), conv(b1), conv(a2), conv(b2))

    @property
    def omega1(self):
        return self.a1 * self.b1

    @property
    def omega2(self):
        return self.a2 * self.b2

    @property
    def omega(self):
        return self.omega1 * self.omega2

    def products(self):
        """The four products alpha_i alpha'_j of the Rankin-Selberg L-factor."""
        return [x * y for x in (self.a1, self.b1) for y in (self.a2, self.b2)]

    def contragredient(self):
        return SatakeData(self.p, *(x.inverse() for x in (self.a1, self.b1, self.a2, self.b2)))

    def is_generic(self):
        """Nonzero parameters, distinct within each slot, and omega != 1."""
        vals = (self.a1, self.b1, self.a2, self.b2)
        return (
            all(not v.is_zero() for v in vals)
            and self.a1 != self.b1
            and self.a2 != self.b2
            and self.omega != 1
            and all(x != 1 for x in self.products())
        )


def theta_eval(h: HeckeElement, sat: SatakeData) -> QSqrtP:
    """Evaluate at the Satake point: S -> alpha*beta, T -> sqrt(p)(alpha+beta)."""
    p = h.p
    rt = QSqrtP.sqrt_p(p)
    s1, s2 = sat.omega1, sat.omega2
    u1, u2 = rt * (sat.a1 + sat.b1), rt * (sat.a2 + sat.b2)
    total = QSqrtP(p)
    for (e1, t1, e2, t2), c in h.terms.items():
        total = total + c * s1 ** e1 * u1 ** t1 * s2 ** e2 * u2 ** t2
    return total


def dual(h: HeckeElement) -> HeckeElement:
    """Involution S -> S^{-1}, T -> S^{-1} T in each slot."""
    return HeckeElement(
        h.p,
        {(-e1 - t1, t1, -e2 - t2, t2): c for (e1, t1, e2, t2), c in h.terms.items()},
    )


def schur_operator(p: int, slot: int, n: int) -> HeckeElement:
    """Hecke element whose Satake image is the Schur polynomial s_n(alpha, beta).

    Defined for n >= -2: s_{-1} = 0 and s_{-2} = -S^{-1}.
    """
    if n < -2:
        raise ValueError("schur_operator is defined for n >= -2")
    if n == -1:
        return HeckeElement.zero(p)
    if n == -2:
        return -HeckeElement.S(p, slot, -1)
    out = HeckeElement.zero(p)
    for j in range(n // 2 + 1):
        deg = n - 2 * j
        coeff = (-1) ** j * comb(n - j, j) * QSqrtP.p_half_power(p, -deg)
        out = out + HeckeElement.T(p, slot, deg) * HeckeElement.S(p, slot, j) * coeff
    return out


def euler_polynomial(p: int):
    """Coefficients c_0..c_4 with Theta(sum c_k X^k) = 1/L(Pi, s), X = p^-s."""
    S1, S2 = HeckeElement.S(p, 1), HeckeElement.S(p, 2)
    T1, T2 = HeckeElement.T(p, 1), HeckeElement.T(p, 2)
    inv_p = Fraction(1, p)
    return [
        HeckeElement.one(p),
        -(T1 * T2) * inv_p,
        (S1 * T2 * T2 + S2 * T1 * T1) * inv_p - S1 * S2 * 2,
        -(S1 * S2 * T1 * T2) * inv_p,
        S1 * S1 * S2 * S2,
    ]


def euler_at_one(p: int) -> HeckeElement:
    """P_p(1), the sum of the Euler coefficients."""
    total = HeckeElement.zero(p)
    for c in euler_polynomial(p):
        total = total + c
    return total


def gen_l_inverse(p: int, slot: int, r: int):
    """Coefficients [c0, c1, c2] of the inverse generalized L-factor in X.

    Slot 1 uses Schur operators of slot 1 with the T of slot 2 in the middle
    term; slot 2 is the mirror image.
    """
    if r < 1:
        raise ValueError("gen_l_inverse needs r >= 1")
    other = 2 if slot == 1 else 1
    S, S_o = HeckeElement.S(p, slot), HeckeElement.S(p, other)
    T_o = HeckeElement.T(p, other)
    c0 = schur_operator(p, slot, r - 1)
    c1 = -(S * T_o * schur_operator(p, slot, r - 2)) * QSqrtP.p_half_power(p, -1)
    c2 = S_o * S * S * schur_operator(p, slot, r - 3)
    return [c0, c1, c2]


def gen_l_inverse_at_one(p: int, slot: int, r: int) -> HeckeElement:
    c0, c1, c2 = gen_l_inverse(p, slot, r)
    return c0 + c1 + c2


def is_integral(h: HeckeElement) -> bool:
    """All coefficients in Z[1/p] (rational, denominator a power of p)."""
    for c in h.terms.values():
        if not c.is_rational():
            return False
        den = c.rat.denominator
        while den % h.p == 0:
            den //= h.p
        if den != 1:
            return False
    return True


def _by_central_line(h: HeckeElement):
    """Group monomials along S_p = S1 S2: key (e1 - e2, t1, t2) -> {e2: coeff}."""
    lines = {}
    for (e1, t1, e2, t2), c in h.terms.items():
        lines.setdefault((e1 - e2, t1, t2), {})[e2] = c
    return lines


def divide_exact(h: HeckeElement):
    """Return q with h = q (1 - S1 S2), or None if no such q exists."""
    p = h.p
    out = {}
    for (diff, t1, t2), line in _by_central_line(h).items():
        lo, hi = min(line), max(line)
        # q_j = sum_{i <= j} h_i, and the full sum must vanish
        acc = QSqrtP(p)
        for j in range(lo, hi + 1):
            acc = acc + line.get(j, QSqrtP(p))
            if j < hi and not acc.is_zero():
                out[(diff + j, t1, j, t2)] = acc
        if not acc.is_zero():
            return None
    q = HeckeElement(p, out)
    assert q * (1 - HeckeElement.S_p(p)) == h
    return q


def reduce_mod_ell(h: HeckeElement, ell: int):
    """Coefficients reduced mod ell; needs coefficients in Z[1/p] and ell != p."""
    if ell == h.p:
        raise ValueError("ell must differ from p")
    if not is_integral(h):
        raise ValueError("reduce_mod_ell needs coefficients in Z[1/p]")
    out = {}
    for k, c in h.terms.items():
        r = (c.rat.numerator * pow(c.rat.denominator, -1, ell)) % ell
        if r:
            out[k] = r
    return out


class LocalizedHecke:
    """Pair (numer, k) standing for numer / (1 - S1 S2)^k."""

    __slots__ = ("numer", "denom_power")

    def __init__(self, numer: HeckeElement, denom_power: int = 0):
        if denom_power < 0:
            raise ValueError("denom_power must be >= 0")
        self.numer = numer
        self.denom_power = denom_power

    @property
    def p(self):
        return self.numer.p

    def reduced(self) -> "LocalizedHecke":
        numer, k = self.numer, self.denom_power
        while k > 0:
            q = divide_exact(numer)
            if q is None:
                break
            numer, k = q, k - 1
        return LocalizedHecke(numer, k)

    def _cleared(self, k):
        base = 1 - HeckeElement.S_p(self.p)
        return self.numer * base ** (k - self.denom_power)

    def __eq__(self, other):
        if not isinstance(other, LocalizedHecke):
            return NotImplemented
        k = max(self.denom_power, other.denom_power)
        return self._cleared(k) == other._cleared(k)

    def __hash__(self):
        r = self.reduced()
        return hash((r.numer, r.denom_power))

    def __mul__(self, other):
        if isinstance(other, LocalizedHecke):
            return LocalizedHecke(self.numer * other.numer, self.denom_power + other.denom_power)
        return LocalizedHecke(self.numer * other, self.denom_power)

    def __add__(self, other):
        k = max(self.denom_power, other.denom_power)
        return LocalizedHecke(self._cleared(k) + other._cleared(k), k)

    def theta(self, sat: SatakeData) -> QSqrtP:
        den = theta_eval(1 - HeckeElement.S_p(self.p), sat) ** self.denom_power
        return theta_eval(self.numer, sat) / den

    def dual(self) -> "LocalizedHecke":
        # dual(1 - S_p) = 1 - S_p^{-1} = -S_p^{-1} (1 - S_p)
        k = self.denom_power
        factor = (-HeckeElement.S_p(self.p, 1)) ** k
        return LocalizedHecke(dual(self.numer) * factor, k)

    def __repr__(self):
        return f"LocalizedHecke({self.numer!r}, denom_power={self.denom_power})"
