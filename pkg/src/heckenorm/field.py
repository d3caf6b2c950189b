"""Exact arithmetic in Q(sqrt p).

Elements are pairs ``rat + irr*sqrt(p)`` with Fraction parts.  The prime
travels with every element; mixing primes raises.
"""

from __future__ import annotations

from fractions import Fraction
from numbers import Rational


class QSqrtP:
    __slots__ = ("p", "rat", "irr")

    def __init__(self, p: int, rat=0, irr=0):
        self.p = int(p)
        self.rat = Fraction(rat)
        self.irr = Fraction(irr)

    # construction helpers

    @classmethod
    def sqrt_p(cls, p):
        return cls(p, 0, 1)

    @classmethod
    def p_half_power(cls, p, k: int) -> "QSqrtP":
        """Return p**(k/2)."""
        q, r = divmod(k, 2)
        base = Fraction(p) ** q
        if r == 0:
            return cls(p, base, 0)
        return cls(p, 0, base)

    def _coerce(self, other):
        if isinstance(other, QSqrtP):
            if other.p != self.p:
                raise ValueError(f"mixed primes {self.p} and {other.p}")
            return other
        if isinstance(other, (int, Rational)):
            return QSqrtP(self.p, other, 0)
        return NotImplemented

    # arithmetic

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return QSqrtP(self.p, self.rat + o.rat, self.irr + o.irr)

    __radd__ = __add__

    def __neg__(self):
        return QSqrtP(self.p, -self.rat, -self.irr)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return QSqrtP(self.p, self.rat - o.rat, self.irr - o.irr)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return QSqrtP(
            self.p,
            self.rat * o.rat + self.p * self.irr * o.irr,
            self.rat * o.irr + self.irr * o.rat,
        )

    __rmul__ = __mul__

    def conj(self):
        return QSqrtP(self.p, self.rat, -self.irr)

    def norm(self) -> Fraction:
        return self.rat * self.rat - self.p * self.irr * self.irr

    def inverse(self):
        n = self.norm()
        if n == 0:
            raise ZeroDivisionError("inverse of zero in Q(sqrt p)")
        c = self.conj()
        return QSqrtP(self.p, c.rat / n, c.irr / n)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self * o.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, k: int):
        if not isinstance(k, int):
            raise TypeError("integer exponents only")
        if k < 0:
            return self.inverse() ** (-k)
        out = QSqrtP(self.p, 1, 0)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    # comparison and inspection

    def is_zero(self):
        return self.rat == 0 and self.irr == 0

    def is_rational(self):
        return self.irr == 0

    def __bool__(self):
        return not self.is_zero()

    def __eq__(self, other):
        if isinstance(other, QSqrtP):
            return self.p == other.p and self.rat == other.rat and self.irr == other.irr
        if isinstance(other, (int, Rational)):
            return self.irr == 0 and self.rat == other
        return NotImplemented

    def __hash__(self):
        if self.irr == 0:
            return hash(self.rat)
        return hash((self.p, self.rat, self.irr))

    def __repr__(self):
        if self.irr == 0:
            return f"QSqrtP({self.rat})"
        return f"QSqrtP({self.rat} + {self.irr}*sqrt({self.p}))"

    def __float__(self):
        return float(self.rat) + float(self.irr) * self.p ** 0.5

    def to_json(self):
        return {"rat": _frac_str(self.rat), "irr": _frac_str(self.irr)}

    @classmethod
    def from_json(cls, p, obj):
        return cls(p, Fraction(obj["rat"]), Fraction(obj["irr"]))


def _frac_str(q: Fraction) -> str:
    return f"{q.numerator}/{q.denominator}"


def frac_str(q) -> str:
    return _frac_str(Fraction(q))
