"""Analytic oracle: spherical Whittaker values, Lambda series and closed forms,
and the JPSS zeta integral, all exact in Q(sqrt p)[X, 1/X] with X = p^-s.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction

from .cosets import CanonicalCoset, PGCosetFunction, volume_orbit
from .field import QSqrtP
from .hecke import HeckeElement, SatakeData
from .schwartz import SchwartzFunction

INF = float("inf")


class DegenerateSatakeError(ValueError):
    pass


# ------------------------------------------------------ polynomial helpers

def _zero(p):
    return QSqrtP(p)


def poly_trim(a):
    a = list(a)
    while a and a[-1].is_zero():
        a.pop()
    return a


def poly_add(p, a, b):
    n = max(len(a), len(b))
    out = [_zero(p)] * n
    for i, c in enumerate(a):
        out[i] = out[i] + c
    for i, c in enumerate(b):
        out[i] = out[i] + c
    return poly_trim(out)


def poly_scale(a, c):
    return poly_trim([x * c for x in a])


def poly_mul(p, a, b):
    if not a or not b:
        return []
    out = [_zero(p)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x.is_zero():
            continue
        for j, y in enumerate(b):
            out[i + j] = out[i + j] + x * y
    return poly_trim(out)


def poly_shift(p, a, k):
    return [_zero(p)] * k + list(a) if a else []


def poly_eval(p, a, x):
    total = _zero(p)
    for c in reversed(a):
        total = total * x + c
    return total


@dataclass
class FormalSeries:
    """sum_{k=0..order} coeffs[k] X^(start + k)."""

    p: int
    coeffs: list
    order: int
    start: int = 0

    def __eq__(self, other):
        return (self.start == other.start and self.order == other.order
                and all(a == b for a, b in zip(self.coeffs, other.coeffs)))


@dataclass
class RationalFunctionX:
    """X^shift * numer(X) / denom(X)."""

    p: int
    numer: list
    denom: list
    shift: int = 0

    def __post_init__(self):
        self.numer = poly_trim(self.numer)
        self.denom = poly_trim(self.denom)
        if not self.denom:
            raise ZeroDivisionError("zero denominator")

    @classmethod
    def const(cls, p, c):
        return cls(p, [c if isinstance(c, QSqrtP) else QSqrtP(p, c)], [QSqrtP(p, 1)])

    def _aligned(self, other):
        s = min(self.shift, other.shift)
        return (poly_shift(self.p, self.numer, self.shift - s),
                poly_shift(self.p, other.numer, other.shift - s), s)

    def __add__(self, other):
        p = self.p
        a, b, s = self._aligned(other)
        numer = poly_add(p, poly_mul(p, a, other.denom), poly_mul(p, b, self.denom))
        return RationalFunctionX(p, numer, poly_mul(p, self.denom, other.denom), s)

    def __mul__(self, other):
        p = self.p
        if isinstance(other, RationalFunctionX):
            return RationalFunctionX(p, poly_mul(p, self.numer, other.numer),
                                     poly_mul(p, self.denom, other.denom), self.shift + other.shift)
        return RationalFunctionX(p, poly_scale(self.numer, other), self.denom, self.shift)

    def __eq__(self, other):
        if not isinstance(other, RationalFunctionX):
            return NotImplemented
        p = self.p
        a, b, _ = self._aligned(other)
        return poly_mul(p, a, other.denom) == poly_mul(p, b, self.denom)

    def is_zero(self):
        return not self.numer

    def at_one(self) -> QSqrtP:
        d = poly_eval(self.p, self.denom, 1)
        if d.is_zero():
            raise DegenerateSatakeError("denominator vanishes at X = 1")
        return poly_eval(self.p, self.numer, 1) / d

    def series(self, order: int, start: int | None = None) -> FormalSeries:
        """Coefficients of X^start .. X^(start+order); needs denom(0) != 0."""
        p = self.p
        if self.denom[0].is_zero():
            raise ValueError("series expansion needs denom(0) != 0")
        start = self.shift if start is None else start
        # numer / denom as a power series up to degree (start + order - shift)
        top = start + order - self.shift
        inv0 = self.denom[0].inverse()
        quot = []
        rem = list(self.numer) + [_zero(p)] * max(0, top + 1 - len(self.numer))
        for k in range(top + 1):
            c = rem[k] * inv0 if k < len(rem) else _zero(p)
            quot.append(c)
            for j, dj in enumerate(self.denom):
                if k + j < len(rem):
                    rem[k + j] = rem[k + j] - c * dj
        coeffs = []
        for e in range(start, start + order + 1):
            k = e - self.shift
            coeffs.append(quot[k] if 0 <= k < len(quot) else _zero(p))
        return FormalSeries(p, coeffs, order, start)


# --------------------------------------------------------- local factors

def schur_value(n: int, a: QSqrtP, b: QSqrtP) -> QSqrtP:
    """s_n(a, b) = (a^(n+1) - b^(n+1)) / (a - b); s_-1 = 0, s_-2 = -1/(ab)."""
    if n < -2:
        raise ValueError("schur_value needs n >= -2")
    if n == -1:
        return _zero(a.p)
    if n == -2:
        return -(a * b).inverse()
    if a == b:
        return (n + 1) * a ** n
    return (a ** (n + 1) - b ** (n + 1)) / (a - b)


def _slot(sat, slot):
    return (sat.a1, sat.b1) if slot == 1 else (sat.a2, sat.b2)


def whittaker_sph(slot: int, sat: SatakeData, val_a: int) -> QSqrtP:
    """W(diag(a, 1)) for the normalized spherical Whittaker function."""
    if val_a < 0:
        return _zero(sat.p)
    a, b = _slot(sat, slot)
    return QSqrtP.p_half_power(sat.p, -val_a) * schur_value(val_a, a, b)


def gauss_unit_integral(p: int, k: int, vy) -> Fraction:
    """Integral of psi(a y) over p^k Z_p^x with d^x a, conductor-one psi."""
    if vy == INF or vy is None:
        return Fraction(1)
    t = k + vy
    if t >= 0:
        return Fraction(1)
    if t == -1:
        return Fraction(-1, p - 1)
    return Fraction(0)


def _require_generic(sat):
    if not sat.is_generic():
        raise DegenerateSatakeError("Satake parameters are not generic")


def rankin_inverse_poly(sat: SatakeData):
    p = sat.p
    out = [QSqrtP(p, 1)]
    for c in sat.products():
        out = poly_mul(p, out, [QSqrtP(p, 1), -c])
    return out


def gen_l_inverse_poly(sat: SatakeData, slot: int, r: int):
    """Three-term numerator over (alpha - beta), as a polynomial in X."""
    a, b = _slot(sat, slot)
    c, d = _slot(sat, 2 if slot == 1 else 1)
    diff = a - b
    c0 = (a ** r - b ** r) / diff
    c1 = -(a * b) * (c + d) * (a ** (r - 1) - b ** (r - 1)) / diff
    c2 = (a * b) ** 2 * (c * d) * (a ** (r - 2) - b ** (r - 2)) / diff
    return poly_trim([c0, c1, c2])


def l_factor(kind, sat: SatakeData) -> RationalFunctionX:
    """kind: 'rankin', 'omega2s' or ('gen', slot, r)."""
    _require_generic(sat)
    p = sat.p
    one = [QSqrtP(p, 1)]
    if kind == "rankin":
        return RationalFunctionX(p, one, rankin_inverse_poly(sat))
    if kind == "omega2s":
        return RationalFunctionX(p, one, [QSqrtP(p, 1), _zero(p), -sat.omega])
    if isinstance(kind, tuple) and kind[0] == "gen":
        _, slot, r = kind
        if r < 1:
            raise ValueError("gen factor needs r >= 1")
        return RationalFunctionX(p, one, gen_l_inverse_poly(sat, slot, r))
    raise ValueError(f"unknown L-factor kind {kind!r}")


# --------------------------------------------------------------- Lambda

def _central(sat: SatakeData, x: CanonicalCoset) -> QSqrtP:
    return sat.omega ** x.r0 * sat.omega1 ** x.r1


def _vy(x: CanonicalCoset):
    return -x.n if x.n else INF


def lambda_series(x: CanonicalCoset, sat: SatakeData, N: int = 12, max_order: int = 16) -> FormalSeries:
    """Raw unfolded sum for Lambda(s; ch_x), coefficients of X^(2 r0 + k), k <= N."""
    if N > max_order:
        raise ValueError(f"order {N} exceeds configured maximum {max_order}")
    _require_generic(sat)
    p = sat.p
    pre = _central(sat, x) * volume_orbit(p, x)
    coeffs = []
    for k in range(N + 1):
        g = gauss_unit_integral(p, k, _vy(x))
        w = whittaker_sph(1, sat, k + x.m) * whittaker_sph(2, sat, k) * p ** k
        coeffs.append(pre * w * g)
    return FormalSeries(p, coeffs, N, 2 * x.r0)


def _error_range(x: CanonicalCoset):
    lo = max(0, -x.m)
    hi = x.n - 1 if x.n else lo - 1
    return lo, hi


def lambda_closed_form(x: CanonicalCoset, sat: SatakeData) -> RationalFunctionX:
    """Main term L(Pi,s) p^(-m/2) X^max(-m,0) / L_gen plus the finite error sum."""
    _require_generic(sat)
    p = sat.p
    ph = QSqrtP.p_half_power(p, -x.m)
    if x.m >= 0:
        gen = gen_l_inverse_poly(sat, 1, x.m + 1)
    else:
        gen = gen_l_inverse_poly(sat, 2, -x.m + 1)
    main = poly_shift(p, poly_scale(gen, ph), max(-x.m, 0))
    err = []
    lo, hi = _error_range(x)
    for k in range(lo, hi + 1):
        eps = gauss_unit_integral(p, k, _vy(x)) - 1
        c = ph * eps * schur_value(k + x.m, sat.a1, sat.b1) * schur_value(k, sat.a2, sat.b2)
        err = poly_add(p, err, poly_shift(p, [c], k))
    denom = rankin_inverse_poly(sat)
    numer = poly_add(p, main, poly_mul(p, err, denom))
    pre = _central(sat, x) * volume_orbit(p, x)
    return RationalFunctionX(p, poly_scale(numer, pre), denom, 2 * x.r0)


def lambda_value(f: PGCosetFunction, sat: SatakeData) -> QSqrtP:
    """lim_{s->0} Lambda(s; f) / L(Pi, s)."""
    _require_generic(sat)
    p = sat.p
    rank = RationalFunctionX(p, rankin_inverse_poly(sat), [QSqrtP(p, 1)])
    total = _zero(p)
    for x, c in f.items():
        total = total + c * (lambda_closed_form(x, sat) * rank).at_one()
    return total


def lambda_closed_form_function(f: PGCosetFunction, sat: SatakeData) -> RationalFunctionX:
    p = sat.p
    total = RationalFunctionX.const(p, 0)
    for x, c in f.items():
        total = total + lambda_closed_form(x, sat) * c
    return total


def theta_x_eval(h: HeckeElement, sat: SatakeData) -> RationalFunctionX:
    """Satake evaluation with S2 -> omega2 X^2 and T2 -> sqrt(p)(alpha2 + beta2) X."""
    p = h.p
    rt = QSqrtP.sqrt_p(p)
    u1, u2 = rt * (sat.a1 + sat.b1), rt * (sat.a2 + sat.b2)
    terms = {}
    for (e1, t1, e2, t2), c in h.terms.items():
        val = c * sat.omega1 ** e1 * u1 ** t1 * sat.omega2 ** e2 * u2 ** t2
        e = 2 * e2 + t2
        terms[e] = terms.get(e, _zero(p)) + val
    if not terms:
        return RationalFunctionX.const(p, 0)
    lo = min(terms)
    numer = [_zero(p)] * (max(terms) - lo + 1)
    for e, v in terms.items():
        numer[e - lo] = v
    return RationalFunctionX(p, numer, [QSqrtP(p, 1)], lo)


# ----------------------------------------------------------------- JPSS

def shell_averages(phi: SchwartzFunction):
    """{j: average of phi over p^j (Z_p^2 minus pZ_p^2)} for j < d, plus phi(0).

    The average is (additive measure of value sets inside the shell) divided
    by the measure of the shell; cells of the grid lie in a single shell.
    """
    p, R, d = phi.p, phi.R, phi.d
    sums = {}
    for (i, j), v in phi.cells.items():
        if i == 0 and j == 0:
            continue
        vi = _int_val(p, i, R + d)
        vj = _int_val(p, j, R + d)
        shell = min(vi, vj) - R
        sums[shell] = sums.get(shell, Fraction(0)) + v
    cell = 1 / Fraction(p) ** (2 * d)
    out = {}
    for shell, s in sums.items():
        meas = Fraction(1, 1) / Fraction(p) ** (2 * shell) * (1 - Fraction(1, p * p))
        out[shell] = s * cell / meas
    return out, phi.cells.get((0, 0), Fraction(0))


def _int_val(p, i, cap):
    if i == 0:
        return cap
    v = 0
    while i % p == 0:
        i //= p
        v += 1
    return v


def jpss_zeta(phi: SchwartzFunction, sat: SatakeData) -> RationalFunctionX:
    """Z(phi, W1, W2, s) for spherical W1, W2 as a rational function in X."""
    _require_generic(sat)
    p = sat.p
    avgs, at0 = shell_averages(phi)
    d = phi.d
    w = sat.omega
    # sum_j mu_j (w X^2)^j over shells j < d, then the tail phi(0) (wX^2)^d / (1 - wX^2)
    terms = {2 * j: w ** j * mu for j, mu in avgs.items()}
    lo = min(list(terms) + [2 * d])
    body = [_zero(p)] * (max(list(terms) + [2 * d]) - lo + 3)
    for e, c in terms.items():
        body[e - lo] = body[e - lo] + c
    one_minus = [QSqrtP(p, 1), _zero(p), -w]
    numer = poly_mul(p, poly_trim(body), one_minus)
    tail = poly_shift(p, [w ** d * at0], 2 * d - lo)
    numer = poly_add(p, numer, tail)
    return RationalFunctionX(p, numer, rankin_inverse_poly(sat), lo)


def jpss_period(phi: SchwartzFunction, sat: SatakeData) -> QSqrtP:
    p = sat.p
    z = jpss_zeta(phi, sat)
    rank = RationalFunctionX(p, rankin_inverse_poly(sat), [QSqrtP(p, 1)])
    return (z * rank).at_one()


def cauchy_closed_form(sat: SatakeData) -> RationalFunctionX:
    p = sat.p
    return RationalFunctionX(p, [QSqrtP(p, 1), _zero(p), -sat.omega], rankin_inverse_poly(sat))


# ------------------------------------------------------------- sampling

def random_satake(p: int, rng: random.Random, bound: int = 5) -> SatakeData:
    """Small nonzero rationals, rejecting non-generic tuples."""
    while True:
        vals = []
        for _ in range(4):
            num = rng.randint(1, bound) * rng.choice((1, -1))
            den = rng.randint(1, bound)
            vals.append(Fraction(num, den))
        sat = SatakeData.from_values(p, *vals)
        if sat.is_generic():
            return sat
