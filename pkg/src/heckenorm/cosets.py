"""Double cosets P \\ G / G° for G = GL2 x GL2 and functions on them.

P is the mirabolic subgroup {[[a, b], [0, 1]]} embedded diagonally and
G° = GL2(Z_p) x GL2(Z_p).  Every double coset has a unique representative

    p^r0 * (p^r1 [[p^m, p^-n], [0, 1]], 1)        (p^-n replaced by 0 if n = 0)

with n = 0 or (n >= 1 and m > -n).  The functions Xi and Xi_c attached to
test data phi (x) ch(g G°) are computed as integrals over GL2(Z_p) by
enumerating GL2(Z/p^M).
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .field import QSqrtP
from .hecke import HeckeElement
from .padic import (
    GElement,
    Mat2,
    hermite_form,
    iwasawa_decompose,
    snf_divisors,
    solve_double_coset,
    spread,
    valuation,
)
from .residues import DEFAULT_CEILING, gl2_order, gl2_residues, integral_after
from .schwartz import LatticeElement, LevelSubgroup, SchwartzFunction, act, lookup_scaled


class WindowError(RuntimeError):
    """A boundary value of Xi_c did not vanish even at the largest margin."""


@dataclass(frozen=True, order=True)
class CanonicalCoset:
    r0: int
    r1: int
    m: int
    n: int

    def __post_init__(self):
        if self.n < 0:
            raise ValueError("n must be non-negative")
        if self.n >= 1 and self.m <= -self.n:
            raise ValueError(f"invalid coset: need m > -n, got m={self.m}, n={self.n}")

    def gamma(self, p: int) -> Mat2:
        """Slot-1 representative without the global central factor."""
        y = Fraction(1, p ** self.n) if self.n else Fraction(0)
        return Mat2(Fraction(p) ** self.m, y, 0, 1).scale(Fraction(p) ** self.r1)

    def rep(self, p: int) -> GElement:
        z = Fraction(p) ** self.r0
        return GElement(self.gamma(p).scale(z), Mat2.scalar(z))

    def as_tuple(self):
        return (self.r0, self.r1, self.m, self.n)

    def __str__(self):
        return f"({self.r0},{self.r1},{self.m},{self.n})"


def canonicalize(p: int, g: GElement) -> CanonicalCoset:
    g1, g2 = g.slot1, g.slot2
    t1, t2, y, _ = iwasawa_decompose(p, g2)
    pt2 = Fraction(p) ** t2
    x0 = Mat2(Fraction(p) ** (t1 - t2), y / pt2, 0, 1)
    r0 = t2
    gamma = x0.inv() @ g1.scale(1 / pt2)
    a, c, b = hermite_form(p, gamma)
    r1, m = c, a - c
    if b == 0 or valuation(p, b) >= min(a, c):
        return CanonicalCoset(r0, r1, m, 0)
    j = int(valuation(p, b))
    return CanonicalCoset(r0, r1, m, c - j)


# ---------------------------------------------------------------- volumes

def volume_orbit(p: int, x: CanonicalCoset) -> Fraction:
    """Number of right GL2(Z_p)-cosets in P° gamma0 GL2(Z_p)."""
    if x.n >= 1:
        return Fraction((p - 1) * p ** (x.m + x.n - 1))
    return Fraction(p ** max(x.m, 0))


def volume_P_cap(p: int, x: CanonicalCoset, variant: str = "P") -> Fraction:
    """Volume of P cap x G° x^{-1} in P (d^x a db, vol(P°) = 1).

    For n >= 1 the intersection is {a in 1 + p^n Z_p, b = -(a-1) p^-n mod p^m}
    whose volume is the reciprocal of the orbit count; it already sits
    inside det = 1 mod p, so both variants agree.
    """
    if variant not in ("P", "P1"):
        raise ValueError("variant must be 'P' or 'P1'")
    if x.n >= 1:
        return 1 / volume_orbit(p, x)
    base = Fraction(1, p ** max(x.m, 0))
    return base if variant == "P" else base / (p - 1)


def _mirabolic_residues(p: int, M: int) -> np.ndarray:
    q = p ** M
    a = np.array([u for u in range(q) if u % p], dtype=np.int64)
    b = np.arange(q, dtype=np.int64)
    A, B = np.meshgrid(a, b, indexing="ij")
    A, B = A.ravel(), B.ravel()
    return np.stack([A, B, np.zeros_like(A), np.ones_like(A)], axis=1)


def volume_P_cap_enumerated(p: int, x: CanonicalCoset, variant: str = "P") -> Fraction:
    """Same volume by counting P° mod p^M elements h with gamma0^-1 h gamma0 integral."""
    gam = x.gamma(p)
    M = max(1, spread(p, gam))
    hs = _mirabolic_residues(p, M)
    mask = integral_after(p, gam.inv(), hs, gam)
    if variant == "P1":
        mask &= (hs[:, 0] % p) == 1
    return Fraction(int(mask.sum()), len(hs))


def volume_orbit_enumerated(p: int, x: CanonicalCoset) -> int:
    """Count distinct Hermite forms of h gamma0 over h in P° mod p^M."""
    gam = x.gamma(p)
    # the coset of h gamma0 only sees a mod p^(m+n) and b mod p^m
    M = max(1, x.m + x.n)
    forms = set()
    for a, b, _, _ in _mirabolic_residues(p, M):
        forms.add(hermite_form(p, Mat2(int(a), int(b), 0, 1) @ gam))
    return len(forms)


# ------------------------------------------------------ coset functions

class PGCosetFunction:
    """Finitely supported function on canonical cosets with Q(sqrt p) values."""

    __slots__ = ("p", "support")

    def __init__(self, p: int, support=None):
        self.p = p
        clean = {}
        for x, v in (support or {}).items():
            v = v if isinstance(v, QSqrtP) else QSqrtP(p, v)
            if not v.is_zero():
                clean[x] = v
        self.support = clean

    @classmethod
    def indicator(cls, p, x: CanonicalCoset, value=1):
        return cls(p, {x: value})

    @classmethod
    def f0(cls, p):
        return cls.indicator(p, CanonicalCoset(0, 0, 0, 0))

    def __call__(self, x: CanonicalCoset):
        return self.support.get(x, QSqrtP(self.p))

    def __add__(self, other):
        out = dict(self.support)
        for x, v in other.support.items():
            out[x] = out[x] + v if x in out else v
        return PGCosetFunction(self.p, out)

    def __neg__(self):
        return PGCosetFunction(self.p, {x: -v for x, v in self.support.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, c):
        return PGCosetFunction(self.p, {x: v * c for x, v in self.support.items()})

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, PGCosetFunction):
            return NotImplemented
        return self.p == other.p and self.support == other.support

    def __hash__(self):
        return hash(frozenset(self.support.items()))

    def __len__(self):
        return len(self.support)

    def items(self):
        return sorted(self.support.items())

    def __repr__(self):
        body = ", ".join(f"{x}: {v!r}" for x, v in self.items())
        return f"PGCosetFunction({{{body}}})"

    def to_json_obj(self):
        return [{"r0": x.r0, "r1": x.r1, "m": x.m, "n": x.n, **v.to_json()} for x, v in self.items()]

    def to_json(self):
        return json.dumps(self.to_json_obj(), sort_keys=True, separators=(",", ":"))

    @classmethod
    def from_json_obj(cls, p, rows):
        return cls(p, {
            CanonicalCoset(r["r0"], r["r1"], r["m"], r["n"]): QSqrtP.from_json(p, r) for r in rows
        })


# ----------------------------------------------------------- Hecke action

@lru_cache(maxsize=None)
def _t_reps(p: int):
    reps = [Mat2(p, beta, 0, 1) for beta in range(p)]
    reps.append(Mat2(1, 0, 0, p))
    return tuple(reps)


def _slot_pair(slot: int, m: Mat2) -> GElement:
    return GElement(m, Mat2.identity()) if slot == 1 else GElement(Mat2.identity(), m)


@lru_cache(maxsize=200_000)
def _canon_times(p: int, x: CanonicalCoset, slot: int, m: Mat2) -> CanonicalCoset:
    return canonicalize(p, x.rep(p) @ _slot_pair(slot, m))


def _apply_S(f: PGCosetFunction, slot: int, power: int) -> PGCosetFunction:
    # (S f)(x) = f(x * central p in slot), so ch_y moves to y * p^-1
    p = f.p
    z = Mat2.scalar(Fraction(p) ** (-power))
    return PGCosetFunction(p, {_canon_times(p, x, slot, z): v for x, v in f.support.items()})


def _apply_T(f: PGCosetFunction, slot: int) -> PGCosetFunction:
    p = f.p
    reps = _t_reps(p)
    candidates = set()
    for y in f.support:
        for r in reps:
            candidates.add(_canon_times(p, y, slot, r.scale(Fraction(1, p))))
    out = {}
    for x in candidates:
        total = QSqrtP(p)
        for r in reps:
            total = total + f(_canon_times(p, x, slot, r))
        out[x] = total
    return PGCosetFunction(p, out)


def hecke_act(theta: HeckeElement, f: PGCosetFunction) -> PGCosetFunction:
    """Right-convolution action (theta.f)(x) = sum over K-cosets gamma of f(x gamma)."""
    p = f.p
    total = PGCosetFunction(p)
    for (e1, t1, e2, t2), c in sorted(theta.terms.items()):
        g = f
        for _ in range(t1):
            g = _apply_T(g, 1)
        for _ in range(t2):
            g = _apply_T(g, 2)
        if e1:
            g = _apply_S(g, 1, e1)
        if e2:
            g = _apply_S(g, 2, e2)
        total = total + g * c
    return total


# --------------------------------------------------------------- Xi maps

def support_shapes(a: int, c: int):
    """(r1, m, n) with gamma0 in GL2(Z_p) diag(p^a, p^c) GL2(Z_p)."""
    out = [(a, c - a, 0)]
    if c > a:
        out.append((c, a - c, 0))
    for n in range(1, c - a):
        out.append((a + n, c - a - 2 * n, n))
    return out


class _Generator:
    """Precomputed data for one generator phi (x) ch(g G°).

    Xi at a coset x = p^r0 (gamma0, 1) is the integral over k in GL2(Z_p) of
    [gamma0 k B in GL2(Z_p)] * phi1(p^(r0+r1) (0,1) k), where B = g1^-1 g2 and
    phi1 = phi(. g1^-1).
    """

    def __init__(self, phi: SchwartzFunction, g: GElement, ceiling: int):
        self.p = p = phi.p
        self.phi1 = act(phi, g.slot1.inv())
        self.B = g.slot1.inv() @ g.slot2
        self.ceiling = ceiling
        a, c = snf_divisors(p, self.B.inv())
        self.shapes = support_shapes(a, c)
        # phi1(p^s w) for s >= -R needs w mod p^(d - s) only
        self.M = max(1, self.phi1.R + self.phi1.d, spread(p, self.B))
        self._counts = {}

    def counts(self, r1, m, n):
        """Row-count vector over bottom rows w mod p^M of {k : gamma0 k B integral}."""
        key = (r1, m, n)
        if key not in self._counts:
            p, M = self.p, self.M
            gam = CanonicalCoset(0, r1, m, n).gamma(p)
            ks = gl2_residues(p, M, self.ceiling)
            if solve_double_coset(p, gam, self.B) is None:
                self._counts[key] = None
            else:
                mask = integral_after(p, gam, ks, self.B)
                q = p ** M
                idx = ks[mask, 2] * q + ks[mask, 3]
                self._counts[key] = np.bincount(idx, minlength=q * q)
        return self._counts[key]

    def rows(self):
        q = self.p ** self.M
        r = np.arange(q, dtype=np.int64)
        W1, W2 = np.meshgrid(r, r, indexing="ij")
        return np.stack([W1.ravel(), W2.ravel()], axis=1)

    def integral(self, r1, m, n, s) -> Fraction:
        """Integral of [gamma0 k B in K] phi1(p^s w(k)) dk."""
        cnt = self.counts(r1, m, n)
        if cnt is None:
            return Fraction(0)
        phi1, p = self.phi1, self.p
        if s >= phi1.d:
            # p^s w lies in p^d Z_p^2 where phi1 equals phi1(0)
            val0 = phi1.cells.get((0, 0), Fraction(0))
            return Fraction(int(cnt.sum()), gl2_order(p, self.M)) * val0
        if s < -phi1.R:
            return Fraction(0)
        nz = np.nonzero(cnt)[0]
        rows = self.rows()[nz]
        vals = lookup_scaled(phi1, rows, s)
        total = sum((int(c) * v for c, v in zip(cnt[nz], vals) if v), Fraction(0))
        return total / gl2_order(p, self.M)


def xi(phi: SchwartzFunction, g: GElement, ceiling: int = DEFAULT_CEILING):
    """Pointwise evaluator of Xi for phi (x) ch(g G°)."""
    gen = _Generator(phi, g, ceiling)
    p = phi.p

    def evaluate(x) -> QSqrtP:
        if isinstance(x, GElement):
            x = canonicalize(p, x)
        shape = (x.r1, x.m, x.n)
        if shape not in gen.shapes:
            return QSqrtP(p)
        return QSqrtP(p, gen.integral(*shape, x.r0 + x.r1))

    return evaluate


def _as_elements(delta):
    out = []
    for e in delta:
        if isinstance(e, LatticeElement):
            out.append((e.coeff, e.phi, e.g))
        else:
            c, phi, g = e
            out.append((Fraction(c), phi, g))
    return out


def xi_c(delta, ceiling: int = DEFAULT_CEILING, margin: int = 2, max_margin: int = 6) -> PGCosetFunction:
    """Xi(x) - Xi(x (p,p)^-1) over the full support, as a finite function."""
    elems = _as_elements(delta)
    if not elems:
        raise ValueError("xi_c needs at least one generator to fix p")
    p = elems[0][1].p
    total = PGCosetFunction(p)
    for coeff, phi, g in elems:
        gen = _Generator(phi, g, ceiling)
        lo, hi = -gen.phi1.R, gen.phi1.d
        cur_margin = margin
        while True:
            vals = {}
            for (r1, m, n) in gen.shapes:
                for s in range(lo - cur_margin, hi + cur_margin + 1):
                    v = gen.integral(r1, m, n, s) - gen.integral(r1, m, n, s - 1)
                    if v:
                        vals[CanonicalCoset(s - r1, r1, m, n)] = v
            edge = [x for x in vals if not (lo <= x.r0 + x.r1 <= hi)]
            if not edge:
                break
            if cur_margin >= max_margin:
                raise WindowError(f"nonzero Xi_c on boundary shell at {edge[0]}")
            cur_margin += 2
        total = total + PGCosetFunction(p, vals) * coeff
    return total


def xi_total(delta, ceiling: int = DEFAULT_CEILING) -> PGCosetFunction:
    """Xi itself as a finite function; only defined when every phi vanishes at 0."""
    f = xi_c(delta, ceiling)
    return cumulative_r0(f)


def cumulative_r0(f: PGCosetFunction) -> PGCosetFunction:
    """Invert 1 - S_p^{-1}: F(r0) = sum of f over r0' <= r0.

    Raises ValueError when the result is not finitely supported.
    """
    p = f.p
    lines = {}
    for x, v in f.support.items():
        lines.setdefault((x.r1, x.m, x.n), {})[x.r0] = v
    out = {}
    for (r1, m, n), line in lines.items():
        acc = QSqrtP(p)
        for r0 in range(min(line), max(line) + 1):
            acc = acc + line.get(r0, QSqrtP(p))
            out[CanonicalCoset(r0, r1, m, n)] = acc
        if not acc.is_zero():
            raise ValueError("function is not (1 - S_p^-1) of a compactly supported one")
    return PGCosetFunction(p, out)


def trace_level(delta):
    """Tr(phi (x) ch(g G°[p])) = phi (x) ch(g G°)."""
    out = []
    for e in delta:
        if isinstance(e, LatticeElement):
            out.append(LatticeElement(e.coeff, e.phi, e.g, LevelSubgroup.Full))
        else:
            out.append(e)
    return out


def phi_iso(f: PGCosetFunction):
    return [(v * (1 / volume_P_cap(f.p, x, "P")), x) for x, v in f.items()]


def psi_iso(p: int, coeffs) -> PGCosetFunction:
    return PGCosetFunction(p, {x: c * volume_P_cap(p, x, "P") for c, x in coeffs})
