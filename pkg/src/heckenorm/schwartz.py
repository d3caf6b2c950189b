"""Schwartz functions on Q_p^2 and lattices of integral test data.

A Schwartz function is a finite rational combination of product boxes
(a + p^k Z_p) x (b + p^l Z_p).  Internally everything is refined to a grid:
cells (i/p^R, j/p^R) + p^d Z_p^2 with 0 <= i, j < p^(R+d).  Two functions
are equal iff their grids agree after refining to a common (R, d).
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction

import numpy as np

from .padic import GElement, Mat2, spread, to_residue, valuation
from .residues import DEFAULT_CEILING, gl2_order, gl2_residues, integral_after


class LevelSubgroup(Enum):
    Full = "Full"
    DetP = "DetP"


@dataclass(frozen=True)
class Box:
    a: Fraction
    k: int
    b: Fraction
    l: int  # noqa: E741

    def __post_init__(self):
        object.__setattr__(self, "a", Fraction(self.a))
        object.__setattr__(self, "b", Fraction(self.b))


def _lowest_exp(p, x: Fraction, k: int) -> int:
    """Smallest R >= 0 with x + p^k Z_p inside p^-R Z_p."""
    low = k
    if x != 0 and valuation(p, x) < k:
        low = int(valuation(p, x))
    return max(0, -low)


class SchwartzFunction:
    __slots__ = ("p", "R", "d", "cells")

    def __init__(self, p: int, R: int, d: int, cells: dict):
        if R + d < 0:
            raise ValueError("grid needs R + d >= 0")
        self.p = p
        self.R = int(R)
        self.d = int(d)
        self.cells = {k: Fraction(v) for k, v in cells.items() if v != 0}

    @classmethod
    def zero(cls, p):
        return cls(p, 0, 0, {})

    @classmethod
    def from_boxes(cls, p: int, parts):
        """parts: iterable of (coefficient, Box)."""
        parts = [(Fraction(c), bx) for c, bx in parts]
        if not parts:
            return cls.zero(p)
        R = max(max(_lowest_exp(p, bx.a, bx.k), _lowest_exp(p, bx.b, bx.l)) for _, bx in parts)
        d = max(max(bx.k, bx.l) for _, bx in parts)
        d = max(d, -R)
        mod = p ** (R + d)
        cells = {}
        for c, bx in parts:
            i0 = to_residue(p, bx.a * p ** R, R + d) if R + d > 0 else 0
            j0 = to_residue(p, bx.b * p ** R, R + d) if R + d > 0 else 0
            si, sj = p ** (R + bx.k), p ** (R + bx.l)
            for i in range(i0 % si, mod, si):
                for j in range(j0 % sj, mod, sj):
                    cells[(i, j)] = cells.get((i, j), 0) + c
        return cls(p, R, d, cells)

    @classmethod
    def indicator_lattice(cls, p: int, n: int):
        """Indicator of p^n Z_p^2."""
        return cls.from_boxes(p, [(1, Box(0, n, 0, n))])

    # grid manipulation

    def refine(self, R: int, d: int) -> "SchwartzFunction":
        if R < self.R or d < self.d:
            raise ValueError("refine only to finer grids")
        p = self.p
        shift = p ** (R - self.R)
        old_mod = p ** (self.R + self.d)
        step = old_mod * shift
        mod = p ** (R + d)
        cells = {}
        for (i, j), v in self.cells.items():
            for ii in range(i * shift, mod, step):
                for jj in range(j * shift, mod, step):
                    cells[(ii, jj)] = v
        return SchwartzFunction(p, R, d, cells)

    def _common(self, other):
        R, d = max(self.R, other.R), max(self.d, other.d)
        return self.refine(R, d), other.refine(R, d)

    def __add__(self, other):
        a, b = self._common(other)
        cells = dict(a.cells)
        for k, v in b.cells.items():
            cells[k] = cells.get(k, 0) + v
        return SchwartzFunction(self.p, a.R, a.d, cells)

    def __mul__(self, c):
        c = Fraction(c)
        return SchwartzFunction(self.p, self.R, self.d, {k: v * c for k, v in self.cells.items()})

    __rmul__ = __mul__

    def __neg__(self):
        return self * -1

    def __sub__(self, other):
        return self + (-other)

    def __eq__(self, other):
        if not isinstance(other, SchwartzFunction):
            return NotImplemented
        a, b = self._common(other)
        return a.cells == b.cells

    def __hash__(self):
        return hash((self.p, frozenset(self.coarsened().cells.items())))

    def coarsened(self):
        """Equivalent grid with the smallest d (canonical for hashing)."""
        cur = self
        while cur.d > -cur.R:
            cand = cur._try_coarsen()
            if cand is None:
                break
            cur = cand
        return cur

    def _try_coarsen(self):
        p, R, d = self.p, self.R, self.d
        nd = d - 1
        mod = p ** (R + nd)
        merged = {}
        for (i, j), v in self.cells.items():
            merged.setdefault((i % mod, j % mod), set()).add(v)
        # each coarse cell must have p^2 equal children
        cells = {}
        for key, vals in merged.items():
            if len(vals) != 1:
                return None
            cells[key] = next(iter(vals))
        for (i, j) in cells:
            for s in range(p):
                for t in range(p):
                    if (i + s * mod, j + t * mod) not in self.cells:
                        return None
        return SchwartzFunction(p, R, nd, cells)

    def values(self):
        return set(self.cells.values())

    def support_radius(self):
        return self.R

    def resolution(self):
        return self.d

    def dense(self) -> np.ndarray:
        """Grid values as an object array indexed [i, j]."""
        n = self.p ** (self.R + self.d)
        arr = np.zeros((n, n), dtype=object)
        arr[:] = Fraction(0)
        for (i, j), v in self.cells.items():
            arr[i, j] = v
        return arr

    def __repr__(self):
        return f"SchwartzFunction(p={self.p}, R={self.R}, d={self.d}, cells={len(self.cells)})"

    # serialization: sorted list of boxes at the grid resolution

    def to_json_obj(self):
        rows = []
        scale = 1 / Fraction(self.p) ** self.R
        for (i, j) in sorted(self.cells):
            v = self.cells[(i, j)]
            rows.append({
                "coeff": f"{v.numerator}/{v.denominator}",
                "a": _fs(i * scale), "k": self.d,
                "b": _fs(j * scale), "l": self.d,
            })
        return rows

    def to_json(self):
        return json.dumps(self.to_json_obj(), sort_keys=True, separators=(",", ":"))

    @classmethod
    def from_json_obj(cls, p, rows):
        parts = [
            (Fraction(r["coeff"]), Box(Fraction(r["a"]), int(r["k"]), Fraction(r["b"]), int(r["l"])))
            for r in rows
        ]
        return cls.from_boxes(p, parts)


def _fs(q):
    q = Fraction(q)
    return f"{q.numerator}/{q.denominator}"


def evaluate(phi: SchwartzFunction, v) -> Fraction:
    p, R, d = phi.p, phi.R, phi.d
    x, y = (Fraction(t) * Fraction(p) ** R for t in v)
    if x.denominator % p == 0 or y.denominator % p == 0:
        return Fraction(0)
    prec = R + d
    if prec == 0:
        return phi.cells.get((0, 0), Fraction(0))
    return phi.cells.get((to_residue(p, x, prec), to_residue(p, y, prec)), Fraction(0))


def lookup_scaled(phi: SchwartzFunction, w: np.ndarray, s: int) -> np.ndarray:
    """Values phi(p^s * w) for integer row vectors w, as an object array.

    Valid when phi is constant on cosets of p^(s + M) Z_p^2, where the rows
    of w are lifts of residues mod p^M.
    """
    p, R, d = phi.p, phi.R, phi.d
    prec = R + d
    out = np.empty(len(w), dtype=object)
    out[:] = Fraction(0)
    if not phi.cells:
        return out
    if R + s < 0:
        # p^s w lies outside p^-R Z_p^2 unless w is divisible enough
        need = -(R + s)
        ok = np.all(w % p ** need == 0, axis=1)
        ww = w // p ** need
        scale = 1
    else:
        ok = np.ones(len(w), dtype=bool)
        ww = w
        scale = p ** (R + s)
    mod = p ** prec
    ii = (ww[:, 0] * scale) % mod
    jj = (ww[:, 1] * scale) % mod
    for idx in np.nonzero(ok)[0]:
        out[idx] = phi.cells.get((int(ii[idx]), int(jj[idx])), Fraction(0))
    return out


def act(phi: SchwartzFunction, h: Mat2) -> SchwartzFunction:
    """Right translation: (h.phi)(v) = phi(v h)."""
    p = phi.p
    if not phi.cells:
        return SchwartzFunction.zero(p)
    R2 = int(phi.R - h.inv().minval(p))
    d2 = int(phi.d - h.minval(p))
    if R2 + d2 < 0:
        d2 = -R2
    n = p ** (R2 + d2)
    cells = {}
    scale = 1 / Fraction(p) ** R2
    for i in range(n):
        for j in range(n):
            x, y = i * scale, j * scale
            v = evaluate(phi, (x * h.a + y * h.c, x * h.b + y * h.d))
            if v:
                cells[(i, j)] = v
    return SchwartzFunction(p, R2, d2, cells)


def stabilizer_contains(phi: SchwartzFunction, h: Mat2) -> bool:
    return act(phi, h) == phi


@dataclass(frozen=True)
class LatticeElement:
    coeff: Fraction
    phi: SchwartzFunction
    g: GElement
    level: LevelSubgroup = LevelSubgroup.Full

    def __post_init__(self):
        object.__setattr__(self, "coeff", Fraction(self.coeff))

    def to_json_obj(self):
        return {
            "coeff": _fs(self.coeff),
            "phi": self.phi.to_json_obj(),
            "g": self.g.to_json(),
            "level": self.level.value,
        }


def volume_stab_intersection(phi: SchwartzFunction, g: GElement, level: LevelSubgroup,
                             ceiling: int = DEFAULT_CEILING) -> Fraction:
    """Haar volume (GL2(Z_p) normalized to 1) of Stab(phi) cap g U g^{-1}.

    U is GL2(Z_p) x GL2(Z_p) or its subgroup with det of the second factor
    = 1 mod p.  H embeds diagonally, so conjugating by g1 turns this into
    the volume of k in GL2(Z_p) with C k C^{-1} in GL2(Z_p), C = g2^{-1} g1,
    [det k = 1 mod p], and k stabilizing phi(. g1^{-1}).
    """
    p = phi.p
    g1, g2 = g.slot1, g.slot2
    phi1 = act(phi, g1.inv())
    C = g2.inv() @ g1
    R1, d1 = phi1.R, phi1.d
    M = max(1, R1 + d1, spread(p, C))
    ks = gl2_residues(p, M, ceiling)
    mask = integral_after(p, C, ks, C.inv())
    if level is LevelSubgroup.DetP:
        mask &= ((ks[:, 0] * ks[:, 3] - ks[:, 1] * ks[:, 2]) % p) == 1
    cand = ks[mask]
    prec = R1 + d1
    if phi1.cells and prec > 0:
        mod = p ** prec
        keys = list(phi1.cells)
        vals = np.array([phi1.cells[k] for k in keys], dtype=object)
        # dense value table with integer labels per distinct value
        labels = {v: t + 1 for t, v in enumerate(sorted(set(vals)))}
        table = np.zeros((mod, mod), dtype=np.int64)
        for (i, j), v in phi1.cells.items():
            table[i, j] = labels[v]
        W = np.array(keys, dtype=np.int64)
        want = table[W[:, 0], W[:, 1]]
        good = np.ones(len(cand), dtype=bool)
        chunk = max(1, 4_000_000 // max(1, len(W)))
        for start in range(0, len(cand), chunk):
            kk = cand[start:start + chunk] % mod
            ii = (W[:, 0][None, :] * kk[:, 0][:, None] + W[:, 1][None, :] * kk[:, 2][:, None]) % mod
            jj = (W[:, 0][None, :] * kk[:, 1][:, None] + W[:, 1][None, :] * kk[:, 3][:, None]) % mod
            good[start:start + chunk] = np.all(table[ii, jj] == want[None, :], axis=1)
        count = int(good.sum())
    else:
        count = len(cand)
    return Fraction(count, gl2_order(p, M))


def _in_z_inv_p(p, q: Fraction) -> bool:
    den = q.denominator
    while den % p == 0:
        den //= p
    return den == 1


def membership_report(elements, variant: str = "S", ceiling: int = DEFAULT_CEILING):
    """Check each generator; returns (ok, list of per-element reasons)."""
    if variant not in ("S", "S0"):
        raise ValueError("variant must be 'S' or 'S0'")
    elements = list(elements)
    levels = {e.level for e in elements}
    if len(levels) > 1:
        raise ValueError("mixed levels in one datum")
    reasons = []
    ok = True
    for e in elements:
        p = e.phi.p
        if variant == "S0" and evaluate(e.phi, (0, 0)) != 0:
            ok = False
            reasons.append("phi(0) != 0 in variant S0")
            continue
        vol = volume_stab_intersection(e.phi, e.g, e.level, ceiling)
        bad = [v for v in e.phi.values() if not _in_z_inv_p(p, e.coeff * v * vol)]
        if bad:
            ok = False
            reasons.append(f"value {bad[0]} * {e.coeff} not in vol^-1 Z[1/p] (vol {vol})")
        else:
            reasons.append("ok")
    return ok, reasons


def lattice_membership(elements, variant: str = "S", ceiling: int = DEFAULT_CEILING) -> bool:
    return membership_report(elements, variant, ceiling)[0]
