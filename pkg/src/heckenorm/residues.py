"""Vectorized enumeration of GL2(Z/p^M) and rational matrices mod p^N."""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache

import numpy as np

from .padic import Mat2, ord_p, to_residue

DEFAULT_CEILING = 2_000_000


class ResourceLimitError(RuntimeError):
    """An enumeration would exceed the configured size ceiling."""


def gl2_order(p: int, M: int) -> int:
    return p ** (4 * M) * (p - 1) * (p * p - 1) // p ** 3


@lru_cache(maxsize=16)
def _gl2_cached(p: int, M: int) -> np.ndarray:
    q = p ** M
    r = np.arange(q, dtype=np.int64)
    a, b, c, d = (x.ravel() for x in np.meshgrid(r, r, r, r, indexing="ij"))
    keep = ((a * d - b * c) % p) != 0
    out = np.stack([a[keep], b[keep], c[keep], d[keep]], axis=1)
    out.setflags(write=False)
    return out


def gl2_residues(p: int, M: int, ceiling: int = DEFAULT_CEILING) -> np.ndarray:
    """All (a, b, c, d) mod p^M with unit determinant, shape (N, 4)."""
    if p ** (4 * M) > ceiling:
        raise ResourceLimitError(
            f"enumerating GL2(Z/{p}^{M}) needs {p ** (4 * M)} candidates "
            f"(ceiling {ceiling}); reduce depth or raise --ceiling"
        )
    return _gl2_cached(p, M)


def scaled_residue_matrix(p: int, g: Mat2, prec: int):
    """Return (e, R) with p^e g p-integral and R = p^e g mod p^prec as ints."""
    e = int(max(0, -g.minval(p)))
    scale = Fraction(p) ** e
    R = np.array(
        [[to_residue(p, x * scale, prec) for x in row] for row in g.rows()],
        dtype=np.int64,
    )
    return e, R


def integral_after(p: int, left: Mat2, ks: np.ndarray, right: Mat2) -> np.ndarray:
    """Mask of rows k (integer lifts) with left @ k @ right p-integral.

    Products are taken modulo p^(e1+e2), the scaling needed to clear the
    denominators of left and right.
    """
    e1 = int(max(0, -left.minval(p)))
    e2 = int(max(0, -right.minval(p)))
    prec = e1 + e2
    if prec == 0:
        return np.ones(len(ks), dtype=bool)
    mod = p ** prec
    _, L = scaled_residue_matrix(p, left, prec)
    _, R = scaled_residue_matrix(p, right, prec)
    k = ks % mod
    ka, kb, kc, kd = k[:, 0], k[:, 1], k[:, 2], k[:, 3]
    # left @ k
    m00 = (L[0, 0] * ka + L[0, 1] * kc) % mod
    m01 = (L[0, 0] * kb + L[0, 1] * kd) % mod
    m10 = (L[1, 0] * ka + L[1, 1] * kc) % mod
    m11 = (L[1, 0] * kb + L[1, 1] * kd) % mod
    ok = np.ones(len(ks), dtype=bool)
    for row in ((m00, m01), (m10, m11)):
        for j in range(2):
            ok &= ((row[0] * R[0, j] + row[1] * R[1, j]) % mod) == 0
    return ok


def unit_det_valuation(p: int, g: Mat2) -> bool:
    return ord_p(p, g.det()) == 0
