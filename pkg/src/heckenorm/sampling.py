"""Seeded random test data that passes the integral-lattice check."""

from __future__ import annotations

import random
from fractions import Fraction

from .padic import GElement, Mat2, spread
from .schwartz import (
    Box,
    LatticeElement,
    LevelSubgroup,
    SchwartzFunction,
    act,
    evaluate,
    lattice_membership,
    volume_stab_intersection,
)

# largest enumeration depth per prime that keeps GL2(Z/p^M) tractable
MAX_DEPTH = {2: 5, 3: 3, 5: 2, 7: 1}


def _g_choices(p):
    u = Mat2(1, Fraction(1, p), 0, 1)
    return [
        GElement.identity(),
        GElement(Mat2.identity(), u),
        GElement(Mat2.identity(), Mat2.diag(p, 1)),
        GElement(Mat2.identity(), Mat2.diag(1, p)),
        GElement(Mat2.scalar(p), Mat2.scalar(p)),
        GElement(Mat2.identity(), Mat2(1, 0, p, 1)),
    ]


def random_phi(p: int, rng: random.Random, depth: int, vanish_at_zero: bool) -> SchwartzFunction:
    while True:
        parts = []
        for _ in range(rng.randint(1, 2)):
            k = rng.randint(0, depth)
            l = rng.randint(0, depth)  # noqa: E741
            a = Fraction(rng.randint(0, p ** k - 1)) if k else Fraction(0)
            b = Fraction(rng.randint(0, p ** l - 1)) if l else Fraction(0)
            parts.append((rng.randint(1, 3), Box(a, k, b, l)))
        phi = SchwartzFunction.from_boxes(p, parts)
        if not phi.cells:
            continue
        if vanish_at_zero and evaluate(phi, (0, 0)) != 0:
            continue
        return phi


def _depth_needed(p, phi, g):
    phi1 = act(phi, g.slot1.inv())
    B = g.slot1.inv() @ g.slot2
    C = g.slot2.inv() @ g.slot1
    return max(1, phi1.R + phi1.d, spread(p, B), spread(p, C))


def random_certified_delta(p: int, rng: random.Random, level: LevelSubgroup,
                           variant: str = "S", generators: int | None = None):
    """One or two generators scaled by vol^-1 times a small Z[1/p] unit multiple."""
    cap = MAX_DEPTH.get(p, 1)
    depth = 2 if cap >= 3 else 1
    count = generators or rng.randint(1, 2)
    out = []
    while len(out) < count:
        phi = random_phi(p, rng, depth, vanish_at_zero=(variant == "S0"))
        g = rng.choice(_g_choices(p))
        if _depth_needed(p, phi, g) > cap:
            continue
        vol = volume_stab_intersection(phi, g, level)
        coeff = rng.choice([-2, -1, 1, 2]) * Fraction(p) ** rng.randint(-1, 1) / vol
        out.append(LatticeElement(coeff, phi, g, level))
    assert lattice_membership(out, variant)
    return out
