"""Hecke operators attached to coset functions and (p-1, P'(1)) certificates.

Every compactly supported coset function f satisfies f = P * f0 for a unique
element P of the Hecke algebra localized at 1 - S_p.  P is read off from
Lambda: for the indicator of a coset x, Lambda(ch_x) / L = Theta(V [P + Q P_p(1)])
with V, P, Q built below, and Lambda(theta f) = Theta(dual theta) Lambda(f).
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction

from .cosets import (
    CanonicalCoset,
    PGCosetFunction,
    cumulative_r0,
    hecke_act,
    trace_level,
    volume_orbit,
    xi_c,
)
from .field import QSqrtP
from .hecke import (
    HeckeElement,
    LocalizedHecke,
    divide_exact,
    dual,
    euler_at_one,
    gen_l_inverse_at_one,
    is_integral,
    reduce_mod_ell,
    schur_operator,
)
from .residues import DEFAULT_CEILING
from .schwartz import LatticeElement, LevelSubgroup, membership_report
from .whittaker import gauss_unit_integral

INF = float("inf")


class Falsification(AssertionError):
    """A claimed identity failed; carries the offending inputs."""

    def __init__(self, message, **inputs):
        super().__init__(message)
        self.inputs = inputs


class PreconditionError(ValueError):
    pass


# -------------------------------------------------------------- operators

def _parts(p: int, x: CanonicalCoset):
    """(V, P, Q) with q_operator(x) = V (P + Q P_p(1))."""
    V = HeckeElement.S_p(p, x.r0) * HeckeElement.S(p, 1, x.r1) * volume_orbit(p, x)
    half = QSqrtP.p_half_power(p, -x.m)
    if x.m >= 0:
        P = gen_l_inverse_at_one(p, 1, x.m + 1) * half
    else:
        P = gen_l_inverse_at_one(p, 2, -x.m + 1) * half
    Q = HeckeElement.zero(p)
    if x.n:
        for k in range(max(0, -x.m), x.n):
            eps = gauss_unit_integral(p, k, -x.n) - 1
            Q = Q + schur_operator(p, 1, k + x.m) * schur_operator(p, 2, k) * (half * eps)
    return V, P, Q


def q_operator(p: int, x: CanonicalCoset) -> HeckeElement:
    V, P, Q = _parts(p, x)
    out = V * (P + Q * euler_at_one(p))
    if not is_integral(out):
        raise Falsification("q_operator not integral", coset=str(x))
    return out


def q_of_function(f: PGCosetFunction) -> HeckeElement:
    total = HeckeElement.zero(f.p)
    for x, c in f.items():
        total = total + q_operator(f.p, x) * c
    return total


def operator_of_function(f: PGCosetFunction) -> LocalizedHecke:
    """The P with P * f0 = f, as -S_p dual(Q_f) / (1 - S_p)."""
    p = f.p
    numer = -HeckeElement.S_p(p) * dual(q_of_function(f))
    return LocalizedHecke(numer, 1)


def _full_elements(delta):
    out = []
    for e in delta:
        if isinstance(e, LatticeElement):
            out.append((e.coeff, e.phi, e.g))
        else:
            out.append(e)
    return out


def p_delta(delta, ceiling: int = DEFAULT_CEILING, certify: bool = True) -> LocalizedHecke:
    """P_delta for level-Full data; reduced to denomPower 0 when delta is certified."""
    f = xi_c(_full_elements(delta), ceiling)
    P = operator_of_function(f)
    if certify and all(isinstance(e, LatticeElement) for e in delta):
        ok, _ = membership_report(delta, "S", ceiling)
        if ok:
            q = divide_exact(P.numer)
            if q is None:
                raise Falsification("P_delta not divisible by 1 - S_p for certified data")
            if not is_integral(q):
                raise Falsification("P_delta numerator not in Z[1/p]")
            return LocalizedHecke(q, 0)
    return P.reduced()


def apply_to_f0(P: LocalizedHecke) -> PGCosetFunction:
    """numer(P) * f0; compare with (1 - S_p)^k Xi_c via check_against."""
    return hecke_act(P.numer, PGCosetFunction.f0(P.p))


def check_against(P: LocalizedHecke, f: PGCosetFunction) -> bool:
    p = f.p
    lhs = apply_to_f0(P)
    rhs = hecke_act((1 - HeckeElement.S_p(p)) ** P.denom_power, f)
    return lhs == rhs


# ----------------------------------------------------------- certificates

@dataclass
class IdealCertificate:
    p: int
    level: str
    variant: str
    delta: list
    target: LocalizedHecke
    A: HeckeElement
    B: HeckeElement
    verified: bool = False

    @property
    def denomPower(self):
        return self.target.denom_power

    def identity_holds(self) -> bool:
        p = self.p
        rhs = self.A * (p - 1) + self.B * dual(euler_at_one(p))
        return (self.target.numer == rhs and is_integral(self.A) and is_integral(self.B)
                and self.denomPower <= 1)

    def to_json_obj(self):
        return {
            "p": self.p,
            "level": self.level,
            "variant": self.variant,
            "delta": [e.to_json_obj() for e in self.delta],
            "target": self.target.numer.to_json_obj(),
            "A": self.A.to_json_obj(),
            "B": self.B.to_json_obj(),
            "denomPower": self.denomPower,
            "verified": self.verified,
        }

    def to_json(self):
        return json.dumps(self.to_json_obj(), sort_keys=True, separators=(",", ":"))

    @classmethod
    def from_json_obj(cls, obj, delta=None):
        p = obj["p"]
        return cls(
            p, obj["level"], obj["variant"], delta if delta is not None else obj["delta"],
            LocalizedHecke(HeckeElement.from_json_obj(p, obj["target"]), obj["denomPower"]),
            HeckeElement.from_json_obj(p, obj["A"]),
            HeckeElement.from_json_obj(p, obj["B"]),
            obj["verified"],
        )


def split_function(f: PGCosetFunction):
    """(A_f, B_f) with Q_f = (p-1) A_f + B_f P_p(1), both over Z[1/p].

    n = 0 cosets need values in (p-1) Z[1/p]; n >= 1 cosets get the factor
    p-1 from the orbit volume.
    """
    p = f.p
    A = HeckeElement.zero(p)
    B = HeckeElement.zero(p)
    for x, c in f.items():
        V, P, Q = _parts(p, x)
        if x.n == 0:
            a = c / (p - 1)
            if not (a.is_rational() and _z_inv_p(p, a.rat)):
                raise Falsification("value on an n = 0 coset not in (p-1) Z[1/p]",
                                    coset=str(x), value=repr(c))
            A = A + V * P * a
        else:
            A = A + V * P * (c / (p - 1))
            B = B + V * Q * c
    return A, B


def _z_inv_p(p, q: Fraction):
    den = q.denominator
    while den % p == 0:
        den //= p
    return den == 1


def certificate(delta, variant: str = "S0", ceiling: int = DEFAULT_CEILING) -> IdealCertificate:
    """Certificate P_Tr(delta) = (p-1) A + B dual(P_p(1)) for level-DetP data."""
    if variant not in ("S", "S0"):
        raise ValueError("variant must be 'S' or 'S0'")
    delta = list(delta)
    if not delta or any(e.level is not LevelSubgroup.DetP for e in delta):
        raise PreconditionError("certificate needs level-DetP lattice elements")
    ok, reasons = membership_report(delta, variant, ceiling)
    if not ok:
        raise PreconditionError("presentation not certified: " + "; ".join(reasons))
    p = delta[0].phi.p
    traced = trace_level(delta)
    f = xi_c(_full_elements(traced), ceiling)
    Sp = HeckeElement.S_p(p)
    compact = None
    if variant == "S0":
        try:
            compact = cumulative_r0(f)
        except ValueError:
            compact = None
    if compact is not None:
        # f = (1 - S_p^-1) F, so P = dual(Q_F) with no denominator
        A_f, B_f = split_function(compact)
        target = LocalizedHecke(dual(q_of_function(compact)), 0)
        A, B = dual(A_f), dual(B_f)
    else:
        if variant == "S0":
            raise Falsification("Xi of S0 data is not compactly supported")
        A_f, B_f = split_function(f)
        A, B = -Sp * dual(A_f), -Sp * dual(B_f)
        target = LocalizedHecke(-Sp * dual(q_of_function(f)), 1)
        qa, qb = divide_exact(A), divide_exact(B)
        if qa is not None and qb is not None:
            A, B = qa, qb
            target = LocalizedHecke(divide_exact(target.numer), 0)
    cert = IdealCertificate(p, "DetP", variant, delta, target, A, B)
    if not cert.identity_holds():
        raise Falsification("certificate identity fails", delta=delta)
    if not check_against(target, f):
        raise Falsification("P * f0 differs from Xi_c(Tr delta)", delta=delta)
    cert.verified = True
    return cert


def mod_ell_certificate(cert: IdealCertificate, ell: int):
    """Reduce target, B and dual(P_p(1)) mod ell (ell | p - 1); returns the reductions."""
    p = cert.p
    if (p - 1) % ell:
        raise ValueError("ell must divide p - 1")
    Pd = dual(euler_at_one(p))
    t = reduce_mod_ell(cert.target.numer, ell)
    bp = reduce_mod_ell(cert.B * Pd, ell)
    if t != bp:
        raise Falsification("target is not B * P'(1) mod ell", ell=ell)
    return {"target": t, "B": reduce_mod_ell(cert.B, ell), "P'": reduce_mod_ell(Pd, ell)}


# ---------------------------------------------------------- independence

def _rank(rows, p):
    """Exact rank over Q(sqrt p) by Gaussian elimination."""
    rows = [list(r) for r in rows]
    rank = 0
    ncols = len(rows[0]) if rows else 0
    for col in range(ncols):
        piv = next((i for i in range(rank, len(rows)) if not rows[i][col].is_zero()), None)
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        inv = rows[rank][col].inverse()
        for i in range(len(rows)):
            if i != rank and not rows[i][col].is_zero():
                f = rows[i][col] * inv
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[rank])]
        rank += 1
    return rank


def independence_check(p: int, cosets) -> bool:
    cosets = list(cosets)
    ops = [q_operator(p, x) for x in cosets]
    keys = sorted({k for h in ops for k in h.terms})
    rows = [[h.terms.get(k, QSqrtP(p)) for k in keys] for h in ops]
    return _rank(rows, p) == len(cosets)


# ------------------------------------------------------------- families

def delta0(p: int, level=LevelSubgroup.DetP):
    from .padic import GElement
    from .schwartz import SchwartzFunction
    return [LatticeElement(p - 1, SchwartzFunction.indicator_lattice(p, 0), GElement.identity(), level)]


def phi_p2(p: int):
    """Indicator of p^2 Z_p x (1 + p^2 Z_p)."""
    from .schwartz import Box, SchwartzFunction
    return SchwartzFunction.from_boxes(p, [(1, Box(0, 2, 1, 2))])


def nonintegral_delta1_scale(p: int) -> Fraction:
    """1/((p-1)^2 (p+1)): right shape for Xi_c, but not lattice-integral."""
    return Fraction(1, (p - 1) ** 2 * (p + 1))


def integral_delta1_scale(p: int) -> Fraction:
    """p (p-1)^2 (p+1): lattice-integral, and makes Xi_c(Tr delta1) = dual(P_p(1)) f0."""
    return Fraction(p * (p - 1) ** 2 * (p + 1))


def delta1(p: int, level=LevelSubgroup.DetP, scale=None):
    from .padic import GElement, Mat2
    n_p = integral_delta1_scale(p) if scale is None else Fraction(scale)
    u = Mat2(1, Fraction(1, p), 0, 1)
    phi = phi_p2(p)
    return [
        LatticeElement(n_p, phi, GElement.identity(), level),
        LatticeElement(-n_p, phi, GElement(Mat2.identity(), u), level),
    ]
