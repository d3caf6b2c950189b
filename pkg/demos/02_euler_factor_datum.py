"""The second datum: differences of phi_{p,2} translates, and its coefficient.

The shape of Xi_c is fixed by the two translates; the overall coefficient is
what decides whether the datum is lattice-integral.  This script compares the
coefficient 1/((p-1)^2 (p+1)) with the integral one p (p-1)^2 (p+1).

Run: python3 demos/02_euler_factor_datum.py
"""

from heckenorm.cosets import CanonicalCoset, PGCosetFunction, hecke_act, trace_level, xi_c
from heckenorm.hecke import dual, euler_at_one
from heckenorm.norm_relations import (
    certificate,
    delta1,
    integral_delta1_scale,
    mod_ell_certificate,
    phi_p2,
    nonintegral_delta1_scale,
)
from heckenorm.padic import GElement
from heckenorm.schwartz import LevelSubgroup, membership_report, volume_stab_intersection

x0 = CanonicalCoset(0, 0, 0, 0)

for p in (2, 3):
    print(f"--- p = {p}")
    vol = volume_stab_intersection(phi_p2(p), GElement.identity(), LevelSubgroup.DetP)
    print("volume of the stabiliser of phi_{p,2} at level DetP:", vol)

    target = hecke_act(dual(euler_at_one(p)), PGCosetFunction.f0(p))
    print("dual(P_p(1)) . f0 =", target)

    small = xi_c(trace_level(delta1(p, scale=nonintegral_delta1_scale(p))))
    print("coefficient", nonintegral_delta1_scale(p), "gives", small)
    print("  ratio to target:", (target(x0) / small(x0)).rat)
    ok, reasons = membership_report(delta1(p, scale=nonintegral_delta1_scale(p)), "S0")
    print("  lattice-integral:", ok, "-", reasons[0])

    big = xi_c(trace_level(delta1(p)))
    print("coefficient", integral_delta1_scale(p), "gives", big)
    print("  equals target:", big == target)

    c = certificate(delta1(p), "S0")
    print("  certificate: A =", c.A, " B =", c.B, " denomPower =", c.denomPower)
    if p == 3:
        red = mod_ell_certificate(c, 2)
        print("  mod 2: target", red["target"], "== P'(1)", red["P'"])
