"""Walk through the simplest datum: the indicator of Z_p^2 against G°.

Run: python3 demos/01_spherical_datum.py
"""

from heckenorm.cosets import CanonicalCoset, PGCosetFunction, hecke_act, trace_level, xi_c
from heckenorm.hecke import HeckeElement, SatakeData, theta_eval
from heckenorm.norm_relations import certificate, delta0, p_delta
from heckenorm.padic import GElement, Mat2
from heckenorm.schwartz import LatticeElement, LevelSubgroup, SchwartzFunction
from heckenorm.whittaker import lambda_value

p = 3
phi0 = SchwartzFunction.indicator_lattice(p, 0)

# Xi_c of phi0 (x) ch(G°) is the indicator of the base coset
f = xi_c([(1, phi0, GElement.identity())])
print("Xi_c(phi0 (x) ch(G°)) =", f)
assert f == PGCosetFunction.f0(p)

# translating by the centre moves the support to r0 = 1, which is S_p^-1 f0
central = GElement(Mat2.scalar(p), Mat2.scalar(p))
g = xi_c([(1, phi0, central)])
print("central translate      =", g)
print("S_p^-1 . f0            =", hecke_act(HeckeElement.S_p(p, -1), PGCosetFunction.f0(p)))

# the Hecke operator attached to each datum
P = p_delta([LatticeElement(1, phi0, GElement.identity(), LevelSubgroup.Full)])
print("P for phi0 (x) ch(G°)  =", P)
print("P for central translate =", p_delta([(1, phi0, central)]))

# the Lambda functional only sees the Satake image of that operator
sat = SatakeData.from_values(p, 2, 5, 3, 7)
print("Lambda(f0)             =", lambda_value(PGCosetFunction.f0(p), sat))
print("Theta(1 - S_p)         =", theta_eval(1 - HeckeElement.S_p(p), sat))

# at level G°[p] the datum carries a factor p - 1 and the certificate says so
d = delta0(p)
print("traced datum coefficient:", trace_level(d)[0].coeff)
c = certificate(d, "S")
print("certificate target:", c.target.numer, " A:", c.A, " B:", c.B)
print("value of Xi_c(Tr delta0) at the base coset:", xi_c(trace_level(d))(CanonicalCoset(0, 0, 0, 0)))
