"""Lambda on single cosets: raw unfolded series against the closed form.

Also shows the Hecke equivariance of Lambda and the JPSS period of a box
function matching the Satake image of its Hecke operator.

Run: python3 demos/03_explicit_formula.py
"""

import random

import numpy as np

from heckenorm.cosets import CanonicalCoset, PGCosetFunction, hecke_act
from heckenorm.hecke import HeckeElement, dual
from heckenorm.norm_relations import p_delta, q_operator
from heckenorm.padic import GElement
from heckenorm.sampling import random_phi
from heckenorm.schwartz import LatticeElement, LevelSubgroup, volume_stab_intersection
from heckenorm.whittaker import (
    jpss_period,
    lambda_closed_form,
    lambda_closed_form_function,
    lambda_series,
    random_satake,
    theta_x_eval,
)

p = 3
rng = random.Random(12)
sat = random_satake(p, rng)
print("Satake data:", sat)

x = CanonicalCoset(0, 0, 1, 2)
s = lambda_series(x, sat, 10)
closed = lambda_closed_form(x, sat).series(10, s.start)
print(f"coset {x}: first series coefficients")
print(np.array([float(c) for c in s.coeffs[:6]]))
print("series == closed form:", s == closed)
print("Hecke operator of the indicator:", q_operator(p, x))

# Lambda(theta f) = Theta_X(dual theta) Lambda(f)
f = PGCosetFunction(p, {x: 2, CanonicalCoset(1, 0, 0, 0): -1})
for name, th in [("T1", HeckeElement.T(p, 1)), ("S2", HeckeElement.S(p, 2))]:
    lhs = lambda_closed_form_function(hecke_act(th, f), sat)
    rhs = theta_x_eval(dual(th), sat) * lambda_closed_form_function(f, sat)
    print(f"equivariance for {name}:", lhs == rhs)

# the period of vol^-1 phi equals the Satake image of dual(P_delta)
phi = random_phi(p, rng, 2, vanish_at_zero=False)
vol = volume_stab_intersection(phi, GElement.identity(), LevelSubgroup.Full)
P = p_delta([LatticeElement(1 / vol, phi, GElement.identity(), LevelSubgroup.Full)])
print("box function:", phi, " stabiliser volume:", vol)
print("P_delta:", P)
print("period:", jpss_period(phi * (1 / vol), sat), " Theta(dual P):", P.dual().theta(sat))
