from fractions import Fraction

from heckenorm.hecke import SatakeData


def sat_of(p, *vals):
    return SatakeData.from_values(p, *(Fraction(v) for v in vals))
