"""Exact local norm relations for GL2 x GL2 Rankin-Selberg test data."""

from .cosets import CanonicalCoset, PGCosetFunction, canonicalize, hecke_act, xi_c
from .field import QSqrtP
from .hecke import HeckeElement, LocalizedHecke, SatakeData, dual, theta_eval
from .norm_relations import IdealCertificate, certificate, p_delta, q_operator
from .padic import GElement, Mat2
from .schwartz import Box, LatticeElement, LevelSubgroup, SchwartzFunction

__all__ = [
    "Box", "CanonicalCoset", "GElement", "HeckeElement", "IdealCertificate",
    "LatticeElement", "LevelSubgroup", "LocalizedHecke", "Mat2", "PGCosetFunction",
    "QSqrtP", "SatakeData", "SchwartzFunction", "canonicalize", "certificate", "dual",
    "hecke_act", "p_delta", "q_operator", "theta_eval", "xi_c",
]
