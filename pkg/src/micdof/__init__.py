"""Exact DoF regions and interference-alignment simulation for the
2-user MIMO interference channel under mixed transmitter side information.

The package has two halves. The rational half (:mod:`micdof.regions`,
:mod:`micdof.channel`) builds the outer-bound polytopes of the
degrees-of-freedom region exactly, with `fractions.Fraction` arithmetic
throughout, so corner points like (9/5, 2) are testable as identities.
The numerical half (:mod:`micdof.numerics`, :mod:`micdof.schemes`,
:mod:`micdof.sim`) runs the two-phase alignment scheme symbol-by-symbol
over random Rayleigh channels and checks that every data symbol is
recovered exactly, tying the achieved corners back to the rational
regions.
"""

from micdof.channel import AntennaConfig, CsitModel, CsitState, canonicalize, named_model
from micdof.regions import DofRegion, LinearBound, classify, compare, region
from micdof.schemes import build_plan, execute_and_decode, hia_parameters
from micdof.sim import cross_check, monte_carlo

__all__ = [
    "AntennaConfig",
    "CsitModel",
    "CsitState",
    "DofRegion",
    "LinearBound",
    "build_plan",
    "canonicalize",
    "classify",
    "compare",
    "cross_check",
    "execute_and_decode",
    "hia_parameters",
    "monte_carlo",
    "named_model",
    "region",
]
