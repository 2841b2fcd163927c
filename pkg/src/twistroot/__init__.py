"""Root combinatorics for twisted affine Lie superalgebras with exact arithmetic."""

from .cylsets import CylinderSet, ZSet
from .functionals import Functional, parabolic, pipeline, solve_zeta, tri_decompose
from .rootspace import KINDS, RootSystem, Weight
from .shadow import CosetClass, ShadowAssignment, build_T, saturate, verify_main_i

__all__ = [
    "KINDS", "RootSystem", "Weight", "ZSet", "CylinderSet", "CosetClass", "ShadowAssignment",
    "build_T", "verify_main_i", "saturate", "Functional", "tri_decompose", "parabolic",
    "solve_zeta", "pipeline",
]
__version__ = "0.1.0"
