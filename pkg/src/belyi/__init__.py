"""Rational maps with prescribed critical data, their families and pole estimates."""
from .critical_map import INF, CriticalTriple, assemble, nullspace, rh_degree, verify_critical_data
from .families import FamilyIndex, critical_data, kernel_map
from .hurwitz import HurwitzData, HurwitzSolution, solve
from .poly import Poly, RationalMap, compose

__all__ = [
    "INF", "CriticalTriple", "assemble", "nullspace", "rh_degree", "verify_critical_data",
    "FamilyIndex", "critical_data", "kernel_map",
    "HurwitzData", "HurwitzSolution", "solve",
    "Poly", "RationalMap", "compose",
]
