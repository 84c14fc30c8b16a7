"""Numerical toolkit for the quantum Minkowski spaces of seven Lorentz-group deformations.

Builds the case data, R-matrix, metric, gamma matrices, differential
calculus on the coordinate algebra, Dirac operator and truncated momentum
representations, and checks their identities numerically.
"""

from .catalog import CaseSpec, InvalidParameter, build_lorentz_data, default_grid
from .structures import StructureSet, build_structures, clifford_residual, structures_for

__all__ = [
    "CaseSpec",
    "InvalidParameter",
    "StructureSet",
    "build_lorentz_data",
    "build_structures",
    "clifford_residual",
    "default_grid",
    "structures_for",
]
