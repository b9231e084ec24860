"""Exact Farkas-type decisions for operators on finite coordinate lattices."""

__version__ = "0.1.0"

from .lattice import (  # noqa: E402
    Band,
    BudgetExceeded,
    DiagonalOrthomorphism,
    DimensionError,
    Operator,
    PartitionOfUnity,
)
from .lp import CyclingError, LinearProgram, conic_membership, solve  # noqa: E402
from .farkas import (  # noqa: E402
    HomogeneousInstance,
    InhomogeneousInstance,
    MatrixInstance,
    decide_dominance,
    decide_inhomogeneous,
    decide_matrix_dominance,
    factor_positive,
    factor_through,
    reconstruct,
)

__all__ = [
    "Band", "BudgetExceeded", "DiagonalOrthomorphism", "DimensionError", "Operator",
    "PartitionOfUnity", "CyclingError", "LinearProgram", "conic_membership", "solve",
    "HomogeneousInstance", "InhomogeneousInstance", "MatrixInstance", "decide_dominance",
    "decide_inhomogeneous", "decide_matrix_dominance", "factor_positive", "factor_through",
    "reconstruct",
]
