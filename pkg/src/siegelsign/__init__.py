"""Hecke eigenvalues of genus-2 Siegel eigenforms and signs of their products.

Exact GSp(4) arithmetic, the T(p) coset decomposition, spin Euler factors,
eigenvalue streams built from GL(2) data, and prime-sum experiments.
"""

from .errors import (
    DistinctnessError,
    MissingCoefficient,
    NotPrime,
    NotSimilitude,
    OutOfRange,
    ParseError,
    RamifiedPrime,
    SiegelSignError,
    SingularMatrix,
)
from .hecke import (
    CosetRep,
    Family,
    HeckeDecomposition,
    decompose_Tp,
    eigenvalue_from_decomposition,
    lambda_normalized,
    verify_disjoint,
    verify_double_coset,
)
from .satake import SatakeParams, SpinFactor, check_ramanujan, check_weissauer, dirichlet_coeffs, lambda_p, spin_roots
from .symplectic import SimilitudeMatrix, SubgroupSpec, ValuationPattern, is_local_member, is_member, similitude, smith_normal_form

__version__ = "0.1.0"
