"""Exact equivariant open Gromov-Witten invariants of the disk.

Everything is computed over exact rationals: invariants are Laurent
polynomials in the equivariant parameter u, represented as sparse
exponent -> Fraction maps.  No floating point anywhere.
"""

from .laurent import Laurent
from .specs import Component, ModuliSpec, DescendentProblem

__all__ = ["Laurent", "Component", "ModuliSpec", "DescendentProblem"]
__version__ = "0.1.0"
