"""Exact formulas for vector partition functions.

The number of ways to write ``lambda`` as a nonnegative integer combination
of a fixed list of vectors is a quasi-polynomial on each big chamber.  This
package computes those quasi-polynomials by residues and checks them against
direct enumeration.
"""

from .arrangement import (Chamber, Exterior, OnWall, System, ValidityRegion, chamber_of,
                          enumerate_chambers, get_chamber, in_validity_region, validity_region)
from .cyclotomic import CycNumber
from .formulas import (EhrhartQP, ExteriorPoint, GenericityViolated, NonRealValue, QuasiPolynomial,
                       ehrhart, euler_maclaurin_quasipoly, evaluate, exponential_sum_closed_form,
                       meromorphic_quasipoly, partition_quasipoly, volume_polynomial,
                       weighted_sum_quasipoly)
from .oracle import coeff_expansion, count_points, embed_polytope, sum_weight
from .residue import Factor, jk, simple_fraction_decompose, tres_at_pole
from .separation import (DegenerateRelation, EssentialityViolated, FlatBox, MeroFunction,
                         admissible_decompose, box_membership, crucial_split)
from .series import Poly

__all__ = [
    "Chamber", "Exterior", "OnWall", "System", "ValidityRegion", "chamber_of", "enumerate_chambers",
    "get_chamber", "in_validity_region", "validity_region", "CycNumber", "EhrhartQP", "ExteriorPoint",
    "GenericityViolated", "NonRealValue", "QuasiPolynomial", "ehrhart", "euler_maclaurin_quasipoly",
    "evaluate", "exponential_sum_closed_form", "meromorphic_quasipoly", "partition_quasipoly",
    "volume_polynomial", "weighted_sum_quasipoly", "coeff_expansion", "count_points",
    "embed_polytope", "sum_weight", "Factor", "jk", "simple_fraction_decompose", "tres_at_pole",
    "DegenerateRelation", "EssentialityViolated", "FlatBox", "MeroFunction", "admissible_decompose",
    "box_membership", "crucial_split", "Poly",
]
