"""Exact tools for superincreasing integer knapsacks.

Validation and greedy packing, linear optimization by a leaf scan,
complete facet descriptions of the integer hull (one and two sided),
extended formulations for the lex-interval case, a continuous-slack
extension, and a brute-force certification oracle over exact rationals.
"""

from .core import (
    Cmp,
    KnapsackInstance,
    LexOrdering,
    Sense,
    TightenReport,
    ValidatedKnapsack,
    is_superincreasing,
    lex_cmp,
    membership,
    tighten_bounds,
    validate,
)
from .greedy import (
    GreedyProfile,
    PackingReport,
    complement_le_instance,
    greedy_solution,
    max_capacity,
    minimal_packing,
    profile_for,
    uniqueness,
)
from .dpopt import DPResult, LeafDescriptor, leaf_set, optimal_leaves, optimize
from .facets import (
    FacetCertificate,
    HPolytope,
    LinearInequality,
    bound_rows,
    experimental_beta_lex_hull,
    facet_certificate,
    ge_packing_coefficient,
    hull_ge,
    hull_le,
    hull_lower_bounded,
    packing_inequality,
    phi,
)
from .intersect import (
    ExtendedFormulation,
    IntersectionCase,
    TwoSidedInstance,
    build_two_sided,
    case_classify,
    extended_formulation,
    intersection_hull,
    lift_point,
    relaxed_intersection,
)
from .apps import (
    MixedExtendedSystem,
    MixedInstance,
    alpha_expansion_instance,
    integer_basis_instance,
    mixed_hull_extended,
)
from . import errors, jsonio, oracle

__version__ = "0.1.0"

__all__ = [
    "Cmp",
    "DPResult",
    "ExtendedFormulation",
    "FacetCertificate",
    "GreedyProfile",
    "HPolytope",
    "IntersectionCase",
    "KnapsackInstance",
    "LeafDescriptor",
    "LexOrdering",
    "LinearInequality",
    "MixedExtendedSystem",
    "MixedInstance",
    "PackingReport",
    "Sense",
    "TightenReport",
    "TwoSidedInstance",
    "ValidatedKnapsack",
    "alpha_expansion_instance",
    "bound_rows",
    "build_two_sided",
    "case_classify",
    "complement_le_instance",
    "errors",
    "experimental_beta_lex_hull",
    "extended_formulation",
    "facet_certificate",
    "ge_packing_coefficient",
    "greedy_solution",
    "hull_ge",
    "hull_le",
    "hull_lower_bounded",
    "integer_basis_instance",
    "intersection_hull",
    "is_superincreasing",
    "jsonio",
    "leaf_set",
    "lex_cmp",
    "lift_point",
    "max_capacity",
    "membership",
    "minimal_packing",
    "mixed_hull_extended",
    "optimal_leaves",
    "optimize",
    "oracle",
    "packing_inequality",
    "phi",
    "profile_for",
    "relaxed_intersection",
    "tighten_bounds",
    "uniqueness",
    "validate",
]
