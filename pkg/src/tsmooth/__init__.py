"""Exact invariants of plane curve singularities and T-smoothness checks.

The package computes, in exact rational arithmetic, the local invariants of
plane curve germs (Tjurina number, complete-intersection colength bounds and
the gamma contact invariants) and evaluates sufficient numerical conditions
for equisingular families of curves on five classes of surfaces to be
T-smooth or empty.
"""

__version__ = "0.1.0"

from .jets import Jet, PolynomialSyntaxError, jet_for_germ, make_jet, parse_polynomial
from .local_algebra import (
    Colength,
    LocalIdealRep,
    NotFiniteColengthError,
    colength,
    intersection_multiplicity,
    standard_generators,
    tjurina_ideal,
)
from .invariants import (
    GermInputError,
    GermSpec,
    InvariantRecord,
    NonReducedGermError,
    SearchBudget,
    catalog_invariants,
    gamma_alpha_search,
    invariants_of,
    lambda_alpha,
    tau_ci_search,
)
from .surfaces import (
    CriterionConstants,
    DivisorClass,
    K3Surface,
    P3Hypersurface,
    PicardOne,
    ProductOfCurves,
    ProjectivePlane,
    RuledSurface,
    canonical_class,
    criterion_constants,
    d_minus_k_squared,
    divisor,
    intersect,
)
from .criteria import (
    CriterionReport,
    InstabilityInstance,
    check_instability_arithmetic,
    cross_check_corollaries,
    evaluate,
    strictness_mode,
)

__all__ = [name for name in dir() if not name.startswith("_")]
