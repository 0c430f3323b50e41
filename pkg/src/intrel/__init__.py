"""Integer binary relations, integer posets and their combinatorial Hopf algebras."""

from .algebra import (
    F,
    ModuleElement,
    TensorElement,
    count_indecomposables,
    e_from,
    f_coproduct,
    from_f,
    h_from,
    inclusion_exclusion_in,
    to_f,
)
from .config import EnumerationLimitError, enumeration_limit, set_enumeration_limit
from .families import FamilyTag, enumerate_family, is_in_family
from .family_algebras import (
    FamilyElement,
    FamilyTensor,
    fiber_sum_element,
    isomorphism_check,
    quotient_coproduct,
    quotient_product,
    subalgebra_coproduct,
    subalgebra_product,
)
from .projections import project
from .relations import IntegerRelation, TotalCut, from_pairs
from .verify import VerificationReport, run_suite

__all__ = [
    "F", "ModuleElement", "TensorElement", "count_indecomposables", "e_from", "f_coproduct",
    "from_f", "h_from", "inclusion_exclusion_in", "to_f",
    "EnumerationLimitError", "enumeration_limit", "set_enumeration_limit",
    "FamilyTag", "enumerate_family", "is_in_family",
    "FamilyElement", "FamilyTensor", "fiber_sum_element", "isomorphism_check",
    "quotient_coproduct", "quotient_product", "subalgebra_coproduct", "subalgebra_product",
    "project", "IntegerRelation", "TotalCut", "from_pairs", "VerificationReport", "run_suite",
]
