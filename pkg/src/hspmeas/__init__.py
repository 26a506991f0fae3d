"""Hidden-subgroup state ensembles and optimal single-copy measurements.

Build small finite groups as Cayley tables, enumerate their subgroup
lattices and character tables, construct hidden-subgroup discrimination
ensembles, synthesize the pretty good measurement, the recursive lattice
measurement, and the optimal per-irrep measurement, and certify optimality
through the Holevo-Yuen-Kennedy-Lax conditions.
"""

from .characters import (
    CharacterTable,
    ClassData,
    ConvergenceError,
    NonIntegerMultiplicityError,
    character_table,
    element_classes,
    trivial_multiplicity,
)
from .groups import (
    DEFAULT_SIZE_CAP,
    CapExceededError,
    DescriptorError,
    Group,
    NotAGroupError,
    brute_force_isomorphism,
    build_cyclic,
    build_dihedral,
    build_heisenberg,
    build_product,
    build_symmetric,
    from_cayley,
    parse_descriptor,
    parse_descriptor_list,
)
from .lattice import (
    BudgetExceededError,
    Subgroup,
    SubgroupClass,
    SubgroupLattice,
    close_subset,
    conjugate_subgroup,
    enumerate_subgroups,
    subgroup_from_elements,
)
from .linalg import (
    Operator,
    TagViolationError,
    central_projector,
    coset_state,
    hidden_state,
    operator_from_json,
    operator_to_json,
    regular_rep,
    subgroup_projector,
    verify_tags,
)
from .measurements import (
    IrrepPlan,
    MeasurementPlan,
    NonInvariantPriorError,
    Povm,
    Prior,
    PriorError,
    build_plan,
    class_weight_prior,
    hsp_states,
    ip_measurement,
    make_prior,
    optimal_measurement,
    pgm,
    random_invariant_prior,
    uniform_prior,
)
from .verify import (
    MismatchError,
    OptimalityResult,
    OutOfRangeError,
    Tolerances,
    ValidityResult,
    VerificationReport,
    check_optimality,
    check_validity,
    closed_form_success,
    success_probability,
    verification_report,
)

__version__ = "0.1.0"

__all__ = [
    "BudgetExceededError",
    "CapExceededError",
    "CharacterTable",
    "ClassData",
    "ConvergenceError",
    "DEFAULT_SIZE_CAP",
    "DescriptorError",
    "Group",
    "IrrepPlan",
    "MeasurementPlan",
    "MismatchError",
    "NonIntegerMultiplicityError",
    "NonInvariantPriorError",
    "NotAGroupError",
    "Operator",
    "OptimalityResult",
    "OutOfRangeError",
    "Povm",
    "Prior",
    "PriorError",
    "Subgroup",
    "SubgroupClass",
    "SubgroupLattice",
    "TagViolationError",
    "Tolerances",
    "ValidityResult",
    "VerificationReport",
    "brute_force_isomorphism",
    "build_cyclic",
    "build_dihedral",
    "build_heisenberg",
    "build_plan",
    "build_product",
    "build_symmetric",
    "central_projector",
    "character_table",
    "check_optimality",
    "check_validity",
    "class_weight_prior",
    "close_subset",
    "closed_form_success",
    "conjugate_subgroup",
    "coset_state",
    "element_classes",
    "enumerate_subgroups",
    "from_cayley",
    "hidden_state",
    "hsp_states",
    "ip_measurement",
    "make_prior",
    "operator_from_json",
    "operator_to_json",
    "optimal_measurement",
    "parse_descriptor",
    "parse_descriptor_list",
    "pgm",
    "random_invariant_prior",
    "regular_rep",
    "subgroup_from_elements",
    "subgroup_projector",
    "success_probability",
    "trivial_multiplicity",
    "uniform_prior",
    "verification_report",
    "verify_tags",
]
