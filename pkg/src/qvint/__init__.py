"""qvint: exact desk-scale toolkit for secret-vector interpolation over finite fields."""

from .census import (
    ImageSet,
    Preimage,
    PreimageCensus,
    SecondMomentCheck,
    Transversal,
    build_transversal,
    chebyshev_zero_bound,
    enumerate_census,
    good_preimage_count,
    good_set_sizes,
    image_set,
    image_size_lower_bound,
    linear_combination,
    second_moment_identity_check,
)
from .complexity import (
    InstanceClassification,
    QueryPlan,
    ReductionPlan,
    classify_instance,
    multivariate_query_bounds,
    plan_bounded_error,
    plan_high_probability,
    univariate_reduction,
)
from .domain import (
    Domain,
    DomainStats,
    IndependenceReport,
    VectorFq,
    build_explicit_domain,
    build_monomial_domain,
    build_vandermonde_domain,
    dot,
    monomial_exponents,
    parse_vector,
    read_domain_file,
    validate_independence,
    write_domain_file,
)
from .errors import ContractError, ParameterError, QvintError, ResourceCapError
from .field import (
    FieldElement,
    FieldParams,
    character_orthogonality_check,
    enumerate_field,
    parse_field_spec,
    smallest_irreducible,
)
from .simulator import (
    OutcomeDistribution,
    SampleReport,
    StateVector,
    fourier_state,
    outcome_distribution,
    phase_query_check,
    restricted_fourier_state,
    run_algorithm,
    sample_outcomes,
    state_family_rank,
    success_probability,
)

__all__ = [
    "ContractError",
    "Domain",
    "DomainStats",
    "FieldElement",
    "FieldParams",
    "ImageSet",
    "IndependenceReport",
    "InstanceClassification",
    "OutcomeDistribution",
    "ParameterError",
    "Preimage",
    "PreimageCensus",
    "QueryPlan",
    "QvintError",
    "ReductionPlan",
    "ResourceCapError",
    "SampleReport",
    "SecondMomentCheck",
    "StateVector",
    "Transversal",
    "VectorFq",
    "build_explicit_domain",
    "build_monomial_domain",
    "build_transversal",
    "build_vandermonde_domain",
    "character_orthogonality_check",
    "chebyshev_zero_bound",
    "classify_instance",
    "dot",
    "enumerate_census",
    "enumerate_field",
    "fourier_state",
    "good_preimage_count",
    "good_set_sizes",
    "image_set",
    "image_size_lower_bound",
    "linear_combination",
    "monomial_exponents",
    "multivariate_query_bounds",
    "outcome_distribution",
    "parse_field_spec",
    "parse_vector",
    "phase_query_check",
    "plan_bounded_error",
    "plan_high_probability",
    "read_domain_file",
    "restricted_fourier_state",
    "run_algorithm",
    "sample_outcomes",
    "second_moment_identity_check",
    "smallest_irreducible",
    "state_family_rank",
    "success_probability",
    "univariate_reduction",
    "validate_independence",
    "write_domain_file",
]

__version__ = "0.1.0"
