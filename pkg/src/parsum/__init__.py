"""Parallel sums of positive operators, Hermitian forms, anti-dual operators and
representable functionals, each built by several independent factorizations."""

from .algebra import (
    AlgebraError,
    Functional,
    GnsTriple,
    RepresentabilityError,
    SingularityMismatchError,
    SingularityReport,
    StarAlgebra,
    algebra_mult,
    algebra_star,
    approximate_unit_limit,
    associated_operator,
    functional_parallel_sum,
    gns,
    library,
    modified_gns_vector,
    representability_check,
    singularity_report,
    unital_identity_check,
)
from .antidual import AntidualOperator, antidual_parallel_sum, banach_schwarz_check
from .forms import HermitianForm, form_parallel_sum
from .linalg import DEFAULT_TOL, DimensionError, DomainError, Tolerance
from .operators import (
    ALL_ROUTES,
    ROUTES,
    NotPositiveError,
    RouteMismatchError,
    defect_range_report,
    fillmore_williams_check,
    parallel_sum,
    parallel_sum_oracle,
    quadratic_form_inf,
    quadratic_form_sup,
    route_agreement,
)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
