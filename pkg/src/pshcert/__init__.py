"""Numerical certification of Hessian lower bounds for weight families on
rigid domains whose boundary mixed term is a sum of squared monomials."""

from .certify import (
    Certificate,
    CheckRecord,
    EigensolverError,
    SamplePlan,
    certify_epsilon,
    check_dominance,
    check_resolve,
    check_weight_family,
    fd_hessian,
    hermitian_min_eigenvalue,
    problem_digest,
    reevaluate_margin,
    scan_rows,
)
from .finite_type import (
    MonomialCurve,
    MultiplicityBudgetError,
    NotFiniteType,
    TypeReport,
    conjecture_bounds,
    curve_vanishing_ratio,
    dangelo_type,
    minimal_pure_powers,
    multiplicity,
    probe_type,
)
from .monomials import (
    AmbientPoint,
    HermitianForm,
    MixedTerm,
    Monomial,
    ambient_holomorphic_gradient,
    defining_function,
    eval_mixed,
    levi_form,
    wirtinger_derivative,
)
from .problem_io import ProblemError, parse_problem, serialize_problem
from .weights import (
    Cutoff,
    Hinge,
    WeightFamily,
    build_cutoff,
    build_hinge,
    choose_constants,
    lambda_hessian,
    lambda_tilde,
    lambda_weight,
    rescale_family,
    resolve_hessian,
    rho_delta,
    rho_hessian,
    tau,
)

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
