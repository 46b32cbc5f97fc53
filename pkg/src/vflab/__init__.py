"""Exact b-functions, V-filtration snapshots and monomial multiplier ideals."""
from .bfunction import INFINITY, BFunction, IrrationalFactorError, format_bfunction
from .bs_engine import (
    DomainError,
    FunctionalEquationCertificate,
    NoBFunctionWithinBounds,
    NonIsolatedSingularityError,
    NotHomogeneousError,
    SigmaSet,
    WeightVector,
    apply_operator,
    bs_weighted_homogeneous,
    find_minimal_b_bounded,
    jacobian_ideal,
    lct_from_bfunction,
    milnor_basis,
    minimal_b_certificate,
    minimal_exponent,
    reduced_bfunction,
    shifted_bfunction,
    sigma_set,
    solve_functional_equation,
    specialize_operator,
    validate_weighted_homogeneous,
    yano_annihilator_generators,
)
from .groebner import (
    GREVLEX,
    LEX,
    Ideal,
    InfiniteQuotientError,
    MonomialOrder,
    QuotientBasis,
    divide,
    groebner_basis,
    ideal_membership,
    normal_form,
    s_polynomial,
    standard_monomials,
    weighted_order,
)
from .kernels import BACKEND
from .multiplier import (
    LogResolutionData,
    MonomialDivisor,
    MonomialIdeal,
    ResolutionRow,
    budur_saito_consistency,
    check_jumping_roots,
    i_lambda,
    jumping_numbers_monomial,
    lct_from_resolution,
    microlocal_triviality_threshold,
    min_exponent_lower_bound,
    multiplier_ideal_monomial,
    root_bound_candidates,
)
from .parsing import ParseError, parse_polynomial
from .polynomial import Polynomial, VarSet, format_polynomial
from .vlab import (
    AxiomReport,
    BfElement,
    Truncation,
    VLab,
    VModel,
    check_axioms,
    elementary_graded_annihilators,
    gr_action_maps,
    membership_certify,
    tau,
    truncated_subspace,
    v_generators,
)
from .weyl import (
    TwistedElement,
    WeylContext,
    WeylOperator,
    act_on_twisted,
    check_s_identity,
    classical_adjoint,
    specialize_s,
)

__version__ = "0.1.0"
