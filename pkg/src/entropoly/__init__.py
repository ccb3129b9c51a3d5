"""Maximum-entropy Gaussian estimates for polytope volumes and point counts.

Given a system ``A x = b`` over the non-negative orthant, the integer
lattice, or the 0-1 cube, the package solves the associated
maximum-entropy program, evaluates the Gaussian approximation of the
volume or point count, reports the hypothesis-condition quantities and
rigorous additive error bounds, and validates everything against exact
desk-scale oracles and a seeded Monte Carlo estimator.
"""

from .errors import (
    DimensionMismatch,
    DimensionTooLarge,
    DomainViolation,
    DualDomainViolation,
    DualUnbounded,
    EntropolyError,
    InvalidProblemFile,
    MarginMismatch,
    NotConverged,
    NotInInterior,
    NotPositiveDefinite,
    NotSymmetric,
    QuasiPolynomial,
    RankDeficient,
    StateSpaceTooLarge,
    UnsupportedMatrix,
)
from .estimators import (
    ConditionReport,
    LogEstimate,
    MCEstimate,
    condition_report,
    gaussian_count,
    gaussian_volume,
    monte_carlo_count,
)
from .generators import (
    YFamily,
    builtin_yfamily,
    detect_family,
    gen_multiway,
    gen_polystochastic,
    gen_transport,
    gen_yfamily_multiway,
    gen_yfamily_transport,
)
from .linalg import SymmetricSpectrum, hnf_lattice_index, logdet_gram, sym_eig_range
from .model import (
    DomainKind,
    InteriorHint,
    PolytopeSpec,
    ValidationReport,
    load_problem,
    problem_to_dict,
    validate_spec,
)
from .oracles import (
    FiniteMaxEntResult,
    char_integral_count,
    exact_count,
    exact_volume_ehrhart,
    finite_maxent,
)
from .solver import (
    EntropyModel,
    MaxEntSolution,
    dual_to_primal,
    entropy_gradient,
    entropy_value,
    model_for_domain,
    solve_max_entropy,
    variance_weights,
)

__version__ = "0.1.0"
