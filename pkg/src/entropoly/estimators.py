"""Gaussian estimates, hypothesis-condition reports and Monte Carlo counting.

The headline quantities: with z the entropy maximizer, H(z) the optimal
entropy, and B the matrix whose j-th column is the j-th column of A
scaled by the per-coordinate standard deviation, the estimate is

    volume:  exp{H(z)} * sqrt(det A Aᵀ / det B Bᵀ) / (2 pi)^{d/2}
    count:   exp{H(z)} * (det Lambda) / ((2 pi)^{d/2} sqrt(det B Bᵀ))

where det Lambda is the index of the image lattice A(Zⁿ) in Zᵈ.  All
values are held in natural-log scale; the raw determinants of the
generated benchmark families overflow double precision.

The condition report collects the quantities that decide whether the
Gaussian approximation comes with a guarantee: the smallest eigenvalue of
the covariance form, the column-norm bound theta, the variance floor
alpha, the moment bound rho of a supplied family of lattice solution
sets, and the additive error bound delta derived from them.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import DomainViolation
from .generators import YFamily
from .linalg import hnf_lattice_index, logdet_gram, sym_eig_range
from .model import DomainKind, PolytopeSpec
from .solver import EntropyModel, MaxEntSolution, variance_weights

_LOG_2PI = math.log(2.0 * math.pi)
_MC_BLOCK = 1 << 16


@dataclass(frozen=True)
class LogEstimate:
    """A Gaussian estimate in natural-log scale with its additive pieces.

    ``log_value = entropy_term + half_logdet_AAT - half_logdet_BBT
    + dim_term + lattice_term`` where the optional terms count as zero.
    ``lattice_warning`` flags a nontrivial image lattice: the det-Lambda
    factor is still applied, but the guarantee theory assumes index 1.
    """

    log_value: float
    entropy_term: float
    half_logdet_AAT: Optional[float]
    half_logdet_BBT: float
    dim_term: float
    lattice_term: Optional[float]
    lattice_warning: bool = False


@dataclass(frozen=True)
class ConditionReport:
    """Hypothesis quantities and error bounds for a solved instance."""

    lambda_q: float
    theta: float
    alpha: Optional[float]
    rho: Optional[float]
    epsilon: float
    gamma_constant: float
    lambda_required: float
    hypotheses_met: bool
    delta_bound: Optional[float]


@dataclass(frozen=True)
class MCEstimate:
    """Seeded rejection-count estimate; ``log_value`` absent on zero hits."""

    log_value: Optional[float]
    hits: int
    samples: int
    std_err_log: Optional[float]
    seed: int


def _scaled_columns(spec: PolytopeSpec, sol: MaxEntSolution) -> np.ndarray:
    weights = variance_weights(sol.z, sol.model)
    return spec.A * np.sqrt(weights)


def assemble_log_value(entropy_term: float, half_logdet_AAT: Optional[float],
                       half_logdet_BBT: float, dim_term: float,
                       lattice_term: Optional[float]) -> float:
    """Canonical left-to-right sum of the estimate terms.

    Fixing the association makes the decomposition identity of
    :class:`LogEstimate` exact, not just up to rounding.
    """
    total = entropy_term
    if half_logdet_AAT is not None:
        total = total + half_logdet_AAT
    total = total - half_logdet_BBT + dim_term
    if lattice_term is not None:
        total = total + lattice_term
    return total


def gaussian_volume(spec: PolytopeSpec, sol: MaxEntSolution) -> LogEstimate:
    """Log of the Gaussian volume estimate for a continuous spec."""
    if spec.domain is not DomainKind.VOLUME:
        raise DomainViolation("gaussian_volume needs a volume-domain spec")
    if sol.model is not EntropyModel.EXPONENTIAL:
        raise DomainViolation("gaussian_volume needs an exponential-model solution")
    d = spec.num_constraints
    half_aat = 0.5 * logdet_gram(spec.A)
    half_bbt = 0.5 * logdet_gram(_scaled_columns(spec, sol))
    dim_term = -0.5 * d * _LOG_2PI
    return LogEstimate(
        log_value=assemble_log_value(sol.entropy, half_aat, half_bbt, dim_term, None),
        entropy_term=sol.entropy,
        half_logdet_AAT=half_aat,
        half_logdet_BBT=half_bbt,
        dim_term=dim_term,
        lattice_term=None,
    )


def gaussian_count(spec: PolytopeSpec, sol: MaxEntSolution) -> LogEstimate:
    """Log of the Gaussian lattice-point (or 0-1 point) count estimate."""
    if not spec.domain.is_discrete:
        raise DomainViolation("gaussian_count needs a discrete-domain spec")
    expected = EntropyModel.GEOMETRIC if spec.domain is DomainKind.INTEGER else EntropyModel.BERNOULLI
    if sol.model is not expected:
        raise DomainViolation(
            "gaussian_count on a %s spec needs a %s-model solution"
            % (spec.domain.value, expected.value)
        )
    d = spec.num_constraints
    lattice_index = hnf_lattice_index(spec.integer_A())
    lattice_term = math.log(lattice_index)
    half_bbt = 0.5 * logdet_gram(_scaled_columns(spec, sol))
    dim_term = -0.5 * d * _LOG_2PI
    return LogEstimate(
        log_value=assemble_log_value(sol.entropy, None, half_bbt, dim_term, lattice_term),
        entropy_term=sol.entropy,
        half_logdet_AAT=None,
        half_logdet_BBT=half_bbt,
        dim_term=dim_term,
        lattice_term=lattice_term,
        lattice_warning=lattice_index != 1,
    )


def _theta(spec: PolytopeSpec, z: np.ndarray, model: EntropyModel) -> float:
    A = spec.A
    if model is EntropyModel.EXPONENTIAL:
        col_l2 = np.sqrt((A * A).sum(axis=0))
        return float(np.max(z * col_l2))
    col_l1 = np.abs(A).sum(axis=0)
    if model is EntropyModel.GEOMETRIC:
        ratios = col_l1 * np.sqrt((1.0 + z) ** 3 / z)
    else:
        ratios = col_l1 / np.sqrt(z * (1.0 - z))
    return max(1.0, float(np.max(ratios)))


def delta_bound_integer(alpha: float, theta: float, rho: float) -> float:
    """Additive error bound for lattice-point counting."""
    m = math.floor(1.0 / (16.0 * math.pi**2 * rho * theta**2))
    return math.exp(-m * math.log1p(0.4 * alpha * math.pi**2))


def delta_bound_binary(alpha: float, theta: float, rho: float) -> float:
    """Additive error bound for 0-1 counting."""
    return math.exp(-alpha / (80.0 * theta**2 * rho))


def condition_report(spec: PolytopeSpec, sol: MaxEntSolution,
                     model: Optional[EntropyModel] = None,
                     yfam: Optional[YFamily] = None,
                     epsilon: float = 0.25,
                     gamma_constant: float = 1.0) -> ConditionReport:
    """Evaluate the hypothesis quantities of the Gaussian guarantee.

    ``lambda_q`` is half the smallest eigenvalue of B Bᵀ (the covariance
    form of the constrained sums is half that Gram matrix); ``theta`` is
    the smallest admissible column-norm bound, floored at 1 for the
    discrete models; ``alpha`` the smallest per-coordinate variance
    factor; ``rho`` the largest eigenvalue over the supplied solution-set
    forms.  ``hypotheses_met`` compares lambda_q against
    ``gamma_constant * eps^-2 * theta^2 * (d + ln 1/eps)^2 * ln(n/eps)``
    and is advisory: the guarantee's absolute constant is unknown, so it
    is exposed as the user parameter ``gamma_constant``.
    """
    if not 0.0 < epsilon <= 0.5:
        raise ValueError("epsilon must lie in (0, 1/2]")
    model = sol.model if model is None else EntropyModel(model)
    d, n = spec.num_constraints, spec.num_variables
    z = sol.z

    weights = variance_weights(z, model)
    gram = (spec.A * weights) @ spec.A.T
    lambda_q = 0.5 * sym_eig_range(gram).min_eigenvalue
    theta = _theta(spec, z, model)

    alpha: Optional[float] = None
    if model is EntropyModel.GEOMETRIC:
        alpha = float(np.min(z * (1.0 + z)))
    elif model is EntropyModel.BERNOULLI:
        alpha = float(np.min(z * (1.0 - z)))

    rho = None if yfam is None else yfam.rho()

    lambda_required = (gamma_constant * epsilon**-2 * theta**2
                       * (d + math.log(1.0 / epsilon)) ** 2
                       * math.log(n / epsilon))
    met = lambda_q >= lambda_required
    if model is not EntropyModel.EXPONENTIAL:
        met = met and alpha is not None and rho is not None

    delta: Optional[float] = None
    if rho is not None and alpha is not None:
        if model is EntropyModel.GEOMETRIC:
            delta = delta_bound_integer(alpha, theta, rho)
        elif model is EntropyModel.BERNOULLI:
            delta = delta_bound_binary(alpha, theta, rho)

    return ConditionReport(
        lambda_q=float(lambda_q),
        theta=float(theta),
        alpha=alpha,
        rho=rho,
        epsilon=float(epsilon),
        gamma_constant=float(gamma_constant),
        lambda_required=float(lambda_required),
        hypotheses_met=bool(met),
        delta_bound=delta,
    )


# -- Monte Carlo ----------------------------------------------------------------

_GOLDEN = np.uint64(0x9E3779B97F4A7C15)
_MIX1 = np.uint64(0xBF58476D1CE4E5B9)
_MIX2 = np.uint64(0x94D049BB133111EB)


def _mix64(x: np.ndarray) -> np.ndarray:
    with np.errstate(over="ignore"):  # modular arithmetic is the point
        x = (x ^ (x >> np.uint64(30))) * _MIX1
        x = (x ^ (x >> np.uint64(27))) * _MIX2
        return x ^ (x >> np.uint64(31))


def _uniform_block(seed: int, start: int, stop: int, n: int) -> np.ndarray:
    """Uniforms in [0, 1) indexed purely by (seed, sample, coordinate).

    A counter-based mix of the flat draw index makes the stream
    independent of block and shard boundaries, so results are
    bit-reproducible for any worker count.
    """
    with np.errstate(over="ignore"):
        base = _mix64(np.uint64(seed & 0xFFFFFFFFFFFFFFFF) + _GOLDEN)
    rows = np.arange(start, stop, dtype=np.uint64)[:, None] * np.uint64(n)
    idx = rows + np.arange(n, dtype=np.uint64)[None, :]
    bits = _mix64(base + (idx + np.uint64(1)) * _GOLDEN)
    return (bits >> np.uint64(11)).astype(np.float64) * (2.0 ** -53)


def _mc_shard(seed: int, start: int, stop: int, A_int: np.ndarray,
              b_int: np.ndarray, z: np.ndarray, model: EntropyModel) -> int:
    n = A_int.shape[1]
    log_q = np.log(z / (1.0 + z)) if model is EntropyModel.GEOMETRIC else None
    hits = 0
    for lo in range(start, stop, _MC_BLOCK):
        hi = min(lo + _MC_BLOCK, stop)
        u = _uniform_block(seed, lo, hi, n)
        if model is EntropyModel.GEOMETRIC:
            draws = np.floor(np.log1p(-u) / log_q).astype(np.int64)
        else:
            draws = (u < z).astype(np.int64)
        images = draws @ A_int.T
        hits += int(np.all(images == b_int, axis=1).sum())
    return hits


def monte_carlo_count(spec: PolytopeSpec, sol: MaxEntSolution, samples: int,
                      seed: int, shards: int = 1) -> MCEstimate:
    """Rejection-count the slice under the solved product distribution.

    Draws ``samples`` independent vectors with the solved means, counts
    exact integer hits of ``A x = b`` and scales the hit rate by
    ``exp(entropy)``.  Shards partition the sample index range and merge
    by summing hits, so a fixed seed gives identical results for every
    shard count.  ``std_err_log`` is the binomial standard error of the
    hit rate mapped to log scale.
    """
    if not spec.domain.is_discrete:
        raise DomainViolation("monte_carlo_count needs a discrete-domain spec")
    expected = EntropyModel.GEOMETRIC if spec.domain is DomainKind.INTEGER else EntropyModel.BERNOULLI
    if sol.model is not expected:
        raise DomainViolation("solution model %s does not match domain" % sol.model.value)
    if samples < 1:
        raise ValueError("samples must be >= 1")
    if shards < 1:
        raise ValueError("shards must be >= 1")
    A_int = spec.integer_A()
    b_int = spec.integer_b()

    bounds = [samples * k // shards for k in range(shards + 1)]
    ranges = [(bounds[k], bounds[k + 1]) for k in range(shards) if bounds[k] < bounds[k + 1]]
    if len(ranges) <= 1:
        hits = sum(_mc_shard(seed, lo, hi, A_int, b_int, sol.z, sol.model)
                   for lo, hi in ranges)
    else:
        with ThreadPoolExecutor(max_workers=min(len(ranges), 8)) as pool:
            futures = [pool.submit(_mc_shard, seed, lo, hi, A_int, b_int, sol.z, sol.model)
                       for lo, hi in ranges]
            hits = sum(f.result() for f in futures)

    if hits == 0:
        return MCEstimate(None, 0, samples, None, seed)
    rate = hits / samples
    log_value = sol.entropy + math.log(hits) - math.log(samples)
    std_err_log = math.sqrt((1.0 - rate) / hits)
    return MCEstimate(log_value, hits, samples, std_err_log, seed)
