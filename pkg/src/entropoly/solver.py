"""Maximum-entropy programs over affine slices, solved on the dual side.

Each domain carries a separable strictly concave entropy: the exponential
entropy ``n + sum ln x_j`` for volumes, the geometric entropy
``sum ((x_j+1) ln(x_j+1) - x_j ln x_j)`` for non-negative integer counts,
and the Bernoulli entropy ``sum (x_j ln(1/x_j) + (1-x_j) ln(1/(1-x_j)))``
for 0-1 counts.  The maximizer z over ``{A x = b}`` is the vector of means
of a product distribution whose mass (or density) is constant on the
slice, which is what every estimate downstream is built on.

We never touch the n-dimensional primal: the stationarity conditions
invert coordinatewise in closed form, so a damped Newton iteration on the
d-dimensional dual suffices.  The Newton matrix is ``A diag(v) Aᵀ`` with
v the per-coordinate model variances -- exactly the weighted Gram matrix
the Gaussian estimator needs again later.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Optional

import numpy as np

from .errors import (
    DomainViolation,
    DualDomainViolation,
    DualUnbounded,
    NotConverged,
    RankDeficient,
)
from .model import DomainKind, PolytopeSpec

_MAX_ITER = 200
_MAX_HALVINGS = 60
_ARMIJO = 1e-4


class EntropyModel(str, Enum):
    EXPONENTIAL = "exponential"  # continuous, density constant on the slice
    GEOMETRIC = "geometric"      # non-negative integer counts
    BERNOULLI = "bernoulli"      # 0-1 counts


_MODEL_FOR_DOMAIN = {
    DomainKind.VOLUME: EntropyModel.EXPONENTIAL,
    DomainKind.INTEGER: EntropyModel.GEOMETRIC,
    DomainKind.BINARY: EntropyModel.BERNOULLI,
}


def model_for_domain(domain: DomainKind) -> EntropyModel:
    return _MODEL_FOR_DOMAIN[DomainKind(domain)]


def _check_pairing(spec: PolytopeSpec, model: EntropyModel) -> None:
    # exponential solves are also allowed on integer data (volume of the
    # same system); the other two models must match their domain exactly
    if model is EntropyModel.EXPONENTIAL:
        if spec.domain is DomainKind.BINARY:
            raise DomainViolation("exponential model is not defined on the 0-1 cube")
    elif model is not _MODEL_FOR_DOMAIN[spec.domain]:
        raise DomainViolation(
            "model %s does not match domain %s" % (model.value, spec.domain.value)
        )


@dataclass(frozen=True)
class MaxEntSolution:
    """Primal maximizer, constraint multipliers and diagnostics."""

    z: np.ndarray
    dual: np.ndarray
    entropy: float
    residual: float
    iterations: int
    model: EntropyModel


def _requires_positive_dual(model: EntropyModel) -> bool:
    return model is not EntropyModel.BERNOULLI


def _primal_from_dual(c: np.ndarray, model: EntropyModel) -> np.ndarray:
    if model is EntropyModel.EXPONENTIAL:
        return 1.0 / c
    if model is EntropyModel.GEOMETRIC:
        return 1.0 / np.expm1(c)
    return 0.5 * (1.0 - np.tanh(0.5 * c))


def _dual_objective(lam: np.ndarray, c: np.ndarray, b: np.ndarray,
                    model: EntropyModel) -> float:
    """Value of the convex dual; +inf outside its domain."""
    if _requires_positive_dual(model) and np.any(c <= 0.0):
        return np.inf
    if model is EntropyModel.EXPONENTIAL:
        terms = -np.log(c)
    elif model is EntropyModel.GEOMETRIC:
        terms = -np.log(-np.expm1(-c))
    else:
        terms = np.logaddexp(0.0, -c)
    return float(lam @ b + terms.sum())


def dual_to_primal(lam, spec: PolytopeSpec, model: EntropyModel) -> np.ndarray:
    """Closed-form inversion of the stationarity conditions.

    With ``c_j = (Aᵀ lam)_j - tilt_j`` the maximizing point has
    ``z_j = 1/c_j`` (exponential), ``1/(e^{c_j}-1)`` (geometric) or
    ``1/(1+e^{c_j})`` (Bernoulli).  The first two require ``c_j > 0``;
    a violation raises :class:`DualDomainViolation`.
    """
    lam = np.asarray(lam, dtype=float)
    if lam.shape != (spec.num_constraints,):
        raise DualDomainViolation("dual vector must have length %d" % spec.num_constraints)
    c = spec.A.T @ lam
    if spec.tilt is not None:
        c = c - spec.tilt
    model = EntropyModel(model)
    if _requires_positive_dual(model) and np.any(c <= 0.0):
        raise DualDomainViolation("dual image must be strictly positive for %s" % model.value)
    return _primal_from_dual(c, model)


def entropy_gradient(z, model: EntropyModel) -> np.ndarray:
    """Coordinatewise derivative of the model entropy (tilt excluded)."""
    z = np.asarray(z, dtype=float)
    model = EntropyModel(model)
    if model is EntropyModel.EXPONENTIAL:
        return 1.0 / z
    if model is EntropyModel.GEOMETRIC:
        return np.log1p(1.0 / z)
    return np.log((1.0 - z) / z)


def variance_weights(z, model: EntropyModel) -> np.ndarray:
    """Per-coordinate variance of the product distribution with means z."""
    z = np.asarray(z, dtype=float)
    model = EntropyModel(model)
    if model is EntropyModel.EXPONENTIAL:
        return z * z
    if model is EntropyModel.GEOMETRIC:
        return z + z * z
    return z - z * z


def entropy_value(z, spec: PolytopeSpec, model: EntropyModel) -> float:
    """Model entropy at z, plus the tilt term when the spec carries one."""
    z = np.asarray(z, dtype=float)
    model = EntropyModel(model)
    if z.shape != (spec.num_variables,):
        raise DomainViolation("point must have length %d" % spec.num_variables)
    if not np.all(np.isfinite(z)) or np.any(z <= 0.0):
        raise DomainViolation("point must be strictly positive")
    if model is EntropyModel.BERNOULLI and np.any(z >= 1.0):
        raise DomainViolation("Bernoulli point must be strictly below 1")
    if model is EntropyModel.EXPONENTIAL:
        value = z.size + np.log(z).sum()
    elif model is EntropyModel.GEOMETRIC:
        value = (z * np.log1p(1.0 / z) + np.log1p(z)).sum()
    else:
        value = (-z * np.log(z) - (1.0 - z) * np.log1p(-z)).sum()
    if spec.tilt is not None:
        value += float(spec.tilt @ z)
    return float(value)


def _initial_dual(spec: PolytopeSpec, model: EntropyModel) -> np.ndarray:
    A, b = spec.A, spec.b
    tilt = spec.tilt if spec.tilt is not None else 0.0
    if model is EntropyModel.BERNOULLI:
        c0 = np.zeros(spec.num_variables)
    else:
        scale = np.abs(A).sum()
        z0 = max(np.abs(b).sum() / scale if scale > 0 else 0.0, 1e-3)
        c0 = np.full(spec.num_variables,
                     1.0 / z0 if model is EntropyModel.EXPONENTIAL else np.log1p(1.0 / z0))
    lam, *_ = np.linalg.lstsq(A.T, c0 + tilt, rcond=None)
    if not _requires_positive_dual(model):
        return lam
    c = A.T @ lam - tilt
    if np.min(c) > 0.0:
        return lam
    # shift along a direction whose dual image is (approximately) all-ones
    u, *_ = np.linalg.lstsq(A.T, np.ones(spec.num_variables), rcond=None)
    au = A.T @ u
    if np.min(au) <= 1e-9 * max(1.0, np.max(np.abs(au))):
        raise DualUnbounded(
            "no strictly feasible dual start: empty interior or unbounded polyhedron"
        )
    step = (1.0 - np.min(c)) / np.min(au)
    lam = lam + step * u
    if np.min(A.T @ lam - tilt) <= 0.0:
        raise DualUnbounded("could not construct a feasible dual start")
    return lam


def solve_max_entropy(spec: PolytopeSpec, model: Optional[EntropyModel] = None,
                      dual_trace: Optional[list] = None) -> MaxEntSolution:
    """Maximize the model entropy (plus tilt) over the affine slice.

    Damped Newton on the dual: full step first, then backtracking halving
    (at most 60) that enforces dual-domain feasibility and an Armijo
    decrease with parameter 1e-4.  Convergence is declared when
    ``||A z - b||_inf <= 1e-10 (1 + ||b||_inf)``.  ``dual_trace``, when
    given, collects the dual objective after each accepted step.

    Raises :class:`NotConverged` at the iteration cap,
    :class:`DualUnbounded` when descent runs away (empty interior or
    unbounded polyhedron) and :class:`RankDeficient` when the Newton
    system is singular.
    """
    model = model_for_domain(spec.domain) if model is None else EntropyModel(model)
    _check_pairing(spec, model)
    A, b = spec.A, spec.b
    tilt = spec.tilt if spec.tilt is not None else np.zeros(spec.num_variables)

    lam = _initial_dual(spec, model)
    lam_scale = max(1.0, float(np.max(np.abs(lam))))
    tol = 1e-10 * (1.0 + float(np.max(np.abs(b))))
    c = A.T @ lam - tilt
    objective = _dual_objective(lam, c, b, model)
    objective_0 = objective
    residual = np.inf

    for iteration in range(_MAX_ITER + 1):
        z = _primal_from_dual(c, model)
        r = A @ z - b
        residual = float(np.max(np.abs(r)))
        if residual <= tol:
            if np.any(z <= 0.0) or (model is EntropyModel.BERNOULLI and np.any(z >= 1.0)):
                raise DualUnbounded("maximizer degenerated to the domain boundary")
            return MaxEntSolution(
                z=z,
                dual=lam.copy(),
                entropy=entropy_value(z, spec, model),
                residual=residual,
                iterations=iteration,
                model=model,
            )
        if iteration == _MAX_ITER:
            break
        weights = variance_weights(z, model)
        hess = (A * weights) @ A.T
        try:
            direction = np.linalg.solve(hess, r)
        except np.linalg.LinAlgError:
            raise RankDeficient("Newton system singular: A lacks full row rank") from None
        slope = float(-r @ direction)  # gradient of the dual along the step
        if not np.isfinite(slope) or slope >= 0.0:
            raise NotConverged(iteration, residual, "no descent direction available")

        step = 1.0
        accepted = False
        for _ in range(_MAX_HALVINGS + 1):
            lam_try = lam + step * direction
            c_try = A.T @ lam_try - tilt
            obj_try = _dual_objective(lam_try, c_try, b, model)
            if obj_try <= objective + _ARMIJO * step * slope:
                accepted = True
                break
            step *= 0.5
        if not accepted:
            raise NotConverged(iteration, residual, "line search stalled")
        lam, c, objective = lam_try, c_try, obj_try
        if dual_trace is not None:
            dual_trace.append(objective)
        if (np.max(np.abs(lam)) > 1e14 * lam_scale
                or objective < objective_0 - 1e14 * max(1.0, abs(objective_0))):
            raise DualUnbounded(
                "dual descent diverges: empty interior or unbounded polyhedron"
            )
    raise NotConverged(_MAX_ITER, residual)
