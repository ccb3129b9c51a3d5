"""Exact and semi-exact desk-scale references used to validate estimates.

Four independent routes:

* :func:`exact_count` -- dynamic program over residual right-hand sides
  with big-integer multiplicities; exact for both integer and 0-1 counts.
* :func:`exact_volume_ehrhart` -- dilation counting: the counts at
  t = 1..(n-d)+1 determine a degree-(n-d) polynomial whose leading
  coefficient, rescaled by the covolume sqrt(det A Aᵀ), is the Euclidean
  volume.  The fit is verified exactly at one extra dilation.
* :func:`finite_maxent` -- maximum-entropy distribution over an explicit
  finite point set with prescribed mean subspace; exponential-family
  fitting by the same damped dual Newton idea as the main solver.
* :func:`char_integral_count` -- for d <= 2, tensorized trapezoid
  quadrature of the characteristic-function inversion integral over
  [-pi, pi]^d; spectrally accurate because the integrand is periodic.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Sequence, Tuple

import numpy as np

from .errors import (
    DimensionTooLarge,
    DomainViolation,
    NotConverged,
    NotInInterior,
    QuasiPolynomial,
    StateSpaceTooLarge,
    UnsupportedMatrix,
)
from .linalg import hnf_lattice_index, integer_entries, logdet_gram
from .model import DomainKind, PolytopeSpec
from .solver import EntropyModel, MaxEntSolution

_STATE_GUARD = 10**8
_QUAD_NODES = 1 << 12


def _dp_columns(A: np.ndarray) -> list:
    return [tuple(int(x) for x in A[:, j]) for j in range(A.shape[1])]


def exact_count(spec: PolytopeSpec) -> int:
    """Exact number of lattice (or 0-1) points via residual-state folding.

    Variables are folded one at a time; a state is the residual
    right-hand side still to be met, keyed in a hash table with exact
    integer multiplicities.  Guarded by an upfront bound on the reachable
    state space (:class:`StateSpaceTooLarge` above 1e8 states).
    """
    if not spec.domain.is_discrete:
        raise DomainViolation("exact_count needs a discrete-domain spec")
    A = spec.integer_A()
    b = spec.integer_b()
    d, n = A.shape
    binary = spec.domain is DomainKind.BINARY

    if not binary:
        if np.any(A < 0):
            raise UnsupportedMatrix("integer counting needs a non-negative matrix")
        if np.any(np.abs(A).sum(axis=0) == 0):
            raise UnsupportedMatrix("integer counting needs non-zero columns")
        if np.any(b < 0):
            return 0
        estimate = 1
        for bi in b:
            estimate *= int(bi) + 1
            if estimate > _STATE_GUARD:
                raise StateSpaceTooLarge("about %e residual states" % float(estimate))
    else:
        estimate = 1
        for i in range(d):
            span = int(np.maximum(A[i], 0).sum() - np.minimum(A[i], 0).sum())
            estimate *= span + 1
            if estimate > _STATE_GUARD:
                raise StateSpaceTooLarge("about %e residual states" % float(estimate))

    cols = _dp_columns(A)
    if binary:
        # suffix extremes of the achievable remaining image, for pruning
        lo = [0] * d
        hi = [0] * d
        suf = [(tuple(lo), tuple(hi))]
        for j in range(n - 1, -1, -1):
            lo = [lo[i] + min(cols[j][i], 0) for i in range(d)]
            hi = [hi[i] + max(cols[j][i], 0) for i in range(d)]
            suf.append((tuple(lo), tuple(hi)))
        suf.reverse()
        suf_lo = [s[0] for s in suf]
        suf_hi = [s[1] for s in suf]

    states: Dict[Tuple[int, ...], int] = {tuple(int(x) for x in b): 1}
    for j in range(n):
        col = cols[j]
        new: Dict[Tuple[int, ...], int] = {}
        if binary:
            lo, hi = suf_lo[j + 1], suf_hi[j + 1]
            for r, cnt in states.items():
                if all(lo[i] <= r[i] <= hi[i] for i in range(d)):
                    new[r] = new.get(r, 0) + cnt
                r2 = tuple(r[i] - col[i] for i in range(d))
                if all(lo[i] <= r2[i] <= hi[i] for i in range(d)):
                    new[r2] = new.get(r2, 0) + cnt
        else:
            for r, cnt in states.items():
                r2 = r
                while True:
                    new[r2] = new.get(r2, 0) + cnt
                    r2 = tuple(r2[i] - col[i] for i in range(d))
                    if any(x < 0 for x in r2):
                        break
        if len(new) > _STATE_GUARD:
            raise StateSpaceTooLarge("state table exceeded the guard")
        states = new
    return states.get(tuple(0 for _ in range(d)), 0)


def exact_volume_ehrhart(spec: PolytopeSpec) -> float:
    """Euclidean volume of the slice via exact dilation counting.

    Counts c_t = exact_count(t * b) for t = 1..(n-d)+2 feed an exact
    finite-difference fit of the unique degree-(n-d) polynomial through
    the first n-d+1 of them; the prediction must match the last count
    exactly, else the vertices are non-integral and
    :class:`QuasiPolynomial` is raised.  The leading coefficient times
    sqrt(det A Aᵀ) (the covolume of the kernel lattice when the image
    lattice is all of Zᵈ) is the volume.
    """
    A = spec.integer_A()
    b = spec.integer_b()
    if hnf_lattice_index(A) != 1:
        raise UnsupportedMatrix("dilation counting requires image-lattice index 1")
    d, n = A.shape
    degree = n - d
    counts = []
    for t in range(1, degree + 3):
        dilated = PolytopeSpec(A.astype(float), (t * b).astype(float), DomainKind.INTEGER)
        counts.append(exact_count(dilated))

    diffs = [counts[: degree + 1]]
    for _ in range(degree):
        prev = diffs[-1]
        diffs.append([prev[i + 1] - prev[i] for i in range(len(prev) - 1)])
    lead = [row[0] for row in diffs]

    predicted = sum(math.comb(degree + 1, k) * lead[k] for k in range(degree + 1))
    if predicted != counts[degree + 1]:
        raise QuasiPolynomial(
            "dilation counts are not polynomial: predicted %d at t=%d, counted %d"
            % (predicted, degree + 2, counts[degree + 1])
        )
    leading = Fraction(lead[degree], math.factorial(degree))
    return float(leading) * math.exp(0.5 * logdet_gram(A.astype(float)))


@dataclass(frozen=True)
class FiniteMaxEntResult:
    """Maximum-entropy distribution over an explicit finite set."""

    masses: Dict[Tuple[int, ...], float]
    phi: float
    mean: np.ndarray


def finite_maxent(points: Sequence[Sequence[int]], A, b,
                  max_iter: int = 200) -> FiniteMaxEntResult:
    """Fit the maximum-entropy distribution on ``points`` with mean in {Ax=b}.

    The optimum is an exponential family in the constrained image
    ``A s``, fitted by damped Newton on the log-partition dual.  The
    resulting mass function is constant across points s with A s = b.
    Raises :class:`NotInInterior` when b is not strictly inside the
    convex hull of the images, :class:`NotConverged` at the cap.
    """
    S = integer_entries(np.asarray(points))
    if S.ndim != 2:
        raise DomainViolation("points must form an (N, n) array")
    N = S.shape[0]
    if N < 1 or N > 1 << 16:
        raise DomainViolation("need between 1 and 65536 points")
    keys = [tuple(int(v) for v in row) for row in S]
    if len(set(keys)) != N:
        raise DomainViolation("duplicate points")
    A = np.asarray(A, dtype=float)
    b = np.asarray(b, dtype=float)
    d = A.shape[0]
    images = S.astype(float) @ A.T

    lo = images.min(axis=0)
    hi = images.max(axis=0)
    margin = 1e-12 * (1.0 + np.abs(b))
    for i in range(d):
        if hi[i] - lo[i] <= margin[i]:
            if abs(b[i] - lo[i]) > margin[i]:
                raise NotInInterior("coordinate %d is constant at %g, need %g"
                                    % (i, lo[i], b[i]))
        elif b[i] <= lo[i] + margin[i] or b[i] >= hi[i] - margin[i]:
            raise NotInInterior("target %g outside the open range (%g, %g)"
                                % (b[i], lo[i], hi[i]))

    tol = 1e-10 * (1.0 + float(np.max(np.abs(b))))
    mu = np.zeros(d)

    def objective(m_vec: np.ndarray) -> float:
        e = images @ m_vec
        shift = e.max()
        return float(shift + np.log(np.exp(e - shift).sum()) - m_vec @ b)

    obj = objective(mu)
    for _ in range(max_iter):
        e = images @ mu
        w = np.exp(e - e.max())
        p = w / w.sum()
        grad = p @ images - b
        if float(np.max(np.abs(grad))) <= tol:
            phi = float(-(p * np.log(p)).sum())
            masses = {key: float(p[i]) for i, key in enumerate(keys)}
            return FiniteMaxEntResult(masses, phi, p @ S.astype(float))
        centered = images - p @ images
        hess = (centered * p[:, None]).T @ centered
        direction, *_ = np.linalg.lstsq(hess, -grad, rcond=None)
        slope = float(grad @ direction)
        if not np.isfinite(slope) or slope >= 0.0:
            raise NotConverged(max_iter, float(np.max(np.abs(grad))),
                               "no descent direction for the finite fit")
        step = 1.0
        for _ in range(61):
            trial = mu + step * direction
            obj_try = objective(trial)
            if obj_try <= obj + 1e-4 * step * slope:
                break
            step *= 0.5
        else:
            raise NotConverged(max_iter, float(np.max(np.abs(grad))),
                               "line search stalled in the finite fit")
        mu, obj = trial, obj_try
        if np.max(np.abs(mu)) > 1e12:
            raise NotInInterior("dual runaway: target on or outside the hull")
    e = images @ mu
    w = np.exp(e - e.max())
    p = w / w.sum()
    raise NotConverged(max_iter, float(np.max(np.abs(p @ images - b))))


def _char_factors(z: np.ndarray, model: EntropyModel):
    if model is EntropyModel.GEOMETRIC:
        p = 1.0 / (1.0 + z)
        q = z / (1.0 + z)

        def factor(j: int, phase: np.ndarray) -> np.ndarray:
            return p[j] / (1.0 - q[j] * phase)
    else:
        p = 1.0 - z
        q = z

        def factor(j: int, phase: np.ndarray) -> np.ndarray:
            return p[j] + q[j] * phase
    return factor


def char_integral_count(spec: PolytopeSpec, sol: MaxEntSolution) -> float:
    """Count estimate from quadrature of the inversion integral (d <= 2).

    The probability that the solved product distribution lands in the
    slice equals the average over [-pi, pi]^d of the image characteristic
    function times the conjugate phase of b; the count is that average
    scaled by exp(entropy).  A uniform 2^12-node grid per axis makes the
    rule exact up to aliasing, which decays geometrically.  The imaginary
    part of the average is asserted below 1e-8 as a self-check.
    """
    if not spec.domain.is_discrete:
        raise DomainViolation("char_integral_count needs a discrete-domain spec")
    d = spec.num_constraints
    if d > 2:
        raise DimensionTooLarge("quadrature oracle supports d <= 2, got d=%d" % d)
    A = spec.integer_A()
    b = spec.integer_b()
    n = spec.num_variables
    factor = _char_factors(sol.z, sol.model)
    M = _QUAD_NODES
    theta = -np.pi + 2.0 * np.pi * np.arange(M) / M
    E = np.exp(1j * theta)

    if d == 1:
        F = E ** int(-b[0])
        for j in range(n):
            F = F * factor(j, E ** int(A[0, j]))
        mean_re = float(F.real.mean())
        mean_im = float(F.imag.mean())
    else:
        # conjugate symmetry F(-t) = conj(F(t)) pairs row k with row M-k,
        # so rows 0..M/2 suffice: interior rows count twice via their real
        # part, and only the two self-paired rows contribute imaginary mass
        half = M // 2
        pow2 = {int(e): E ** int(e) for e in set(A[1]).union({-int(b[1])})}
        total_re = 0.0
        total_im = 0.0
        block = 128
        for lo in range(0, half + 1, block):
            hi = min(lo + block, half + 1)
            E1 = E[lo:hi]
            pow1 = {int(e): E1 ** int(e) for e in set(A[0]).union({-int(b[0])})}
            F = np.outer(pow1[-int(b[0])], pow2[-int(b[1])])
            for j in range(n):
                F *= factor(j, np.outer(pow1[int(A[0, j])], pow2[int(A[1, j])]))
            rows = F.sum(axis=1)
            k = np.arange(lo, hi)
            weight = np.where((k == 0) | (k == half), 1.0, 2.0)
            total_re += float(weight @ rows.real)
            total_im += float(rows.imag[(k == 0) | (k == half)].sum())
        mean_re = total_re / (M * M)
        mean_im = total_im / (M * M)

    if abs(mean_im) > 1e-8:
        raise ArithmeticError("quadrature self-check failed: imaginary part %.3e"
                              % mean_im)
    return math.exp(sol.entropy) * mean_re
