"""Problem description shared by the solver, estimators, oracles and CLI.

A problem is an affine slice ``A x = b`` of one of three ground sets: the
non-negative orthant (``volume``), the non-negative integer lattice
(``integer``), or the 0-1 cube (``binary``).  An optional linear tilt
turns plain volumes/counts into exponential integrals/sums.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from enum import Enum
from typing import Optional

import numpy as np

from .errors import (
    DimensionMismatch,
    EntropolyError,
    InvalidProblemFile,
    RankDeficient,
    UnsupportedMatrix,
)
from .linalg import hnf_lattice_index, integer_entries, logdet_gram


class DomainKind(str, Enum):
    """Ground set the affine slice is intersected with."""

    VOLUME = "volume"    # continuous points of the non-negative orthant
    INTEGER = "integer"  # non-negative integer vectors
    BINARY = "binary"    # 0-1 vectors

    @property
    def is_discrete(self) -> bool:
        return self is not DomainKind.VOLUME


@dataclass(frozen=True)
class PolytopeSpec:
    """Constraint system ``A x = b`` over a chosen domain.

    A is d x n with d < n; for the discrete domains A and b must hold
    exact integers.  ``tilt``, when present, is the coefficient vector of
    a linear functional added to the entropy objective, which turns the
    estimated quantity into an exponentially weighted sum or integral.
    """

    A: np.ndarray
    b: np.ndarray
    domain: DomainKind
    tilt: Optional[np.ndarray] = None
    name: Optional[str] = None

    def __post_init__(self):
        A = np.asarray(self.A, dtype=float)
        b = np.asarray(self.b, dtype=float)
        if A.ndim != 2:
            raise DimensionMismatch("A must be 2-D")
        d, n = A.shape
        if d >= n:
            raise DimensionMismatch("need d < n, got %dx%d" % (d, n))
        if b.shape != (d,):
            raise DimensionMismatch("b must have length %d, got %s" % (d, b.shape))
        if not (np.all(np.isfinite(A)) and np.all(np.isfinite(b))):
            raise DimensionMismatch("A and b must be finite")
        domain = DomainKind(self.domain)
        if domain.is_discrete:
            integer_entries(A)
            integer_entries(b)
        tilt = self.tilt
        if tilt is not None:
            tilt = np.asarray(tilt, dtype=float)
            if tilt.shape != (n,):
                raise DimensionMismatch("tilt must have length %d" % n)
            if not np.all(np.isfinite(tilt)):
                raise DimensionMismatch("tilt must be finite")
        object.__setattr__(self, "A", A)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "domain", domain)
        object.__setattr__(self, "tilt", tilt)

    @property
    def num_constraints(self) -> int:
        return self.A.shape[0]

    @property
    def num_variables(self) -> int:
        return self.A.shape[1]

    def integer_A(self) -> np.ndarray:
        return integer_entries(self.A)

    def integer_b(self) -> np.ndarray:
        return integer_entries(self.b)

    def with_domain(self, domain: DomainKind) -> "PolytopeSpec":
        return PolytopeSpec(self.A, self.b, domain, self.tilt, self.name)


@dataclass(frozen=True)
class InteriorHint:
    """Outcome of the heuristic interior check.

    ``kind`` is one of ``"unknown"``, ``"found"`` (with the probe point)
    or ``"empty"`` (a sign certificate proves the polyhedron is empty).
    """

    kind: str
    point: Optional[np.ndarray] = None


@dataclass(frozen=True)
class ValidationReport:
    rank_ok: bool
    lattice_index: Optional[int]
    interior_hint: InteriorHint


def _empty_certificate(spec: PolytopeSpec) -> bool:
    """Cheap per-row certificates that the polyhedron has no point at all."""
    A, b = spec.A, spec.b
    for i in range(A.shape[0]):
        row = A[i]
        if spec.domain is DomainKind.BINARY:
            lo = np.minimum(row, 0.0).sum()
            hi = np.maximum(row, 0.0).sum()
            if b[i] < lo - 1e-12 or b[i] > hi + 1e-12:
                return True
        else:
            if np.all(row >= 0.0) and b[i] < -1e-12:
                return True
            if np.all(row <= 0.0) and b[i] > 1e-12:
                return True
            if np.all(row == 0.0) and b[i] != 0.0:
                return True
    return False


def validate_spec(spec: PolytopeSpec) -> ValidationReport:
    """Pre-flight checks: rank, image-lattice index and an interior probe.

    The rank is certified by the Gram factorization, the lattice index by
    the Hermite normal form, and the interior hint is heuristic: a
    converged entropy solve yields a strictly interior point, per-row
    sign certificates prove emptiness, and anything else is unknown.
    """
    try:
        logdet_gram(spec.A)
        rank_ok = True
    except EntropolyError:
        rank_ok = False

    lattice_index: Optional[int] = None
    if spec.domain.is_discrete:
        try:
            lattice_index = hnf_lattice_index(spec.A)
        except RankDeficient:
            lattice_index = None

    if _empty_certificate(spec):
        hint = InteriorHint("empty")
    else:
        from .solver import model_for_domain, solve_max_entropy

        try:
            sol = solve_max_entropy(spec, model_for_domain(spec.domain))
            hint = InteriorHint("found", sol.z)
        except EntropolyError:
            hint = InteriorHint("unknown")
    return ValidationReport(rank_ok, lattice_index, hint)


# -- problem file format --------------------------------------------------------

_DOMAIN_NAMES = {kind.value: kind for kind in DomainKind}


def load_problem(source) -> PolytopeSpec:
    """Parse a problem from a JSON text or an already-decoded dict.

    Schema: ``{"name": optional str, "A": [[num, ...], ...], "b": [num, ...],
    "domain": "volume"|"integer"|"binary", "tilt": optional [num, ...]}``.
    Numbers in A and b must be exact integers unless the domain is volume.
    """
    if isinstance(source, (str, bytes)):
        try:
            data = json.loads(source)
        except json.JSONDecodeError as exc:
            raise InvalidProblemFile("not valid JSON: %s" % exc) from None
    else:
        data = source
    if not isinstance(data, dict):
        raise InvalidProblemFile("problem file must hold a JSON object")
    unknown = set(data) - {"name", "A", "b", "domain", "tilt"}
    if unknown:
        raise InvalidProblemFile("unknown keys: %s" % sorted(unknown))
    for key in ("A", "b", "domain"):
        if key not in data:
            raise InvalidProblemFile("missing required key %r" % key)
    domain = data["domain"]
    if domain not in _DOMAIN_NAMES:
        raise InvalidProblemFile("domain must be one of %s" % sorted(_DOMAIN_NAMES))
    try:
        spec = PolytopeSpec(
            A=np.asarray(data["A"], dtype=float),
            b=np.asarray(data["b"], dtype=float),
            domain=_DOMAIN_NAMES[domain],
            tilt=None if data.get("tilt") is None else np.asarray(data["tilt"], dtype=float),
            name=data.get("name"),
        )
    except (ValueError, UnsupportedMatrix, DimensionMismatch) as exc:
        raise InvalidProblemFile(str(exc)) from None
    return spec


def problem_to_dict(spec: PolytopeSpec) -> dict:
    """Inverse of :func:`load_problem`; integers stay integers for discrete domains."""
    if spec.domain.is_discrete:
        A = [[int(x) for x in row] for row in spec.integer_A()]
        b = [int(x) for x in spec.integer_b()]
    else:
        A = [[float(x) for x in row] for row in spec.A]
        b = [float(x) for x in spec.b]
    out: dict = {}
    if spec.name is not None:
        out["name"] = spec.name
    out["A"] = A
    out["b"] = b
    out["domain"] = spec.domain.value
    if spec.tilt is not None:
        out["tilt"] = [float(x) for x in spec.tilt]
    return out
