"""Exception hierarchy shared by every module in the package.

All errors derive from :class:`EntropolyError` so callers (and the CLI)
can distinguish package failures from programming mistakes.  The classes
are grouped the way the CLI maps them to exit codes: input/validation
problems, solver failures, and oracle guards.
"""


class EntropolyError(Exception):
    """Base class for all package-specific errors."""


# -- input / validation -------------------------------------------------------

class DimensionMismatch(EntropolyError):
    """Array shapes are inconsistent with the documented contract."""


class NotPositiveDefinite(EntropolyError):
    """A Gram factorization hit a non-positive pivot (rank deficiency)."""


class NotSymmetric(EntropolyError):
    """A matrix expected to be symmetric is asymmetric beyond tolerance."""


class RankDeficient(EntropolyError):
    """A constraint matrix does not have full row rank."""


class DomainViolation(EntropolyError):
    """A primal point or problem domain is outside the model's domain."""


class DualDomainViolation(EntropolyError):
    """A dual vector maps outside the invertible region of the model."""


class MarginMismatch(EntropolyError):
    """Prescribed margins are inconsistent (sums differ or sizes wrong)."""


class InvalidProblemFile(EntropolyError):
    """A problem file does not follow the JSON schema."""


# -- solver --------------------------------------------------------------------

class NotConverged(EntropolyError):
    """The iteration cap was reached before the residual tolerance."""

    def __init__(self, iterations, residual, message=None):
        self.iterations = int(iterations)
        self.residual = float(residual)
        if message is None:
            message = ("no convergence after %d iterations "
                       "(residual %.3e)" % (self.iterations, self.residual))
        super().__init__(message)


class DualUnbounded(EntropolyError):
    """Dual descent is unbounded: empty interior or unbounded polyhedron."""


# -- oracle guards ---------------------------------------------------------------

class StateSpaceTooLarge(EntropolyError):
    """The dynamic program would need more states than the guard allows."""


class UnsupportedMatrix(EntropolyError):
    """The matrix violates an oracle's structural requirements."""


class QuasiPolynomial(EntropolyError):
    """Dilation counts are not polynomial (non-integral vertices)."""


class NotInInterior(EntropolyError):
    """The target vector is not in the interior of the convex hull."""


class DimensionTooLarge(EntropolyError):
    """The operation only supports a small number of constraints."""
