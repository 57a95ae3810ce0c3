"""Exception hierarchy.

Every error carries a machine-readable ``code`` so CLI callers and tests can
dispatch without parsing messages.
"""

from __future__ import annotations


class LexknapError(Exception):
    """Base class for all package errors."""

    code = "error"


class ValidationFailure(LexknapError):
    """An instance failed the validation pipeline."""

    code = "validation"


class LengthMismatch(ValidationFailure):
    code = "length_mismatch"


class NonpositiveEntry(ValidationFailure):
    code = "nonpositive_entry"


class ZeroWeight(ValidationFailure):
    code = "zero_weight"


class NotSuperincreasing(ValidationFailure):
    """Carries the smallest violating prefix index (1-based)."""

    code = "not_superincreasing"

    def __init__(self, index: int):
        self.index = index
        super().__init__(f"prefix condition fails at i={index}")


class NotStartingAtOne(ValidationFailure):
    code = "not_starting_at_one"


class NotDivisorChain(ValidationFailure):
    code = "not_divisor_chain"


class InfeasibleBound(ValidationFailure):
    """Bound tightening forced one or more variables to zero.

    ``fixed_indices`` lists the affected coordinates (1-based); callers that
    can live with fixed variables catch this and handle the reduction
    explicitly instead of having it happen silently.
    """

    code = "infeasible_bound"

    def __init__(self, fixed_indices: tuple[int, ...]):
        self.fixed_indices = tuple(fixed_indices)
        idx = ", ".join(str(i) for i in self.fixed_indices)
        super().__init__(f"capacity forces variables to zero at i in ({idx})")


class OutOfBox(LexknapError):
    code = "out_of_box"


class Infeasible(LexknapError):
    """A demand or shift cannot be met inside the box."""

    code = "infeasible"


class InfeasibleShift(Infeasible):
    code = "infeasible_shift"


class EmptyIntersection(Infeasible):
    code = "empty_intersection"


class NotSupportIndex(LexknapError):
    code = "not_support_index"


class IndexNotInSupportTail(LexknapError):
    code = "index_not_in_support_tail"


class DifferentBoxes(LexknapError):
    code = "different_boxes"


class ZeroCoefficientRegime(LexknapError):
    """Two-sided pair with zero weights on some coordinates.

    Only a relaxation (intersection of the one-sided hulls) is available;
    ``relaxation_available`` says so explicitly.
    """

    code = "zero_coefficient_regime"

    def __init__(self, message: str = "zero weights present; only the hull intersection relaxation is available"):
        self.relaxation_available = True
        super().__init__(message)


class WrongCase(LexknapError):
    code = "wrong_case"


class NotInHull(LexknapError):
    code = "not_in_hull"


class EmptyCloud(LexknapError):
    code = "empty_cloud"


class TooLarge(LexknapError):
    """An enumeration guard tripped."""

    code = "too_large"


class DimensionTooLarge(TooLarge):
    code = "dimension_too_large"


class UnboundedDetected(LexknapError):
    code = "unbounded"


class CertificateFailed(LexknapError):
    """A polyhedral certificate did not verify (surfaced loudly)."""

    code = "certificate_failed"


class LiftCheckFailed(CertificateFailed):
    code = "lift_check_failed"


class BetaLexUnverified(CertificateFailed):
    """The experimental beta-lex system failed its mandatory oracle gate."""

    code = "beta_lex_unverified"
