"""Exception types shared across the package."""


class CongfundError(Exception):
    """Base class for package errors."""


class ZeroIdeal(CongfundError):
    """Raised when an operation needs a nonzero ideal."""


class NotSquareFree(CongfundError):
    """Raised when d is not a squarefree positive integer."""


class FactorizationFailed(CongfundError):
    """Raised when an ideal cannot be written as a product of primes."""


class BudgetExceeded(CongfundError):
    """Raised when an enumeration exceeds its size budget.

    Carries a lower bound on the true answer where one is known.
    """

    def __init__(self, message, lower_bound=None):
        super().__init__(message)
        self.lower_bound = lower_bound


class DegenerateBisector(CongfundError):
    """Raised when a group element fixes the chosen base point."""


class IncompleteSample(CongfundError):
    """Raised when a sampled half-space family does not close up."""


class NotFiniteVolume(CongfundError):
    """Raised when a candidate polyhedron fails the finite-volume checks."""


class BadEdgeCycle(CongfundError):
    """Raised when an edge cycle of a candidate domain does not close."""


class InconsistentGluing(CongfundError):
    """Raised when a face gluing conflicts with an existing one."""


class NotBarycentric(CongfundError):
    """Raised when a triangulation lacks the subdivision structure
    required for coarsening."""


class NotOrientable(CongfundError):
    """Raised when no consistent orientation of a triangulation exists."""


class UnsupportedD(CongfundError):
    """Raised when no bundled data exists for the requested d."""


class IncompleteTable(CongfundError):
    """Raised when a coset table is used before it is complete."""


class MalformedShorthand(CongfundError):
    """Raised when certificate shorthand data is malformed."""


class Test1Failed(CongfundError):
    """Certificate check: group order mismatch."""


class Test2Failed(CongfundError):
    """Certificate check: filling elements do not normally generate."""


class Test3Failed(CongfundError):
    """Certificate check: cusp cosets not distinct or wrong in number."""


class OrderMismatch(CongfundError):
    """Raised when an enumerated group order differs from the expected one."""


class ValidationError(CongfundError):
    """Raised when peripheral lattice data fails validation."""


class UsageError(CongfundError):
    """Raised for malformed command line input."""
