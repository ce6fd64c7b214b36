"""Exception hierarchy shared by every mtzeta module."""


class MtzError(Exception):
    """Base class for all numerical/domain errors raised by mtzeta."""


class PoleError(MtzError):
    """Function evaluated exactly at (or indistinguishably close to) a pole."""


class DomainError(MtzError):
    """Argument outside the domain an operation supports."""


class OutsideRegionError(DomainError):
    """Point outside the absolute-convergence region of the double series."""


class ConvergenceError(MtzError):
    """A truncated series/tail estimate exceeded the requested tolerance."""


class SingularPointError(MtzError):
    """Evaluation requested within the pole-proximity radius of a closed-form
    correction term; the Laurent-expansion routines should be used instead."""


class QuadratureError(MtzError):
    """Numerical integration failed to converge to the requested tolerance."""


class EvaluationError(MtzError):
    """An internal evaluation hit a pole the case analysis should have excluded
    (signals a dispatch bug rather than a user error)."""


class IllConditionedError(MtzError):
    """The Laurent-fit linear system is too ill-conditioned to trust."""


class UnknownSuiteError(MtzError):
    """run_suite was asked for a suite name that is not in the catalog."""
