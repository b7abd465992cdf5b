"""Exception hierarchy.

Validation problems (bad user input, violated preconditions) derive from
:class:`ValidationError`; the CLI maps them to exit code 2.  Everything that
signals a broken internal invariant derives from :class:`InternalError`
(exit code 1).
"""


class KSCoreError(Exception):
    """Base class for all errors raised by this package."""


class ValidationError(KSCoreError, ValueError):
    pass


class InternalError(KSCoreError, RuntimeError):
    pass


# degree_model
class NegativeProbability(ValidationError):
    pass


class SumNotOne(ValidationError):
    pass


class EmptySupport(ValidationError):
    pass


class DomainError(ValidationError):
    pass


class ParityUnfixable(ValidationError):
    pass


class BadParameter(ValidationError):
    pass


class DistSpecError(ValidationError):
    pass


# fixed_point
class DegenerateZeta(ValidationError):
    """zeta vanishes identically on [0, 1] (e.g. the 2-regular law)."""


class NoRootFound(InternalError):
    pass


class SimplexViolation(ValidationError):
    pass


class DegenerateWeights(ValidationError):
    pass


# graph_gen
class OddTotalDegree(ValidationError):
    pass


# warning_prop / gw_tree
class EmptyGraph(ValidationError):
    pass


class DepthTooShallow(ValidationError):
    pass


class TreeTooLarge(ValidationError):
    pass


# experiment harness
class AssumptionViolation(ValidationError):
    pass
