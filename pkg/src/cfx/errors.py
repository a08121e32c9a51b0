"""Exception hierarchy shared across the package.

Exit-code / HTTP-status mapping lives in ``cfx.interface``; everything the
library raises on purpose derives from :class:`CfxError`.
"""


class CfxError(Exception):
    """Base class for all errors raised by this package."""


class ModelValidationError(CfxError):
    """A model artifact violates a structural invariant."""


class InvalidModel(ModelValidationError):
    pass


class ConstantClassifier(ModelValidationError):
    """The classifier always outputs the same class; no decision polynomial exists."""


class UnknownFeature(ModelValidationError):
    """A predicate, instance or condition references an undeclared feature."""


class BadDistribution(ModelValidationError):
    """A probability table does not normalize or contains negative mass."""


class BadInstance(ModelValidationError):
    """An instance does not match the model's feature declarations."""


class EnumerationCapExceeded(CfxError):
    """An exhaustive enumeration would exceed the configured cap."""


class InvalidPolynomial(CfxError):
    """A polynomial violates a decision-polynomial invariant."""


class InconsistentAssignment(CfxError):
    """An indicator assignment is not realizable by any input point."""


class Infeasible(CfxError):
    """No assignment satisfies the constraint system."""


class EmptyPolynomialUnsatisfiable(Infeasible):
    """An empty polynomial can never be forced to evaluate to 1."""


class InfeasibleCondition(Infeasible):
    """User conditions are contradictory or exclude the target class."""


class MissingWeight(CfxError):
    """A weight vector does not cover every registry variable."""


class MissingColumn(CfxError):
    """The dataset lacks a column required for weight computation."""


class CapExceeded(CfxError):
    """A solver or enumeration budget (nodes, wall time) ran out."""


class VerificationCapExceeded(CapExceeded):
    """The prime-implicant verification sweep was too large to run."""


class TargetIsPrediction(CfxError):
    """An explicit counterfactual target equals the model's own prediction."""
