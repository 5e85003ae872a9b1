"""Exception hierarchy for dlvlab.

Every error raised on purpose by this package derives from DlvLabError so
callers (and the CLI) can distinguish "the math said no" from a genuine bug.
"""


class DlvLabError(Exception):
    """Base class for all dlvlab errors."""


class ParameterError(DlvLabError, ValueError):
    """Constructor arguments violate a side condition (excluded parameter
    values, malformed constants, inconsistent diffusivities)."""


class SchemaError(DlvLabError, ValueError):
    """A JSON description does not match the expected schema."""


class DomainError(DlvLabError, ValueError):
    """A point lies outside the validity region of a stream/solution."""


class PoleError(DomainError):
    """Evaluation requested too close to a pole of an elliptic/rational
    profile."""


class PrecisionError(DlvLabError, ArithmeticError):
    """A numerical routine could not reach its accuracy target (series did
    not converge, duplication hit a half-period, step-halving exhausted)."""


class IntegrationError(DlvLabError, ArithmeticError):
    """ODE integration failed to converge to tolerance."""


class SamplingError(DlvLabError, RuntimeError):
    """Rejection sampling exhausted its budget without collecting enough
    valid points."""


class SolverError(DlvLabError, RuntimeError):
    """Grid solver misuse or blow-up (unstable step size, non-finite
    state)."""
