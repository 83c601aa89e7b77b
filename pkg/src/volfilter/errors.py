"""Exception hierarchy for volfilter.

Every error raised by the library derives from :class:`VolfilterError`, so
callers (and the CLI) can catch library failures in one place while the
specific subclasses keep failure modes distinguishable in tests.
"""


class VolfilterError(Exception):
    """Base class for all volfilter errors."""


class ValidationError(VolfilterError):
    """A parameter set violates a model invariant; names the offending field."""

    def __init__(self, field: str, message: str):
        self.field = field
        super().__init__(f"{field}: {message}")


class DomainError(VolfilterError):
    """State outside the admissible domain of a model coefficient."""


class KindError(VolfilterError):
    """Operation invoked with a model kind it does not support."""


class SimulationError(VolfilterError):
    """A simulated path left its admissible region beyond the tolerated rate."""


class InsufficientData(VolfilterError):
    """Input series too short for the requested estimator."""


class DimensionError(VolfilterError):
    """Mismatched grid / array shapes between coupled inputs."""


class IntegrationError(VolfilterError):
    """ODE integration failed (blow-up or loss of positive semidefiniteness)."""


class NotConvergedError(VolfilterError):
    """An iterative quantity failed its convergence test."""


class DegeneracyError(VolfilterError):
    """Particle weights collapsed (non-finite or all zero)."""


class RangeError(VolfilterError):
    """Evaluation point outside the valid time range."""


class ConvexityError(VolfilterError):
    """The one-dimensional dual objective failed its convexity check."""


class SingularPairingError(VolfilterError):
    """Dual-to-primal control conversion attempted with a zero pairing."""


class ConfigError(VolfilterError):
    """Malformed experiment configuration (unknown key, bad type, bad value)."""
