"""Exception hierarchy shared by every module of the kit."""


class HadamardError(Exception):
    """Base class for all errors raised by hadamard_kit."""


class ChartDomainError(HadamardError):
    """A point or an integrated geodesic left the chart domain of a model."""


class IntegrationError(HadamardError):
    """Adaptive step control failed while integrating the geodesic equation."""


class ShootingError(HadamardError):
    """A boundary-value shoot did not converge.

    The attained residual is kept on the instance so callers can report it.
    """

    def __init__(self, message, residual=float("nan")):
        super().__init__(f"{message} (residual={residual:.3e})")
        self.residual = residual


class NotVisibleError(HadamardError):
    """No bi-infinite geodesic joins the requested pair of boundary points."""


class InadmissibleQuadrupleError(HadamardError):
    """A cross ratio was requested for a quadruple outside the admissible set."""


class WitnessError(HadamardError):
    """The witness pool holds no algebraically visible triple with the target point."""


class InconsistentInputError(HadamardError):
    """Inputs violate a comparison formula beyond the allowed round-off slack."""


class ConfigError(HadamardError):
    """A scenario configuration could not be parsed or validated."""


class PostCheckError(HadamardError):
    """A constructed object failed its defining post-condition."""
