"""Exception types raised by the library."""


class DomainError(ValueError):
    """An argument lies outside the domain of the function."""


class SingularityError(ArithmeticError):
    """Evaluation point coincides with a pole."""


class QuadratureError(RuntimeError):
    """Numerical integration did not reach the requested tolerance.

    Attributes
    ----------
    achieved : float
        Error estimate reported by the integrator.
    requested : float
        Tolerance that was asked for.
    """

    def __init__(self, message, achieved=float("nan"), requested=float("nan")):
        super().__init__(f"{message} (achieved {achieved:.3g}, requested {requested:.3g})")
        self.achieved = achieved
        self.requested = requested


class DegeneratePolesError(ArithmeticError):
    """Characteristic polynomial has (numerically) repeated roots."""


class UnstableError(ValueError):
    """Configuration has poles on or to the right of the imaginary axis."""


class StepSizeError(ValueError):
    """Time step too coarse to resolve the dynamics."""
