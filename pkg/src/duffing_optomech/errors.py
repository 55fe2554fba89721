"""Exception types raised by the simulator."""


class SimulationError(Exception):
    """Base class for all errors raised by this package."""


class InvalidParameterError(SimulationError):
    """An input value violates a precondition (sign, finiteness, range)."""


class ConvergenceError(SimulationError):
    """An iterative solver did not reach its tolerance."""

    def __init__(self, message: str, residual: float | None = None):
        super().__init__(message)
        self.residual = residual


class OverdampedRegimeError(SimulationError):
    """No swap time exists: the coupling term under the square root is nonpositive."""


class QuadratureError(SimulationError):
    """The covariance noise integral did not converge within the node cap."""

    def __init__(self, message: str, achieved: float | None = None):
        super().__init__(message)
        self.achieved = achieved


class StiffnessError(SimulationError):
    """The ODE integrator failed (step-size underflow or solver breakdown)."""


class DegenerateCovarianceError(SimulationError):
    """A covariance-matrix sum is singular; fidelity is undefined."""


class NoOptimumError(SimulationError):
    """Bracketing root search found no sign change."""

    def __init__(self, message: str, f_lo: float | None = None, f_hi: float | None = None):
        super().__init__(message)
        self.f_lo = f_lo
        self.f_hi = f_hi


class ConfigError(SimulationError):
    """The run configuration is malformed (unknown key, bad value, bad grid)."""
