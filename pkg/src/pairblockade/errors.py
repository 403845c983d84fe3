"""Exception hierarchy shared by the simulator modules."""


class SimulationError(Exception):
    """Base class for numerical failures that a sweep records per grid point."""


class InvalidDimensionError(ValueError):
    pass


class InvalidLabelError(ValueError):
    pass


class SingularParameterError(ValueError):
    """A parameter mapping would divide by a vanishing detuning."""


class NonHermitianError(ValueError):
    pass


class NonUniqueSteadyStateError(SimulationError):
    pass


class TruncationError(SimulationError):
    """The steady state is not positive semidefinite; the Fock cutoff is too small."""


class IntegrationError(SimulationError):
    pass


class UndefinedCorrelationError(SimulationError):
    """A correlation function was requested for an empty mode."""


class StaleStateError(SimulationError):
    """The density matrix handed to a two-time correlator is not stationary."""


class ResonantDegeneracyError(SimulationError):
    pass


class ConfigError(ValueError):
    pass
