"""Exception and warning types."""


class TelesepError(Exception):
    """Base class for all errors raised by telesep."""


class InvariantViolation(TelesepError, ValueError):
    """An input breaks a structural invariant (norm, simplex, unitarity...)."""


class BlochNormExceeded(InvariantViolation):
    pass


class NotHermitian(InvariantViolation):
    pass


class NotADensityMatrix(InvariantViolation):
    pass


class NotUnitary(InvariantViolation):
    pass


class NotAProjectorSet(InvariantViolation):
    pass


class LambdaOutOfRange(InvariantViolation):
    pass


class InvalidBellMixture(InvariantViolation):
    pass


class NotCompletelyPositive(InvariantViolation):
    """A Pauli-diagonal map whose Bell-mixture weights leave [0, 1]."""


class WrongDimension(TelesepError, ValueError):
    pass


class DimensionOverflow(WrongDimension):
    pass


class BadSubsystemIndex(TelesepError, IndexError):
    pass


class PremiseViolation(TelesepError, ValueError):
    """A scenario's precondition on the input marginal does not hold."""


class NotCommutingPremise(PremiseViolation):
    pass


class NoFeasiblePoint(TelesepError, RuntimeError):
    pass


class PhysicalityWarning(UserWarning):
    """A map that is not completely positive was applied anyway."""
