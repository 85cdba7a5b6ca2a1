"""Exception types shared across the package."""


class RegionAuditError(Exception):
    """Base class for errors raised by this package."""


class InvalidInputError(RegionAuditError, ValueError):
    """An argument violates a documented precondition."""


class TrainingDivergedError(RegionAuditError, RuntimeError):
    """Training produced a non-finite loss and cannot continue."""
