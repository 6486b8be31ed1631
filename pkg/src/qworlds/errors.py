"""Exception hierarchy shared by every module."""


class QWorldsError(Exception):
    """Base class for library errors."""


class ResourceCapError(QWorldsError):
    """Requested register exceeds the dense-simulation qubit cap."""


class DimensionError(QWorldsError, ValueError):
    """Operands have incompatible qubit counts, indices or layouts."""


class NotUnitaryError(QWorldsError, ValueError):
    pass


class TruthTableError(QWorldsError, ValueError):
    """Malformed truth-table text."""


class PromiseViolation(QWorldsError, ValueError):
    """Function is neither constant nor balanced."""
