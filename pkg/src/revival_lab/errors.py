"""Exception hierarchy shared by all modules."""


class RevivalLabError(Exception):
    """Base class; ``code`` is the machine-readable name used by the CLI."""

    @property
    def code(self):
        return type(self).__name__


class IllPosed(RevivalLabError):
    pass


class DegenerateSpectrum(RevivalLabError):
    pass


class UndefinedAsymptote(RevivalLabError):
    pass


class DegenerateConstants(RevivalLabError):
    pass


class InconsistentRoot(RevivalLabError):
    pass


class QuadratureFailure(RevivalLabError):
    pass


class BadSpec(RevivalLabError, ValueError):
    pass


class OutOfDomain(RevivalLabError, ValueError):
    pass


class RootDerivativeTooSmall(RevivalLabError):
    pass


class NotRational(RevivalLabError, TypeError):
    pass


class GridMismatch(RevivalLabError, ValueError):
    pass


class InsufficientResolution(RevivalLabError, ValueError):
    pass
