"""Exception types raised across the package."""


class OscintError(Exception):
    pass


class SingularMatrix(OscintError, ValueError):
    pass


class InvalidProfile(OscintError, ValueError):
    pass


class BudgetExceeded(OscintError, RuntimeError):
    pass


class EmptyDomain(OscintError, ValueError):
    pass


class UnsupportedSupport(OscintError, ValueError):
    pass


class GridMismatch(OscintError, ValueError):
    pass


class CapsTooClose(OscintError, ValueError):
    pass


class NonPositiveValue(OscintError, ValueError):
    pass
