"""Exception types shared across the package."""


class InvalidInstanceError(ValueError):
    """Raised when an instance description is malformed or inconsistent."""


class DominationError(ValueError):
    """Raised when a matching comparison is requested between incomparable matchings."""


class ResourceLimitError(RuntimeError):
    """Raised when an exhaustive search would exceed its configured budget.

    The offending size estimate is kept on the exception so callers can
    report how far over budget the request was.
    """

    def __init__(self, message, bound=None):
        super().__init__(message)
        self.bound = bound
