"""Exception types raised by the engine."""


class KacMoodyError(Exception):
    """Base class for all errors raised by kacmoody."""


class InvalidType(KacMoodyError, ValueError):
    pass


class IndexOutOfRange(KacMoodyError, IndexError):
    pass


class NotIntegral(KacMoodyError, ValueError):
    pass


class NotDominant(KacMoodyError, ValueError):
    pass


class NotRegularDominant(NotDominant):
    pass


class FrontierTooShallow(KacMoodyError, ValueError):
    """Weyl-group enumeration too short for the requested truncation depth."""

    def __init__(self, message, required_len=None):
        super().__init__(message)
        self.required_len = required_len


class WeightOutOfRange(KacMoodyError, ValueError):
    pass


class DepthInsufficient(KacMoodyError, ValueError):
    """The coefficient module is not realized deep enough for a cochain space."""

    def __init__(self, message, required_depth=None):
        super().__init__(message)
        self.required_depth = required_depth
