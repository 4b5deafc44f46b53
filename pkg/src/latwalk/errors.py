"""Exception hierarchy shared by every module of the package."""


class LatwalkError(Exception):
    """Base class for all errors raised by latwalk."""


class WalkError(LatwalkError, ValueError):
    """A step distribution violates the standing assumptions."""


class MassError(WalkError):
    pass


class MeanError(WalkError):
    pass


class PeriodicError(WalkError):
    pass


class SublatticeError(WalkError):
    pass


class NegativeProbability(WalkError):
    pass


class DomainError(LatwalkError, ValueError):
    """Arguments outside the domain where a quantity is defined."""


class ResourceError(LatwalkError):
    """A requested table would exceed the configured size cap."""


class NumericalError(LatwalkError, ArithmeticError):
    """Roundoff beyond what is attributable to floating point noise."""


class QuadratureError(LatwalkError, ArithmeticError):
    pass


class ConfigError(LatwalkError, ValueError):
    pass


class ParseError(LatwalkError, ValueError):
    pass
