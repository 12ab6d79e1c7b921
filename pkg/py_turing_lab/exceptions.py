class CoreException(Exception):
    """This is the base class for all exceptions raised by the numerical core"""

    exit_code = 10

    def __init__(self, message, code=None, reason=None):
        super(CoreException, self).__init__(message)
        self.code = code if code is not None else self.exit_code
        self.reason = reason


class ConditionViolated(CoreException):
    """This exception is raised when the parameters admit no positive equilibrium."""

    exit_code = 4


class DomainError(CoreException):
    """This exception is raised when a logarithm is taken of a non-positive density."""

    exit_code = 5


class StepSizeError(CoreException):
    """This exception is raised when the kinetic integrator produces a non-finite state."""

    exit_code = 6


class BracketError(CoreException):
    """This exception is raised when a threshold bracket does not straddle the onset."""

    exit_code = 7


class BlowUpError(CoreException):
    """This exception is raised when a simulated field leaves the finite bounded range."""

    exit_code = 8

    def __init__(self, message, step=None, param_value=None, reason=None):
        super(BlowUpError, self).__init__(message, reason=reason)
        self.step = step
        self.param_value = param_value


class ConfigException(Exception):
    """This is the base class for all exceptions raised while reading a run configuration"""

    exit_code = 1

    def __init__(self, message, code=None, reason=None):
        super(ConfigException, self).__init__(message)
        self.code = code if code is not None else self.exit_code
        self.reason = reason


class ParseError(ConfigException):
    """This exception is raised when a configuration line cannot be read."""

    exit_code = 2

    def __init__(self, message, line=None, first_line=None, reason=None):
        super(ParseError, self).__init__(message, reason=reason)
        self.line = line
        self.first_line = first_line


class ValidationError(ConfigException):
    """This exception is raised when a value breaks a documented invariant."""

    exit_code = 3
