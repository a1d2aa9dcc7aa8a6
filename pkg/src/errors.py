class SubcycleError(Exception):
    """Base class for errors raised by the cycle resolution pipeline"""


class ConfigError(SubcycleError, ValueError):
    pass


class IngestError(SubcycleError):
    pass


class CyclicGraphError(SubcycleError):
    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class SelfLoopError(SubcycleError, ValueError):
    pass


class NoCycleError(SubcycleError):
    pass


class MalformedCycleError(SubcycleError, ValueError):
    pass


class WcnfParseError(SubcycleError, ValueError):
    def __init__(self, message, line_number):
        super().__init__(f"line {line_number}: {message}")
        self.line_number = line_number


class InfeasibleSpecError(SubcycleError, ValueError):
    pass


class InstanceTooLargeError(SubcycleError, ValueError):
    pass


class UnsatisfiableInstanceError(SubcycleError):
    pass
