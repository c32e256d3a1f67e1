"""Exception hierarchy. Each class carries the CLI exit code it maps to."""


class TransducerError(Exception):
    exit_code = 1

    def __init__(self, message, location=None):
        self.location = location
        if location is not None:
            message = f"{location}: {message}"
        super().__init__(message)


class SpecParseError(TransducerError):
    exit_code = 2


class UnknownBuiltin(SpecParseError):
    pass


class BadParam(SpecParseError):
    pass


class ValidationError(TransducerError):
    exit_code = 3


class DuplicateTransition(ValidationError):
    pass


class Incomplete(ValidationError):
    pass


class UnknownState(ValidationError):
    pass


class AlphabetTooSmall(ValidationError):
    pass


class SymbolNotInAlphabet(ValidationError):
    pass


class PreconditionViolated(ValidationError):
    pass


class StructureError(TransducerError):
    exit_code = 4


class NotFinallyConnected(StructureError):
    pass


class NotFinallyAperiodic(StructureError):
    pass


class NotWeaklyConnected(StructureError):
    pass


class DegenerateCharacteristic(StructureError):
    pass


class BudgetExceeded(TransducerError):
    exit_code = 5


class CycleBudgetExceeded(BudgetExceeded):
    pass


class InternalMismatch(TransducerError):
    """Two independent computations disagree; always a bug."""


class IdentityViolated(InternalMismatch):
    pass
