"""Exception hierarchy.

Each class carries the process exit code the CLI maps it to:
2 for validation problems, 3 for numeric non-convergence, 4 for
recognition failures.
"""


class ZhatError(Exception):
    exit_code = 1


class ValidationError(ZhatError, ValueError):
    exit_code = 2


class SingularLinkingMatrix(ValidationError):
    pass


class NotNegativeDefinite(ValidationError):
    pass


class InvalidGraph(ValidationError):
    pass


class NumericError(ZhatError, ArithmeticError):
    exit_code = 3


class DenominatorVanishes(NumericError):
    pass


class InsufficientSeries(NumericError):
    pass


class MissingLimitValue(NumericError):
    pass


class NonConvergence(NumericError):
    pass


class RecognitionError(ZhatError):
    exit_code = 4


class RecognitionFailed(RecognitionError):
    pass


class InconsistentChannel(RecognitionError):
    pass


class PairingNotFound(RecognitionError):
    pass
