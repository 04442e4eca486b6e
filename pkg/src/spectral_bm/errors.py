"""Exception hierarchy.  Each class carries the error kind named in the API docs."""


class SpectralError(Exception):
    """Base class; ``stage`` optionally labels the pipeline stage that failed."""

    kind = "spectral-error"

    def __init__(self, message: str = "", stage: str | None = None):
        super().__init__(message)
        self.stage = stage

    def __str__(self) -> str:
        msg = super().__str__()
        if self.stage:
            return f"[{self.stage}] {msg}"
        return msg


class InvalidArgument(SpectralError, ValueError):
    kind = "invalid-argument"


class InvalidData(SpectralError, ValueError):
    kind = "invalid-data"


class OutOfRange(SpectralError, ValueError):
    kind = "out-of-range"


class OutOfDomain(SpectralError, ValueError):
    kind = "out-of-domain"


class SingularPoint(SpectralError, ZeroDivisionError):
    kind = "singular-point"


class IntegrationFailure(SpectralError, ArithmeticError):
    kind = "integration-failure"


class RootFailure(SpectralError, ArithmeticError):
    kind = "root-failure"


class DegenerateState(SpectralError, ArithmeticError):
    kind = "degenerate-state"


class ZeroCrossing(SpectralError, ArithmeticError):
    kind = "zero-crossing"


class InterlacingViolation(SpectralError, ValueError):
    kind = "interlacing-violation"


class InvalidDataset(SpectralError, ValueError):
    kind = "invalid-dataset"


class NotInClass(SpectralError, ValueError):
    kind = "not-in-class"


class RecoveryFailure(SpectralError, ArithmeticError):
    kind = "recovery-failure"


class AsymptoticsFailure(RecoveryFailure):
    kind = "asymptotics-failure"


class ConsistencyFailure(SpectralError, ArithmeticError):
    kind = "consistency-failure"


class InvalidModulus(SpectralError, ValueError):
    kind = "invalid-modulus"


class InvalidXi(SpectralError, ValueError):
    kind = "invalid-xi"


class ReductionFailure(SpectralError, ArithmeticError):
    kind = "reduction-failure"


class SolverFailure(SpectralError, ArithmeticError):
    kind = "solver-failure"
