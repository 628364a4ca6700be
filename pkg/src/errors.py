"""Error types with machine-readable codes and CLI exit codes."""


class AplineError(Exception):
    """Base error. `code` is emitted in error JSON, `exit_code` by the CLI."""
    code = "Error"
    exit_code = 1

    def to_dict(self) -> dict:
        return {"error": self.code, "message": str(self)}


class UnknownSubcommand(AplineError):
    code = "UnknownSubcommand"
    exit_code = 64


class ArtifactWrite(AplineError):
    code = "ArtifactWrite"
    exit_code = 74


class InputParse(AplineError):
    code = "InputParse"
    exit_code = 65


class MalformedDocument(InputParse):
    code = "MalformedDocument"


class FrequencyOrder(InputParse):
    code = "FrequencyOrder"


class NegativeFrequency(InputParse):
    code = "NegativeFrequency"


class NegativeLinearPart(InputParse):
    code = "NegativeLinearPart"


class NumericPrecondition(AplineError, ValueError):
    code = "NumericPrecondition"
    exit_code = 2


class EmptyWindow(NumericPrecondition):
    code = "EmptyWindow"


class EmptyFamily(NumericPrecondition):
    code = "EmptyFamily"


class DistanceOutOfRange(NumericPrecondition):
    code = "DistanceOutOfRange"


class OmissionViolated(NumericPrecondition):
    code = "OmissionViolated"


class FrequencyTooShort(NumericPrecondition):
    code = "FrequencyTooShort"


class DivergentTail(NumericPrecondition):
    code = "DivergentTail"


class DegenerateFrequencies(NumericPrecondition):
    code = "DegenerateFrequencies"


class BallEscape(NumericPrecondition):
    code = "BallEscape"


class InconsistentSamples(NumericPrecondition):
    code = "InconsistentSamples"


class QuadratureBudgetExceeded(NumericPrecondition):
    code = "QuadratureBudgetExceeded"

    def __init__(self, message: str, discrepancy: float):
        super().__init__(message)
        self.discrepancy = discrepancy

    def to_dict(self) -> dict:
        data = super().to_dict()
        data["discrepancy"] = self.discrepancy
        return data
