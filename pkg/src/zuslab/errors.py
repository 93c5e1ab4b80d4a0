"""Exception hierarchy.

Validation errors carry a ``report`` dict naming the failed invariant and
its magnitude, which the CLI prints verbatim.
"""


class ZusError(Exception):
    """Base class for all package errors."""

    kind = "ZusError"

    def __init__(self, message: str = "", **details):
        super().__init__(message or self.kind)
        self.details = details

    @property
    def report(self) -> dict:
        return {"error": self.kind, "message": str(self), **self.details}


class ValidationError(ZusError):
    kind = "ValidationError"


class DimensionMismatch(ValidationError):
    kind = "DimMismatch"


class NotHermitian(ValidationError):
    kind = "NotHermitian"

    def __init__(self, defect: float):
        super().__init__(f"matrix is not Hermitian (max |m - m^dag| = {defect:.3e})", defect=defect)


class NotPsd(ValidationError):
    kind = "NotPsd"

    def __init__(self, min_eigenvalue: float):
        super().__init__(f"matrix is not PSD (min eigenvalue {min_eigenvalue:.3e})", min_eigenvalue=min_eigenvalue)


class TraceNotOne(ValidationError):
    kind = "TraceNotOne"

    def __init__(self, value: float):
        super().__init__(f"trace is {value:.12g}, expected 1", value=value)


class NotProjection(ValidationError):
    kind = "NotProjection"


class NotOrthogonal(ValidationError):
    kind = "NotOrthogonal"


class NotComplete(ValidationError):
    kind = "NotComplete"


class NotPure(ZusError):
    kind = "NotPure"


class DegenerateSplit(ZusError):
    """A random probe had a spectral gap below the clustering threshold."""

    kind = "DegenerateSplit"


class NumericalRankAmbiguity(ZusError):
    kind = "NumericalRankAmbiguity"


class VerificationFailed(ZusError):
    kind = "VerificationFailed"


class NotProper(ZusError):
    kind = "NotProper"


class BadBlock(ZusError):
    kind = "BadBlock"


class InvalidSigma(ValidationError):
    kind = "InvalidSigma"


class NotAZus(ZusError):
    kind = "NotAZus"


class BlockStructureDefect(ZusError):
    kind = "BlockStructureDefect"


class NotPerfect(ZusError):
    kind = "NotPerfect"


class SchemaError(ValidationError):
    kind = "SchemaError"
