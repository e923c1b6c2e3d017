"""Exception hierarchy.

Every validation failure derives from :class:`ValidationError` (itself a
``ValueError``) so callers can catch input problems with a single clause.
"""


class ValidationError(ValueError):
    """An input violates a documented invariant."""

    kind = "ValidationError"

    def to_dict(self):
        return {"error": self.kind, "message": str(self)}


class NotSquare(ValidationError):
    kind = "NotSquare"


class NonFinite(ValidationError):
    kind = "NonFinite"


class NotHermitian(ValidationError):
    kind = "NotHermitian"

    def __init__(self, deviation):
        self.deviation = float(deviation)
        super().__init__(f"matrix is not Hermitian (||M - M^H||_F = {self.deviation:.3e})")


class NotPSD(ValidationError):
    kind = "NotPSD"

    def __init__(self, min_eigenvalue):
        self.min_eigenvalue = float(min_eigenvalue)
        super().__init__(f"matrix is not positive semidefinite (min eigenvalue {self.min_eigenvalue:.3e})")

    def to_dict(self):
        return {**super().to_dict(), "min_eigenvalue": self.min_eigenvalue}


class TraceNotOne(ValidationError):
    kind = "TraceNotOne"

    def __init__(self, trace):
        self.trace = float(trace)
        super().__init__(f"trace is {self.trace!r}, expected 1")

    def to_dict(self):
        return {**super().to_dict(), "trace": self.trace}


class NotNormalized(ValidationError):
    kind = "NotNormalized"


class DimensionMismatch(ValidationError):
    kind = "DimensionMismatch"


class SubnormalizationViolated(ValidationError):
    kind = "SubnormalizationViolated"

    def __init__(self, max_eigenvalue):
        self.max_eigenvalue = float(max_eigenvalue)
        super().__init__(f"sum of K^H K exceeds identity (max eigenvalue {self.max_eigenvalue:.6g})")

    def to_dict(self):
        return {**super().to_dict(), "max_eigenvalue": self.max_eigenvalue}


class NotOrthogonal(ValidationError):
    kind = "NotOrthogonal"

    def __init__(self, i, j, overlap):
        self.pair = (i, j)
        self.overlap = float(overlap)
        super().__init__(f"states {i + 1} and {j + 1} are not orthogonal (|overlap| = {self.overlap:.6g})")

    def to_dict(self):
        return {**super().to_dict(), "pair": [self.pair[0] + 1, self.pair[1] + 1], "overlap": self.overlap}


class DimensionTooLarge(ValidationError):
    kind = "DimensionTooLarge"


class NotDistillable(Exception):
    """The state admits no stochastic incoherent distillation."""


class WitnessVerificationFailed(RuntimeError):
    """A constructed witness failed its own checks. This indicates a defect."""
