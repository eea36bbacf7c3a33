"""Exception types raised across the package.

Every error carries a short machine-readable ``kind`` so the CLI can emit a
structured message without string matching.
"""


class NcError(Exception):
    kind = "error"
    # (start, end) byte offsets into a state expression, set by the evaluator
    span = None

    def to_dict(self) -> dict:
        out = {"kind": self.kind, "message": str(self)}
        if self.span is not None:
            out["span"] = list(self.span)
        return out


class InvalidParameter(NcError, ValueError):
    kind = "invalid-parameter"


class DimensionTooSmall(NcError, ValueError):
    kind = "dimension-too-small"

    def __init__(self, message, tail_mass=None, dim=None):
        super().__init__(message)
        self.tail_mass = tail_mass
        self.dim = dim


class IndexOutOfRange(NcError, IndexError):
    kind = "index-out-of-range"


class DegenerateInput(NcError, ValueError):
    kind = "degenerate-input"


class SqueezingTooLarge(InvalidParameter):
    kind = "r-too-large"


class InvalidState(NcError, ValueError):
    kind = "invalid-state"


class UncertaintyViolation(NcError, ValueError):
    """Moments break the Heisenberg bound; usually truncation damage."""

    kind = "uncertainty-violation"


class ConvergenceError(NcError, RuntimeError):
    kind = "non-convergence"

    def __init__(self, message, delta=None):
        super().__init__(message)
        self.delta = delta


class ParseError(NcError, ValueError):
    kind = "syntax-error"

    def __init__(self, message, offset, expected=()):
        super().__init__(message)
        self.offset = offset
        self.expected = tuple(expected)
        self.span = (offset, offset + 1)

    def to_dict(self) -> dict:
        out = super().to_dict()
        out["offset"] = self.offset
        out["expected"] = list(self.expected)
        return out
