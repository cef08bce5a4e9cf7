"""Exception hierarchy."""


class ParalabError(Exception):
    pass


class EvaluationError(ParalabError, ArithmeticError):
    """A scalar field was evaluated outside its domain of definition."""

    def __init__(self, message, node=None):
        super().__init__(message)
        self.node = node


class DegenerateMetricError(ParalabError, ArithmeticError):
    pass


class VarianceError(ParalabError, ValueError):
    pass


class StructureError(ParalabError, ValueError):
    """Inputs do not satisfy the algebraic preconditions of a constructor."""


class IllPosedFitError(ParalabError, ValueError):
    pass


class ParseError(ParalabError, ValueError):
    def __init__(self, message, offset=None):
        if offset is not None:
            message = f"{message} (at byte {offset})"
        super().__init__(message)
        self.offset = offset


class UnknownIdentifierError(ParseError):
    pass


class UnknownFunctionError(ParseError):
    pass


class ManifestError(ParalabError, ValueError):
    def __init__(self, message, path=None):
        if path:
            message = f"{path}: {message}"
        super().__init__(message)
        self.path = path


class SamplingError(ParalabError, RuntimeError):
    """Too few nondegenerate sample points could be drawn."""
