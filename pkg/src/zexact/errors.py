class ZexactError(Exception):
    """Base class for every error raised by this package."""


class SignatureError(ZexactError):
    pass


class SignatureMismatch(ZexactError):
    pass


class TableError(ZexactError):
    pass


class NotAHomomorphism(ZexactError):
    def __init__(self, symbol, args, message=None):
        self.symbol = symbol
        self.args_tuple = tuple(args)
        super().__init__(message or f"not a homomorphism at ({symbol!r}, {self.args_tuple})")


class NotACongruence(ZexactError):
    def __init__(self, symbol, args, position, other, message=None):
        self.symbol = symbol
        self.args_tuple = tuple(args)
        self.position = position
        self.other = other
        super().__init__(
            message
            or f"partition is not compatible with {symbol!r} at {self.args_tuple} "
            f"(position {position} replaced by {other})"
        )


class CompositionError(ZexactError):
    pass


class BoundExceeded(ZexactError):
    pass


class BudgetExceeded(ZexactError):
    pass


class NonCommutingError(ZexactError):
    pass


class MalformedDiagram(ZexactError):
    pass


class SchemaError(ZexactError):
    def __init__(self, path, message):
        self.path = path
        super().__init__(f"{path}: {message}" if path else message)
