"""Exception types raised across the package."""


class HSError(Exception):
    """Base class for all errors raised by hsverify."""


class DimensionMismatch(HSError, ValueError):
    pass


class InvalidWeight(HSError, ValueError):
    pass


class UnsupportedSpace(HSError, ValueError):
    pass


class UnsupportedPairing(HSError, ValueError):
    pass


class NonFiniteSample(HSError, ArithmeticError):
    """A quadrature integrand produced nan/inf at some node."""

    def __init__(self, node, value):
        self.node = node
        self.value = value
        super().__init__(f"non-finite integrand value {value!r} at node {node!r}")


class ParseError(HSError, ValueError):
    """Expression error carrying the byte offset into the source text."""

    def __init__(self, message, offset, text="", column=None):
        self.offset = offset
        self.text = text
        # character index of the same position; differs from offset for non-ASCII text
        self.column = offset if column is None else column
        super().__init__(f"{message} (at offset {offset})")

    def pointer(self):
        """Two-line rendering of the source with a caret under the error position."""
        return f"{self.text}\n{' ' * self.column}^"


class ExpressionSyntaxError(ParseError):
    pass


class UnknownVariable(ParseError):
    pass


class ExponentOverflow(ParseError):
    pass


class SchemaError(HSError, ValueError):
    pass


class ValidationError(HSError, ValueError):
    pass
