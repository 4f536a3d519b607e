"""Exception types raised by the rewriting engine."""


class RewriteError(Exception):
    """Base class for domain errors (the CLI maps these to exit status 1)."""


class InvalidPosition(RewriteError, IndexError):
    pass


class NotAStep(RewriteError, ValueError):
    pass


class NonCoinitial(RewriteError, ValueError):
    pass


class UndefinedOnWait(RewriteError, ValueError):
    pass


class NotCreated(RewriteError, ValueError):
    pass


class NormalFormInput(RewriteError, ValueError):
    pass


class NotLambdaFragment(RewriteError, ValueError):
    pass


class NotPreserved(RewriteError, ValueError):
    pass


class LengthMismatch(RewriteError, ValueError):
    pass


class NotNormalizing(RewriteError):
    """The source has no normal form reachable within the search bound."""


class FuseExceeded(RewriteError):
    pass


class ParseError(RewriteError, SyntaxError):
    def __init__(self, message, text, offset):
        line = text.count("\n", 0, offset) + 1
        column = offset - (text.rfind("\n", 0, offset) + 1) + 1
        super().__init__(f"{message} at line {line}, column {column}")
        self.line = line
        self.column = column
