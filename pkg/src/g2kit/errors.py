"""Exception hierarchy shared by every module."""


class G2KitError(Exception):
    """Base class for toolkit errors."""


class InputError(G2KitError, ValueError):
    """Malformed or inconsistent input (shapes, grades, file formats)."""


class PreconditionError(G2KitError, ValueError):
    """An operation's documented precondition does not hold."""


class DegeneracyError(G2KitError, ArithmeticError):
    """A form or restriction that must be nondegenerate is (numerically) degenerate."""
