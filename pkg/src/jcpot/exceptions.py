"""Exception hierarchy shared by the library and the CLI.

Each class carries the process exit code the command-line tools use when
the error escapes to the top level.
"""


class JcpotError(Exception):
    """Base class for all errors raised by this package."""

    exit_code = 1


class ConfigError(JcpotError):
    """Invalid configuration or parameter value (unknown method, epsilon <= 0, ...)."""

    exit_code = 2


class DataError(JcpotError):
    """Malformed or unusable input data."""

    exit_code = 3


class ParseError(DataError):
    """A dataset file could not be parsed; the message names the offending line."""


class MissingClassError(DataError):
    """A labeled dataset contains no instance of a required class."""

    def __init__(self, class_id, where=None):
        self.class_id = int(class_id)
        self.where = where
        loc = f" in {where}" if where else ""
        super().__init__(f"class {self.class_id} has no instances{loc}")


class NumericalError(JcpotError):
    """A numerical failure: underflow or a degenerate kernel/mass."""

    exit_code = 4


class KernelUnderflowError(NumericalError):
    """An entire kernel row or column underflowed below the representable floor."""


class DegenerateKernelError(NumericalError):
    """A projection hit a zero row or column sum."""


class DegenerateMassError(NumericalError):
    """A per-class mass vector picked up a zero or negative entry."""


class NonConvergenceError(JcpotError):
    """An iteration limit was hit in strict mode (non-strict runs just flag it)."""

    exit_code = 5
