"""Exception types shared across the package."""


class RejectedInputError(ValueError):
    """An argument violates an operation's precondition."""


class DimensionMismatchError(RejectedInputError):
    """Operands live in Clifford algebras of different dimension."""


class SingularInputError(ValueError):
    """Evaluation requested at (or too near) a singular point."""


class DegenerateParameterError(ValueError):
    """A parameter choice makes a divisor vanish."""


class ConfigError(ValueError):
    """Malformed verification config; message names the offending field."""
