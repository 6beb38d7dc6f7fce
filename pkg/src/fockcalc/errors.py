"""Exception types shared across the package."""


class DimensionMismatch(ValueError):
    """Operands carry incompatible dimensions."""


class PreconditionError(ValueError):
    """An operation's precondition is violated (bad parameter range, unsupported combination)."""


class DomainError(ValueError):
    """A weight or evaluator left its admissible domain (e.g. infinite weight on support)."""


class SchemaError(ValueError):
    """A coefficient file does not conform to the JSON schema."""
