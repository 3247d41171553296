"""Exception types shared across the package."""


class MalformedAlgebraError(ValueError):
    """Operation tables, indices or arities that do not describe a valid algebra."""


class NotIdempotentError(ValueError):
    """A procedure that needs an idempotent algebra was given another one."""


class PreconditionError(ValueError):
    """Caller-side precondition (congruence inputs, Taylor term, prime quotient) violated."""


class NoLocalDifferenceTerm(Exception):
    """Some pair of labeled triples has no local difference term operation,
    so the algebra has no difference term operation."""

    def __init__(self, t0, t1):
        super().__init__(f"no local difference term operation for {tuple(t0)}, {tuple(t1)}")
        self.t0 = t0
        self.t1 = t1


class CloneTooLarge(RuntimeError):
    """Enumeration of term operations exceeded its cap."""


class ParseError(ValueError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)
