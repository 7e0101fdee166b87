"""Exception hierarchy shared by all geomhd modules."""


class GeomhdError(Exception):
    """Base class for all library errors."""


class UsageError(GeomhdError):
    """API misuse: mismatched jet shapes, bad multi-indices, missing bindings."""


class ParseError(GeomhdError):
    """Expression source rejected; `offset` is the byte position of the problem."""

    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} (at offset {offset})")
        self.offset = offset


class DomainError(GeomhdError):
    """Evaluation left the domain of an elementary function.

    `where` carries the pretty-printed offending subexpression when the error
    surfaced inside expression evaluation, `point` the evaluation point when a
    field attached it.
    """

    def __init__(self, message: str, where: str | None = None, point=None):
        super().__init__(message)
        self.where = where
        self.point = point

    def __str__(self):
        s = super().__str__()
        if self.where:
            s += f" in {self.where}"
        if self.point is not None:
            s += f" at point {self.point}"
        return s


class SingularityError(DomainError):
    """Division by a quantity whose value vanishes at the expansion point."""


class AccuracyError(GeomhdError):
    """Quadrature failed to reach the requested tolerance.

    Carries the best available estimate and an error bound for it.
    """

    def __init__(self, message: str, estimate: float, bound: float):
        super().__init__(f"{message} (best estimate {estimate!r}, error bound {bound:.3e})")
        self.estimate = estimate
        self.bound = bound


class ParameterError(GeomhdError):
    """Chain-function parameter makes a denominator factor vanish."""


class ConstraintError(GeomhdError):
    """A solution-family constraint is violated; message names the constraint."""


class ConfigError(GeomhdError):
    """Malformed or incomplete configuration input."""
