"""Typed errors shared by every module."""


class SkewFieldError(Exception):
    """Base class for every error raised by this library."""


class FieldMismatch(SkewFieldError):
    """Operands live over different coefficient fields (or different rules)."""


class DivisionByZero(SkewFieldError):
    """Division by the zero element of a coefficient field."""


class ZeroElement(SkewFieldError):
    """An operation required a nonzero field element."""


class UnsupportedField(SkewFieldError):
    """The operation is not available over this coefficient field."""


class ZeroSeries(SkewFieldError):
    """A series that is zero up to its precision cannot be inverted."""


class NonConvergent(SkewFieldError):
    """A substitution does not converge (inner series has valuation < 1)."""


class NotCompInvertible(SkewFieldError):
    """Compositional inversion needs valuation exactly 1 with a unit linear term."""


class ZeroDivisorCandidate(SkewFieldError):
    """A skew series with no visible leading term cannot be inverted."""


class NotInvertible(SkewFieldError):
    """An operator with no visible leading coefficient cannot be inverted."""


class NotSolvable(SkewFieldError):
    """A normal-form step the theory promises to be solvable failed.

    Raised loudly instead of silently producing a wrong canonical form;
    usually indicates a violated precondition (e.g. a residue automorphism
    without finite order).
    """


class InadmissibleSet(SkewFieldError):
    """An invariant set violates the admissibility constraints."""


class PrecisionExhausted(SkewFieldError):
    """Not enough known coefficients to finish the computation.

    The ``required`` attribute, when set, names the precision that would
    have been enough.
    """

    def __init__(self, message, required=None):
        if required is not None:
            message = "%s (required precision: %s)" % (message, required)
        super().__init__(message)
        self.required = required


class ParseError(SkewFieldError):
    """Input text does not match the grammar; carries the offset."""

    def __init__(self, message, position=None):
        if position is not None:
            message = "%s (at position %d)" % (message, position)
        super().__init__(message)
        self.position = position
