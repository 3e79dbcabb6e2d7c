"""Exception types shared across the package.

The CLI maps these onto exit codes: InputError -> 2, NotAnnihilating -> 3,
PreconditionError -> 4.
"""

from __future__ import annotations


class ZerodivError(Exception):
    """Base class for all package errors."""


class InputError(ZerodivError):
    """Malformed user input: bad spec text, bad config, bad expression."""


class ParseError(InputError):
    def __init__(self, message: str, text: str | None = None, pos: int | None = None):
        self.text = text
        self.pos = pos
        if pos is not None:
            message = f"{message} (column {pos + 1})"
        super().__init__(message)


class UnknownGenerator(ParseError):
    pass


class ZeroDenominator(ParseError):
    pass


class ZeroInversion(ZerodivError):
    pass


class FieldMismatch(ZerodivError):
    pass


class GroupMismatch(ZerodivError):
    pass


class PreconditionError(ZerodivError):
    """An operation's stated precondition does not hold for the given data."""


class SupportSizeError(PreconditionError):
    pass


class IdentityNotInSupport(PreconditionError):
    pass


class FixedPointPresent(PreconditionError):
    pass


class NotAnnihilating(ZerodivError):
    """The supplied pair does not multiply to zero."""


class DegenerateC(ZerodivError):
    """The random cofactor collapsed the constructed annihilator to zero."""


class InternalInconsistency(ZerodivError):
    """A state the arithmetic should make impossible; indicates a bug."""


class WitnessVerificationFailed(InternalInconsistency):
    """A feasibility witness failed its final product check; indicates a bug."""
