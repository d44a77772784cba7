"""Exception hierarchy shared by all modules."""


class GroupIsoError(Exception):
    """Base class for every error raised by this package."""


class InputError(GroupIsoError):
    """The input could not be interpreted as a group table."""


class MalformedInput(InputError):
    pass


class NotGroup(InputError):
    """The table was read but does not describe a group.

    ``reason`` is one of ``NotReduced``, ``NotLatin``, ``NotRegular`` or
    ``TransversalMismatch``; ``witness`` carries the offending label, line or
    relation so failures can be inspected.
    """

    def __init__(self, reason, message='', witness=None):
        self.reason = reason
        self.witness = witness
        super().__init__(f'{reason}: {message}' if message else reason)


class NotReduced(NotGroup):
    def __init__(self, message='', witness=None):
        super().__init__('NotReduced', message, witness)


class NotLatin(NotGroup):
    """A row or column repeats a symbol.

    ``kind`` is ``'row'`` or ``'column'``, ``index`` the 1-based line and
    ``symbol`` the first duplicated 1-based symbol.
    """

    def __init__(self, kind, index, symbol):
        self.kind = kind
        self.index = index
        self.symbol = symbol
        super().__init__('NotLatin', f'{kind} {index} repeats symbol {symbol}',
                         (kind, index, symbol))


class NotLatinRow(NotLatin):
    def __init__(self, index, symbol):
        super().__init__('row', index, symbol)


class NotLatinColumn(NotLatin):
    def __init__(self, index, symbol):
        super().__init__('column', index, symbol)


class InvalidParams(GroupIsoError, ValueError):
    pass


class InvalidPermutation(GroupIsoError, ValueError):
    pass


class DegenerateCube(GroupIsoError):
    def __init__(self, message, words=None, perms=None):
        self.words = words
        self.perms = perms
        super().__init__(message)


class WordTooLong(GroupIsoError):
    pass


class IndexOverflow(GroupIsoError):
    pass


class NotADivisor(GroupIsoError, ValueError):
    pass


class BoundTooLarge(GroupIsoError, ValueError):
    pass


class ResourceLimit(GroupIsoError):
    pass


class NotNormalHall(GroupIsoError):
    pass


class NotCyclic(GroupIsoError):
    pass


class RelatorOutsideB(GroupIsoError):
    pass


class NoComplement(GroupIsoError):
    pass


class InternalInconsistency(GroupIsoError):
    pass


class NotAUnit(GroupIsoError):
    pass


class WitnessVerificationFailed(GroupIsoError):
    pass


class ModeError(GroupIsoError):
    """The requested isomorphism mode cannot run on this input."""


class NotInUpsilon(GroupIsoError):
    """The order lies outside the set on which the pipeline is guaranteed."""
