"""Exception hierarchy.

Every domain failure raises a subclass of :class:`PosetForgeError`; the CLI maps
those to exit status 1 and anything argparse rejects to exit status 2.
"""


class PosetForgeError(Exception):
    pass


class ParseError(PosetForgeError, ValueError):
    pass


class DuplicateElement(ParseError):
    pass


class UnknownElement(PosetForgeError, KeyError):
    def __str__(self):
        return Exception.__str__(self)


class CycleDetected(PosetForgeError, ValueError):
    pass


class SizeLimitExceeded(PosetForgeError):
    pass


class MismatchedParent(PosetForgeError, ValueError):
    pass


class NotConnected(PosetForgeError, ValueError):
    pass


class Singleton(PosetForgeError, ValueError):
    pass


class DegreeOutOfRange(PosetForgeError, ValueError):
    pass


class MissingValue(PosetForgeError, KeyError):
    def __str__(self):
        return Exception.__str__(self)


class NotACocycle(PosetForgeError, ValueError):
    pass


class SymbolicFieldUnsupported(PosetForgeError, TypeError):
    pass


class ClassNotFixed(PosetForgeError, ValueError):
    pass


class MalformedBasis(PosetForgeError, ValueError):
    pass


class NotMultiplicative(PosetForgeError, ValueError):
    pass


class NotClosed(PosetForgeError, ValueError):
    pass


class ZeroRep(PosetForgeError, ValueError):
    pass


class NotIndecomposable(PosetForgeError, ValueError):
    pass


class NotMeetSemilattice(PosetForgeError, ValueError):
    pass
