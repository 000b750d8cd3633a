"""Exception hierarchy.

Every error raised on purpose by the package derives from :class:`BaxterError`,
so callers (and the CLI) can separate bad input from genuine bugs.
"""


class BaxterError(Exception):
    """Base class for all package errors."""


# -- linear algebra ---------------------------------------------------------

class DimMismatch(BaxterError, ValueError):
    pass


class SiteOutOfRange(BaxterError, IndexError):
    pass


class NotDiagonalizable(BaxterError, ArithmeticError):
    pass


class Singular(BaxterError, ArithmeticError):
    pass


# -- expressions ------------------------------------------------------------

class ParseError(BaxterError, ValueError):
    """Malformed expression text; ``offset`` is the 0-based character index."""

    def __init__(self, message, offset, text=""):
        self.offset = offset
        self.text = text
        super().__init__(f"{message} at offset {offset}")


class UnboundIdentifier(BaxterError, KeyError):
    def __init__(self, name, span=None):
        self.name = name
        self.span = span
        super().__init__(name)

    def __str__(self):
        return f"unbound identifier {self.name!r}"


class ReservedName(BaxterError, ValueError):
    pass


class DivisionNearZero(BaxterError, ZeroDivisionError):
    def __init__(self, span, divisor):
        self.span = span
        self.divisor = divisor
        super().__init__(
            f"divisor {divisor!r} is within 1e-12 of zero (source span {span[0]}:{span[1]})")


# -- spectral operators and checks ----------------------------------------

class PoleClash(BaxterError, ValueError):
    """A sample point lies on (or too close to) a pole of the operator."""

    def __init__(self, message, sample=None):
        self.sample = sample
        super().__init__(message)


class PoleAtZero(PoleClash):
    pass


class PoleAtLimit(PoleClash):
    pass


class InfinityWithoutScale(BaxterError, ValueError):
    pass


class BadMultipliers(BaxterError, ValueError):
    pass


class SizeGuard(BaxterError, ValueError):
    pass


# -- algebra / baxterization ----------------------------------------------

class ZeroGenerator(BaxterError, ValueError):
    pass


class InconsistentParams(BaxterError, ArithmeticError):
    pass


class LengthMismatch(BaxterError, ValueError):
    pass


class WrongBlockCount(BaxterError, ValueError):
    def __init__(self, expected, spectrum):
        self.expected = expected
        self.spectrum = tuple(spectrum)
        shown = ", ".join(_fmt_complex(x) for x in self.spectrum)
        super().__init__(
            f"expected {expected} distinct eigenvalues, found {len(self.spectrum)}: [{shown}]")


class ZeroEigenvalue(BaxterError, ArithmeticError):
    pass


class ZeroLeadingEigenvalue(ZeroEigenvalue):
    pass


class ZeroMiddleEigenvalue(ZeroEigenvalue):
    pass


class ZeroDelta(BaxterError, ArithmeticError):
    pass


class ZeroM(BaxterError, ArithmeticError):
    pass


# -- files ------------------------------------------------------------------

class SchemaError(BaxterError, ValueError):
    """Input file failed validation; ``pointer`` is a JSON-pointer path."""

    def __init__(self, message, pointer=""):
        self.pointer = pointer
        super().__init__(f"{pointer or '/'}: {message}")


class MissingSample(BaxterError, LookupError):
    """A sampled operator was asked for a point it does not list."""

    def __init__(self, message, sample=None):
        self.sample = sample
        super().__init__(message)


def _fmt_complex(z):
    z = complex(z)
    if abs(z.imag) < 1e-12:
        return f"{z.real:.6g}"
    return f"{z.real:.6g}{z.imag:+.6g}i"
