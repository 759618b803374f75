"""Exception types shared across the package.

Every error raised on a user-facing path derives from AtInftyError so the
CLI can map failures to exit codes uniformly.
"""


class AtInftyError(Exception):
    """Base class for all package errors."""


class DescriptorMismatch(AtInftyError):
    """Binary operation between values of different fields."""


class DivisionByZero(AtInftyError):
    """Division or inversion of a zero field value."""


class NotAnExtensionField(AtInftyError):
    """Invalid extension data: bad prime, reducible or oversized modulus."""


class VariableMismatch(AtInftyError):
    """Binary operation between series in different variables."""


class NotAUnit(AtInftyError):
    """Inversion of a series or polynomial with non-invertible leading part."""


class PrecisionExhausted(AtInftyError):
    """An operation needs coefficients beyond the stored precision."""


class WindowExceeded(AtInftyError):
    """An operator was applied or probed outside its certified window."""


class NotStabilized(AtInftyError):
    """Series read-back from an operator did not stabilize on the window."""


class NotInFiltrationLevel(AtInftyError):
    """A chart unit has terms below the requested filtration level."""


class MalformedCocycle(AtInftyError):
    """Input is not a unit of the overlap chart in the expected shape."""


class NotInG(AtInftyError):
    """Input is not 1 + (x^-1 y^-1)-tail, or not h in y^-1 k[[y^-1]]."""


class NotMonic(AtInftyError):
    """Root finding requires a polynomial monic in x of positive degree."""


class WildBranch(AtInftyError):
    """No Laurent root branch is resolvable (Puiseux slope, multiple or
    non-rational leading coefficient); carries the unresolved report."""

    def __init__(self, message, unresolved=None):
        super().__init__(message)
        self.unresolved = unresolved or []


class UnsplitFactor(AtInftyError):
    """Over the rationals only degree-1 places are supported; names the
    irreducible factor of degree >= 2 that blocks the computation."""

    def __init__(self, factor_str):
        super().__init__(
            "support contains an irreducible factor of degree >= 2 over the "
            f"rationals: {factor_str}"
        )
        self.factor_str = factor_str


class InseparableDifferential(AtInftyError):
    """dg vanishes identically (g is a p-th power), residues undefined."""


class ZeroFunction(AtInftyError):
    """The zero function has no local expansion, valuation or symbol."""


class ParseError(AtInftyError):
    """Syntax error in a CLI/text input; carries the byte offset."""

    def __init__(self, message, pos):
        super().__init__(f"{message} (at byte {pos})")
        self.pos = pos
