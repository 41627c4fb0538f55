"""Exception types shared across the package."""


class Conics92Error(Exception):
    """Base class for all package-specific errors."""


# -- scalar domain ------------------------------------------------------------

class ZeroElement(Conics92Error):
    """A nonzero field element was required."""


class UnsupportedField(Conics92Error):
    """The requested operation is not defined over this scalar domain."""


class UnsupportedExtension(Conics92Error):
    """Trace forms are only available for C/R, F_{p^2}/F_p and k/k."""


# -- quadratic form arithmetic -------------------------------------------------

class FieldMismatch(Conics92Error):
    """Operands live over different scalar domains."""


class Degenerate(Conics92Error):
    """A Gram matrix with zero determinant was passed to diagonalization."""


# -- projective geometry -------------------------------------------------------

class LineInPlane(Conics92Error):
    """The line lies inside the plane; there is no single intersection point."""


class NotInChart(Conics92Error):
    """The point lies outside the requested affine chart."""


class DegeneratePoint(Conics92Error):
    """A trivialization point degenerated to the zero vector."""


class DegenerateConfiguration(Conics92Error):
    """The five points do not impose independent conditions on conics."""


# -- section evaluation ----------------------------------------------------------

class SingularZero(Conics92Error):
    """The Jacobian determinant vanishes at a zero of the section."""


class ConePoint(Conics92Error):
    """Tangent data was requested at the cone point (0,0,0)."""


# -- solver ---------------------------------------------------------------------

class SingularStartSystem(Conics92Error):
    """The random start system degenerated; re-randomize the covectors."""


class StepUnderflow(Conics92Error):
    """Adaptive step size fell below its floor while tracking a path."""


class CountMismatch(Conics92Error):
    """The solver did not find the expected number of solutions."""


class IncompleteSet(Conics92Error):
    """A complete solution set (92 zeros counted with conjugates) is required."""


# -- harness ----------------------------------------------------------------------

class TooLarge(Conics92Error):
    """Brute-force enumeration was requested beyond the feasibility guard."""


class DegenerateDraw(Conics92Error):
    """A random draw failed a validity check and must be resampled."""


class ExhaustedRetries(Conics92Error):
    """Rejection sampling did not produce a valid object within the retry budget."""


class BadReduction(Conics92Error):
    """Reduction mod p destroyed an invariant of the instance (bad prime)."""
