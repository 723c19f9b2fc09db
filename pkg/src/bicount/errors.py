"""Exception hierarchy shared by all bicount modules.

The CLI maps these onto stable exit codes (see ``bicount.cli``).
"""


class BicountError(Exception):
    """Base class for all errors raised by this package."""


class PotentialFormatError(BicountError):
    """A potential file (or literal) could not be parsed."""


class ValidationError(BicountError):
    """Structurally valid input that violates a mathematical precondition."""


class CoefficientVariantError(ValidationError):
    """Mixed plain-rational and parameter-polynomial coefficients."""


class InstanceTooLargeError(BicountError):
    """An exhaustive enumeration request exceeds the hard size guard."""


class DegenerateCriticalPointError(BicountError):
    """A selected extremum fails the non-degeneracy margin.

    Raised instead of emitting an asymptotic law whose derivation assumes
    non-degenerate critical points.
    """


class UnsupportedRegimeError(BicountError):
    """A critical-point configuration the implemented laws do not cover."""


class RootRefinementError(BicountError):
    """Newton or Aberth iteration failed to converge within its budget."""


class FitError(BicountError):
    """Growth-law fitting failed (too few usable terms, inconsistent signs)."""
