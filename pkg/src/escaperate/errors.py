"""Exception types shared across the package.

Everything a user can trigger with bad input derives from ``UserInputError``;
numerical cross-checks that fail derive from ``ToleranceError``.  The command
line maps these to exit codes 1 and 2.
"""


class EscapeRateError(Exception):
    """Base class for package errors."""


class UserInputError(EscapeRateError, ValueError):
    """Invalid arguments or input files."""


class ToleranceError(EscapeRateError, ArithmeticError):
    """Two independent computations disagree beyond tolerance."""


class SingularMatrixError(EscapeRateError, ArithmeticError):
    """A correlation (or linear-system) matrix has zero determinant."""


class NoSignChangeError(UserInputError):
    """A root bracket does not enclose a sign change."""


class ImproperSeriesError(UserInputError):
    """A rational function has no expansion in powers of 1/z."""


class DimensionCapError(UserInputError):
    """A transition matrix would exceed the configured dimension cap."""

    def __init__(self, required: int, cap: int):
        super().__init__(
            f"transition matrix needs dimension {required} but the cap is {cap}; "
            f"raise it with --max-dim {required} (or max_dim={required})"
        )
        self.required = required
        self.cap = cap


class ReducibleError(UserInputError):
    """The operation needs an irreducible transition matrix."""


class NotReducedError(UserInputError):
    """A word set has a word occurring inside another one."""


class OutsideRegimeError(UserInputError):
    """Root-location sign checks for p_{m,n} fail."""


class EnumerationBudgetError(UserInputError):
    """Brute-force enumeration would exceed its budget."""


class InsufficientDataError(UserInputError):
    """A survival curve has too few positive points to fit."""


class MethodDisagreementError(ToleranceError):
    """Spectral and combinatorial escape rates differ."""

    def __init__(self, spectral: float, combinatorial: float, tol: float):
        super().__init__(
            f"spectral rho={spectral!r} and combinatorial rho={combinatorial!r} "
            f"differ by more than {tol:g}"
        )
        self.spectral = spectral
        self.combinatorial = combinatorial
        self.tol = tol
