"""Exception types shared across the package.

Contract violations on shapes or index ranges raise plain ``ValueError``;
the classes here mark outcomes a caller may want to branch on (and that
the command line maps to distinct exit codes).
"""

__all__ = [
    "SingularMatrixError",
    "UnsupportedSizeError",
    "NotAFrameError",
    "NoRobustBridgeError",
    "NotInvertibleError",
    "UnderdeterminedSchemeError",
]


class SingularMatrixError(Exception):
    """Raised when a matrix to be inverted is numerically rank deficient.

    Carries the numeric rank that was detected in ``rank``.
    """

    def __init__(self, msg, rank=None):
        super().__init__(msg)
        self.rank = rank


class UnsupportedSizeError(ValueError):
    """Raised when an input exceeds a configured small-problem cap."""


class NotAFrameError(Exception):
    """Raised when a vector family has a vanishing lower frame bound."""


class NoRobustBridgeError(Exception):
    """Raised when no bridge set can make the reduced error operator
    nilpotent, or when a non-robust plan is asked to reconstruct."""


class NotInvertibleError(Exception):
    """Raised when the partial reconstruction operator is singular.

    Bridging may still recover the erased coefficients in this case; see
    the bridging module.
    """


class UnderdeterminedSchemeError(ValueError):
    """Raised when a sampling scheme has fewer samples than the space
    dimension, so point evaluations cannot determine a member."""
