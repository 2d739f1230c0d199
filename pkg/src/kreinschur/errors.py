"""Exception hierarchy.

Every error raised on purpose by the package derives from
:class:`KreinSchurError`; ``kind`` is the machine-readable name the CLI
reports.
"""


class KreinSchurError(Exception):
    """Base class for all package errors."""

    @property
    def kind(self) -> str:
        return type(self).__name__


class ShapeMismatch(KreinSchurError, ValueError):
    pass


class NotSquare(ShapeMismatch):
    pass


class NotHermitian(KreinSchurError, ValueError):
    pass


class NotPSD(KreinSchurError, ValueError):
    pass


class NotInRange(KreinSchurError):
    """The equation Z = Y X has no solution."""


class NotWeaklyComplementable(KreinSchurError):
    pass


class NotComplementable(KreinSchurError):
    pass


class NotNonnegative(KreinSchurError):
    """The subspace is not nonnegative for the quadratic form of the operator."""


class NotRegular(KreinSchurError):
    """The Gram matrix of the subspace in the indefinite metric is singular."""


class NotKreinSelfadjoint(KreinSchurError):
    pass


class RangeNotRegular(KreinSchurError):
    pass


class NullspaceNotRegular(KreinSchurError):
    pass


class NoCompletion(KreinSchurError):
    pass


class InertiaMismatch(KreinSchurError):
    """A computed completion does not have the inertia it should have."""
