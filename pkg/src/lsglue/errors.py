"""Exception types shared across the package.

Every error raised by lsglue derives from :class:`LsglueError`, so callers can
catch one base class at API boundaries (the CLI maps subclasses to exit codes).
"""

from __future__ import annotations


class LsglueError(Exception):
    """Base class for all lsglue errors."""


class MalformedNumber(LsglueError):
    """A rational literal did not match ``[-]?digits(/digits)?`` or ``[-]?digits(.digits)?``."""


class ZeroDenominator(LsglueError):
    """A rational literal had denominator zero."""


class DimensionMismatch(LsglueError):
    """Vector/matrix/feature dimensions are incompatible."""


class Singular(LsglueError):
    """A square system has no unique solution.

    ``rank`` carries the rank of the offending matrix when known; ``cell``
    names the chart or overlap cell whose normal matrix degenerated.
    """

    def __init__(self, message: str, rank: int | None = None, cell: str | None = None):
        super().__init__(message)
        self.rank = rank
        self.cell = cell


class Inconsistent(LsglueError):
    """A rectangular system A x = b has no solution.

    ``witness`` is an exact solution of the normal-projected system
    AᵀA x = Aᵀb and ``residual`` is the (witness-independent) exact defect
    b - A·witness.
    """

    def __init__(self, message: str, residual=None, witness=None):
        super().__init__(message)
        self.residual = residual
        self.witness = witness


class IndexOutOfRange(LsglueError):
    """A point index fell outside 1..m for the data set at hand."""


class NotACover(LsglueError):
    """The union of chart index sets misses part of the base data set."""

    def __init__(self, missing):
        self.missing = frozenset(missing)
        super().__init__(f"charts do not cover base indices {sorted(self.missing)}")


class BaseMismatch(LsglueError):
    """Two linearized quantities were combined at different base points."""


class DegreeZero(LsglueError):
    """The interior-multiplication differential was applied in degree 0."""


class ConstantObstruction(LsglueError):
    """A homotopy target has a constant term, which no differential image carries."""


class Obstructed(LsglueError):
    """The degree-2 witness equations are inconsistent; ``residual`` is exact."""

    def __init__(self, message: str, residual=None):
        super().__init__(message)
        self.residual = residual


class CellMismatch(LsglueError):
    """A cochain references cells that do not match the supplied chart fits."""
