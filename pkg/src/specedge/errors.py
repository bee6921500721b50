"""Exception hierarchy shared across the toolkit."""


class SpecEdgeError(Exception):
    """Base class for all toolkit errors."""


class EvaluationError(SpecEdgeError):
    """Symbol or derivative evaluation produced a non-finite value."""

    def __init__(self, message, rho=None):
        super().__init__(message)
        self.rho = rho


class DegenerateBoundaryError(SpecEdgeError):
    """Second bracket vanishes: boundary point is not of order 2."""


class DomainError(SpecEdgeError):
    """Argument outside the mathematical domain of the operation."""


class CatalogError(SpecEdgeError):
    """Unknown symbol or example identifier."""


class NoTurningPointsError(SpecEdgeError):
    """Root search found no phase-space solutions (z likely outside the range)."""


class TooCloseToBoundaryError(SpecEdgeError):
    """Turning points found but bracket magnitude below tolerance."""


class BranchTrackingError(SpecEdgeError):
    """Discontinuity detected while continuing a root branch."""


class AccuracyError(SpecEdgeError):
    """Quadrature or iteration failed to meet the requested tolerance."""

    def __init__(self, message, best_estimate=None, error_estimate=None):
        super().__init__(message)
        self.best_estimate = best_estimate
        self.error_estimate = error_estimate


class ClassificationError(SpecEdgeError):
    """Bracket signs inconsistent with the plus/minus classification."""


class SideError(SpecEdgeError):
    """Quasimode side does not match the sign of Im g' at the anchor."""


class CoverageError(SpecEdgeError):
    """Interval too small to hold the quasimode at the requested h."""


class GridMismatchError(SpecEdgeError):
    """Operator matrix and mode were built on different grids."""


class FitError(SpecEdgeError):
    """Degenerate design matrix in a least-squares fit."""
