"""Exceptions raised by the susygreen library.

Library code raises these and never exits; ``python -m susygreen`` maps them to
exit codes (see ``susygreen.__main__``).
"""

from __future__ import annotations


class SusyGreenError(Exception):
    """Base class for every error raised by susygreen."""


# MARK: Energies and domains
class BranchError(SusyGreenError):
    """Raised when no momentum with Im κ > 0 exists for the requested energy."""


class DomainError(SusyGreenError):
    """Raised when a grid, a position or a potential does not fit its domain."""


class GridMismatch(SusyGreenError):
    """Raised when two solutions or a transform and a solution live on different grids."""


# MARK: Solver
class SolutionOverflowError(SusyGreenError):
    """Raised when a rescaled solution still exceeds the magnitude cap."""


class DegenerateError(SusyGreenError):
    """Raised when a Wronskian vanishes numerically (the energy is a spectral point)."""


# MARK: Darboux
class NodeError(SusyGreenError):
    """Raised when the factorization solution changes sign inside the domain."""


class CaseError(SusyGreenError):
    """Raised when a transformation case is not allowed for the requested operation."""


class ThresholdError(SusyGreenError):
    """Raised when the factorization constant lies above the allowed threshold."""


class DivisionError(SusyGreenError):
    """Raised when a normalization would divide by E − α = 0."""


# MARK: Quadrature and limits
class ConvergenceError(SusyGreenError):
    """Raised when an integral or an extrapolated limit does not stabilize."""


class TailError(SusyGreenError):
    """Raised when doubling the integration window changes the result beyond tolerance."""


class AsymptoticError(SusyGreenError):
    """Raised when boundary products have not reached their asymptotic values."""


class OscillationError(SusyGreenError):
    """Raised when a quadrature grid cannot resolve the integrand's oscillation."""


# MARK: Configuration
class ConfigError(SusyGreenError):
    """Raised for unparseable or inconsistent run configuration."""
