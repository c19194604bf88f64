"""Exception hierarchy shared by all modules."""


class IMDError(Exception):
    """Base class for every error raised by imdyn."""


class ConfigError(IMDError, ValueError):
    """Invalid user-supplied configuration or parameters."""


class DomainError(IMDError, ValueError):
    """Argument outside the mathematical domain of a formula."""


class InsufficientSampleError(IMDError, ValueError):
    """Too few ensemble members for the requested statistic."""


class SingularDiffusionError(IMDError, ArithmeticError):
    """Dispersion matrix is singular (or not PSD) beyond the regularization floor."""

    def __init__(self, message, t=None, path=None):
        super().__init__(message)
        self.t = t
        self.path = path


class IdentificationError(IMDError, ArithmeticError):
    """Operator identification failed (singular correlations, degenerate integrals)."""


class PoleError(IMDError, ArithmeticError):
    """A closed-form expression hit its pole."""


class DegenerateChainError(IMDError, ValueError):
    """Eigenvalue chain collapses (ratio 3, ties, or merges below the admissible spacing)."""


class DimensionError(IMDError, ValueError):
    """Dimension does not satisfy the structural constraints (e.g. odd n)."""
