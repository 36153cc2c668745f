"""Exception hierarchy shared across the package."""


class DiscRankError(Exception):
    """Base class for all discrank errors."""


class EmptyInput(DiscRankError):
    """Raised when an operation receives no data."""


class InvalidRecord(DiscRankError):
    """Raised for malformed match records (e.g. a player facing themselves)."""


class DegenerateGame(DiscRankError):
    """Raised when a game has too few players for the requested operation."""


class OriginPlayer(DiscRankError):
    """Raised when a planar embedding places a player exactly at the origin."""


class NotTransitive(DiscRankError):
    """Raised when a transitive-only operation is applied to a cyclic embedding."""


class UnknownPlayer(DiscRankError):
    """Raised when a prediction is requested for a player absent from the model."""


class SplitInfeasible(DiscRankError):
    """Raised when no train/test split satisfies the coverage constraint."""


class InvalidConfig(DiscRankError):
    """Raised for inconsistent fit or CLI configuration."""


class ConvergenceFailure(DiscRankError):
    """Raised when an optimizer fails to reach the requested tolerance.

    Carries the last iterate and diagnostics so callers can still inspect
    (and serialize) the partial result.
    """

    def __init__(self, message, last_iterate=None, diagnostics=None):
        super().__init__(message)
        self.last_iterate = last_iterate
        self.diagnostics = diagnostics or {}
