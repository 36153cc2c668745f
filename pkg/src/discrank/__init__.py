"""Rating systems for symmetric zero-sum games.

Fits the classical Elo score and the disc decomposition (a penalized
low-rank skew-symmetric factorization of logit payoffs), classifies games
as fully transitive or fully cyclic, and evaluates held-out matchup
prediction.
"""

from .disc import (
    DiscModel,
    MEloModel,
    StrengthConsistency,
    cross_validate_ridge,
    loss_value,
    objective_and_gradient,
    update_disc_online,
)
from .elo import EloModel
from .errors import (
    ConvergenceFailure,
    DegenerateGame,
    DiscRankError,
    EmptyInput,
    InvalidConfig,
    InvalidRecord,
    NotTransitive,
    OriginPlayer,
    SplitInfeasible,
    UnknownPlayer,
)
from .evaluation import FitReport, SplitSpec, benchmark, mse, split
from .games import (
    DiscGame,
    EloGame,
    ExampleThree,
    Interpolated,
    canonical_cyclic_disc,
    random_disc_game,
    random_elo_game,
    realize,
)
from .geometry import (
    GameClassification,
    OriginLocation,
    Verdict,
    classify_disc,
    find_cycle,
    is_fully_transitive,
    reparametrize_positive,
)
from .payoff import (
    DensePayoff,
    MatchRecord,
    ObservedPayoff,
    aggregate,
    filter_min_count,
    load_matches_csv,
    load_payoff_json,
    logit,
    logit_transform,
    save_payoff_json,
    sigmoid,
)

__version__ = "0.1.0"

__all__ = [
    "DiscModel",
    "MEloModel",
    "EloModel",
    "StrengthConsistency",
    "cross_validate_ridge",
    "loss_value",
    "objective_and_gradient",
    "update_disc_online",
    "FitReport",
    "SplitSpec",
    "benchmark",
    "mse",
    "split",
    "DiscGame",
    "EloGame",
    "ExampleThree",
    "Interpolated",
    "canonical_cyclic_disc",
    "random_disc_game",
    "random_elo_game",
    "realize",
    "GameClassification",
    "OriginLocation",
    "Verdict",
    "classify_disc",
    "find_cycle",
    "is_fully_transitive",
    "reparametrize_positive",
    "DensePayoff",
    "MatchRecord",
    "ObservedPayoff",
    "aggregate",
    "filter_min_count",
    "load_matches_csv",
    "load_payoff_json",
    "logit",
    "logit_transform",
    "save_payoff_json",
    "sigmoid",
    "DiscRankError",
    "EmptyInput",
    "InvalidRecord",
    "DegenerateGame",
    "OriginPlayer",
    "NotTransitive",
    "UnknownPlayer",
    "SplitInfeasible",
    "InvalidConfig",
    "ConvergenceFailure",
]
