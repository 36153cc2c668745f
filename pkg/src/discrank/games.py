"""Synthetic game families used as fixtures and benchmarks."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DegenerateGame, InvalidConfig
from .payoff import DensePayoff, sigmoid


@dataclass(frozen=True)
class EloGame:
    """Fully transitive game: P[i, j] = sigmoid(u_i - u_j)."""

    u: tuple

    def __post_init__(self):
        object.__setattr__(self, "u", tuple(float(x) for x in self.u))


@dataclass(frozen=True)
class DiscGame:
    """Two-score game: P[i, j] = sigmoid(u_i v_j - v_i u_j)."""

    u: tuple
    v: tuple

    def __post_init__(self):
        object.__setattr__(self, "u", tuple(float(x) for x in self.u))
        object.__setattr__(self, "v", tuple(float(x) for x in self.v))
        if len(self.u) != len(self.v):
            raise InvalidConfig("u and v must have the same length")


@dataclass(frozen=True)
class Interpolated:
    """Logit-space mixture: logit(P) = ratio * logit(P_elo) + (1 - ratio) * logit(P_disc)."""

    elo: EloGame
    disc: DiscGame
    ratio: float

    def __post_init__(self):
        if not 0.0 <= self.ratio <= 1.0:
            raise InvalidConfig("ratio must lie in [0, 1]")
        if len(self.elo.u) != len(self.disc.u):
            raise InvalidConfig("elo and disc specs must have the same player count")


@dataclass(frozen=True)
class ExampleThree:
    """Three-player transitive game with non-additive logits.

    Rows: (0.5, gamma, gamma), (1-gamma, 0.5, delta), (1-gamma, 1-delta, 0.5).
    """

    gamma: float
    delta: float

    def __post_init__(self):
        for name, val in (("gamma", self.gamma), ("delta", self.delta)):
            if not 0.5 < val <= 1.0:
                raise InvalidConfig(f"{name} must lie in (0.5, 1], got {val}")


GameSpec = EloGame | DiscGame | Interpolated | ExampleThree


def _logit_matrix(spec: GameSpec) -> np.ndarray:
    """Exact logit payoffs; mixing here avoids a lossy sigmoid/logit round trip."""
    if isinstance(spec, EloGame):
        u = np.asarray(spec.u)
        return u[:, None] - u[None, :]
    if isinstance(spec, DiscGame):
        u, v = np.asarray(spec.u), np.asarray(spec.v)
        return np.outer(u, v) - np.outer(v, u)
    if isinstance(spec, Interpolated):
        return spec.ratio * _logit_matrix(spec.elo) + (1.0 - spec.ratio) * _logit_matrix(
            spec.disc
        )
    raise InvalidConfig(f"unknown game spec {type(spec).__name__}")


def realize(spec: GameSpec) -> DensePayoff:
    """Materialize a game spec as a fully observed payoff matrix."""
    if isinstance(spec, (EloGame, DiscGame, Interpolated)):
        matrix = sigmoid(_logit_matrix(spec))
    elif isinstance(spec, ExampleThree):
        g, d = spec.gamma, spec.delta
        matrix = np.array(
            [
                [0.5, g, g],
                [1.0 - g, 0.5, d],
                [1.0 - g, 1.0 - d, 0.5],
            ]
        )
    else:
        raise InvalidConfig(f"unknown game spec {type(spec).__name__}")
    n = matrix.shape[0]
    np.fill_diagonal(matrix, 0.5)
    # enforce exact zero-sum symmetry against rounding
    iu = np.triu_indices(n, k=1)
    matrix[(iu[1], iu[0])] = 1.0 - matrix[iu]
    return DensePayoff(matrix=matrix, mask=np.ones((n, n), dtype=bool))


def canonical_cyclic_disc(n: int) -> DiscGame:
    """Players on the unit circle at angles 2*pi*i/n, i = 1..n; fully cyclic."""
    if n < 3:
        raise DegenerateGame("a cyclic disc game needs n >= 3")
    angles = 2.0 * np.pi * np.arange(1, n + 1) / n
    return DiscGame(u=tuple(np.cos(angles)), v=tuple(np.sin(angles)))


def random_elo_game(n: int, seed: int) -> EloGame:
    """Elo game with i.i.d. standard normal scores."""
    rng = np.random.default_rng(seed)
    return EloGame(u=tuple(rng.standard_normal(n)))


def random_disc_game(n: int, seed: int) -> DiscGame:
    rng = np.random.default_rng(seed)
    return DiscGame(u=tuple(rng.standard_normal(n)), v=tuple(rng.standard_normal(n)))


def spec_to_json_dict(spec: GameSpec) -> dict:
    if isinstance(spec, EloGame):
        return {"kind": "elo", "u": list(spec.u)}
    if isinstance(spec, DiscGame):
        return {"kind": "disc", "u": list(spec.u), "v": list(spec.v)}
    if isinstance(spec, Interpolated):
        return {
            "kind": "interp",
            "ratio": spec.ratio,
            "elo": spec_to_json_dict(spec.elo),
            "disc": spec_to_json_dict(spec.disc),
        }
    if isinstance(spec, ExampleThree):
        return {"kind": "example3", "gamma": spec.gamma, "delta": spec.delta}
    raise InvalidConfig(f"unknown game spec {type(spec).__name__}")


def spec_from_json_dict(payload: dict) -> GameSpec:
    kind = payload.get("kind")
    if kind == "elo":
        return EloGame(u=tuple(payload["u"]))
    if kind == "disc":
        return DiscGame(u=tuple(payload["u"]), v=tuple(payload["v"]))
    if kind == "interp":
        return Interpolated(
            elo=spec_from_json_dict(payload["elo"]),
            disc=spec_from_json_dict(payload["disc"]),
            ratio=float(payload["ratio"]),
        )
    if kind == "example3":
        return ExampleThree(gamma=float(payload["gamma"]), delta=float(payload["delta"]))
    raise InvalidConfig(f"unknown game spec kind {kind!r}")
