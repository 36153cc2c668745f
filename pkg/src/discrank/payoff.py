"""Empirical payoff matrices: aggregation, filtering, logit transform, I/O.

A symmetric zero-sum game is stored as win probabilities P with
P[i, j] = 1 - P[j, i].  Sparse data keeps one entry per unordered pair
(i < j) together with the number of games backing it.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass, field

import numpy as np
from scipy.special import expit

from .errors import DegenerateGame, EmptyInput, InvalidRecord

VALID_SCORES = (0.0, 0.5, 1.0)
DEFAULT_CLIP_EPS = 1e-3


def sigmoid(x):
    return expit(np.asarray(x, dtype=float))


def logit(p):
    p = np.asarray(p, dtype=float)
    return np.log(p) - np.log1p(-p)


@dataclass(frozen=True)
class MatchRecord:
    """A single game outcome; score_a is 1/0.5/0 for a win/draw/loss of player_a."""

    player_a: str
    player_b: str
    score_a: float

    def __post_init__(self):
        if self.player_a == self.player_b:
            raise InvalidRecord(f"self-match for player {self.player_a!r}")
        if float(self.score_a) not in VALID_SCORES:
            raise InvalidRecord(f"score_a must be one of {VALID_SCORES}, got {self.score_a}")


@dataclass(frozen=True)
class ObservedPayoff:
    """Sparse empirical payoff: entries map (i, j) with i < j to (p, count).

    The (j, i) probability is implicitly 1 - p and the diagonal is
    implicitly 0.5.  ``players`` fixes the index -> id bijection.
    """

    players: tuple
    entries: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.n_players < 2:
            raise DegenerateGame("an observed payoff needs at least 2 players")
        for (i, j), (p, count) in self.entries.items():
            if not (0 <= i < j < self.n_players):
                raise InvalidRecord(f"entry index ({i}, {j}) out of range or not i < j")
            if not (0.0 <= p <= 1.0):
                raise InvalidRecord(f"probability {p} outside [0, 1] for pair ({i}, {j})")
            if count < 1:
                raise InvalidRecord(f"count {count} < 1 for pair ({i}, {j})")

    @property
    def n_players(self) -> int:
        return len(self.players)

    @property
    def n_entries(self) -> int:
        return len(self.entries)

    def index(self, player: str) -> int:
        try:
            return self.players.index(player)
        except ValueError:
            from .errors import UnknownPlayer

            raise UnknownPlayer(f"unknown player {player!r}") from None

    def probability(self, i: int, j: int) -> float:
        if i == j:
            return 0.5
        key = (i, j) if i < j else (j, i)
        p, _ = self.entries[key]
        return p if i < j else 1.0 - p

    def to_dense(self) -> "DensePayoff":
        n = self.n_players
        matrix = np.full((n, n), 0.5)
        mask = np.eye(n, dtype=bool)
        for (i, j), (p, _) in self.entries.items():
            matrix[i, j] = p
            matrix[j, i] = 1.0 - p
            mask[i, j] = mask[j, i] = True
        return DensePayoff(matrix=matrix, mask=mask, players=self.players)

    def to_json_dict(self) -> dict:
        return {
            "players": list(self.players),
            "entries": [
                {"i": i, "j": j, "p": p, "count": count}
                for (i, j), (p, count) in sorted(self.entries.items())
            ],
        }

    @classmethod
    def from_json_dict(cls, payload: dict) -> "ObservedPayoff":
        entries = {
            (int(e["i"]), int(e["j"])): (float(e["p"]), int(e["count"]))
            for e in payload["entries"]
        }
        return cls(players=tuple(payload["players"]), entries=entries)


@dataclass(frozen=True)
class DensePayoff:
    """Dense payoff matrix with an observation mask (diagonal always observed)."""

    matrix: np.ndarray
    mask: np.ndarray
    players: tuple = None

    def __post_init__(self):
        matrix = np.asarray(self.matrix, dtype=float)
        mask = np.asarray(self.mask, dtype=bool)
        object.__setattr__(self, "matrix", matrix)
        object.__setattr__(self, "mask", mask)
        n = matrix.shape[0]
        if matrix.shape != (n, n) or mask.shape != (n, n):
            raise InvalidRecord("payoff matrix and mask must be square and same shape")
        if not np.array_equal(mask, mask.T):
            raise InvalidRecord("observation mask must be symmetric")
        if not mask.diagonal().all():
            raise InvalidRecord("diagonal must be observed")
        if not np.allclose(matrix.diagonal(), 0.5, atol=1e-12):
            raise InvalidRecord("diagonal payoffs must equal 0.5")
        both = mask & mask.T
        if not np.allclose((matrix + matrix.T)[both], 1.0, atol=1e-12):
            raise InvalidRecord("matrix[i, j] + matrix[j, i] must equal 1 on observed pairs")
        if self.players is not None:
            object.__setattr__(self, "players", tuple(self.players))
            if len(self.players) != n:
                raise InvalidRecord("player list length must match matrix size")

    @property
    def n_players(self) -> int:
        return self.matrix.shape[0]

    @property
    def fully_observed(self) -> bool:
        return bool(self.mask.all())

    def to_observed(self, count: int = 1) -> ObservedPayoff:
        n = self.n_players
        players = self.players if self.players is not None else tuple(str(i) for i in range(n))
        entries = {}
        for i in range(n):
            for j in range(i + 1, n):
                if self.mask[i, j]:
                    entries[(i, j)] = (float(self.matrix[i, j]), count)
        return ObservedPayoff(players=players, entries=entries)


def aggregate(records) -> ObservedPayoff:
    """Average match records into an empirical payoff.

    Player indices are assigned by first appearance; each unordered pair gets
    the mean score oriented toward the lower-index player and the game count.
    """
    records = list(records)
    if not records:
        raise EmptyInput("no match records to aggregate")
    index = {}
    for rec in records:
        for name in (rec.player_a, rec.player_b):
            if name not in index:
                index[name] = len(index)
    sums: dict = {}
    counts: dict = {}
    for rec in records:
        ia, ib = index[rec.player_a], index[rec.player_b]
        score = float(rec.score_a)
        if ia > ib:
            ia, ib = ib, ia
            score = 1.0 - score
        key = (ia, ib)
        sums[key] = sums.get(key, 0.0) + score
        counts[key] = counts.get(key, 0) + 1
    entries = {key: (sums[key] / counts[key], counts[key]) for key in sums}
    return ObservedPayoff(players=tuple(index), entries=entries)


def filter_min_count(obs: ObservedPayoff, min_games: int) -> ObservedPayoff:
    """Keep entries with count >= min_games, dropping players left without games."""
    if min_games < 1:
        raise InvalidRecord("min_games must be >= 1")
    kept = {key: val for key, val in obs.entries.items() if val[1] >= min_games}
    surviving = sorted({i for key in kept for i in key})
    if len(surviving) < 2:
        raise DegenerateGame(f"fewer than 2 players have >= {min_games} games per pair")
    remap = {old: new for new, old in enumerate(surviving)}
    entries = {(remap[i], remap[j]): val for (i, j), val in kept.items()}
    players = tuple(obs.players[i] for i in surviving)
    return ObservedPayoff(players=players, entries=entries)


def logit_transform(payoff: DensePayoff, clip_eps: float = DEFAULT_CLIP_EPS):
    """Clipped logit of the payoff; returns (A, mask) with A skew-symmetric.

    A[j, i] is mirrored from A[i, j] so skew-symmetry holds exactly on the
    observed entries.
    """
    if not 0.0 < clip_eps < 0.5:
        raise InvalidRecord("clip_eps must lie in (0, 0.5)")
    p = np.clip(payoff.matrix, clip_eps, 1.0 - clip_eps)
    a = logit(p)
    upper = np.triu(a, k=1)
    a = upper - upper.T
    a[~payoff.mask] = 0.0
    return a, payoff.mask.copy()


def load_matches_csv(path) -> list:
    """Read match records from a `player_a,player_b,score_a` CSV."""
    records = []
    with open(path, newline="", encoding="utf-8") as handle:
        reader = csv.DictReader(handle)
        expected = {"player_a", "player_b", "score_a"}
        if reader.fieldnames is None or not expected.issubset(reader.fieldnames):
            raise InvalidRecord(f"match CSV must have header columns {sorted(expected)}")
        for row in reader:
            records.append(
                MatchRecord(row["player_a"], row["player_b"], float(row["score_a"]))
            )
    if not records:
        raise EmptyInput(f"no match records in {path}")
    return records


def save_payoff_json(obs: ObservedPayoff, path) -> None:
    with open(path, "w", encoding="utf-8") as handle:
        json.dump(obs.to_json_dict(), handle, indent=2, sort_keys=True)
        handle.write("\n")


def load_payoff_json(path) -> ObservedPayoff:
    with open(path, encoding="utf-8") as handle:
        return ObservedPayoff.from_json_dict(json.load(handle))
