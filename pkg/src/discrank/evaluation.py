"""Entry-hiding splits, prediction MSE, and the benchmark harness."""

from __future__ import annotations

import csv
import json
import time
from dataclasses import dataclass, field, asdict

import numpy as np

from .errors import SplitInfeasible
from .payoff import ObservedPayoff

MAX_SPLIT_RESAMPLES = 100


@dataclass
class FitReport:
    """Unit of record for one model fit."""

    model: str
    n_params: int
    config: dict = field(default_factory=dict)
    train_mse: float | None = None
    test_mse: float | None = None
    objective_trace: list = field(default_factory=list)
    orthogonality_residuals: list = field(default_factory=list)
    wall_time: float = 0.0
    seed: int | None = None
    converged: bool = True
    warnings: list = field(default_factory=list)

    def to_json_dict(self) -> dict:
        return asdict(self)


@dataclass(frozen=True)
class SplitSpec:
    """Hide a symmetric fraction of the observed unordered pairs."""

    test_fraction: float = 0.2
    seed: int = 0

    def __post_init__(self):
        if not 0.0 < self.test_fraction < 1.0:
            raise SplitInfeasible("test_fraction must lie in (0, 1)")


def split(obs: ObservedPayoff, spec: SplitSpec):
    """Partition observed entries into (train, test), both non-empty.

    Hiding an unordered pair hides both orientations by construction.  The
    hidden set is resampled until every player keeps at least one train
    entry (at most MAX_SPLIT_RESAMPLES attempts).
    """
    keys = sorted(obs.entries)
    m = len(keys)
    n_test = int(round(spec.test_fraction * m))
    n_test = max(1, min(n_test, m - 1))
    if m < 2:
        raise SplitInfeasible("need at least 2 observed entries to split")
    rng = np.random.default_rng(spec.seed)
    for _ in range(MAX_SPLIT_RESAMPLES):
        hidden = set(map(int, rng.choice(m, size=n_test, replace=False)))
        train_keys = [keys[idx] for idx in range(m) if idx not in hidden]
        covered = {i for key in train_keys for i in key}
        if covered == set(range(obs.n_players)):
            test_keys = [keys[idx] for idx in sorted(hidden)]
            train = ObservedPayoff(
                players=obs.players, entries={k: obs.entries[k] for k in train_keys}
            )
            test = ObservedPayoff(
                players=obs.players, entries={k: obs.entries[k] for k in test_keys}
            )
            return train, test
    raise SplitInfeasible(
        f"could not keep every player covered after {MAX_SPLIT_RESAMPLES} resamples"
    )


def mse(predictor, test: ObservedPayoff) -> float:
    """Mean squared error in probability space, one term per unordered pair."""
    errors = [
        (predictor.predict_proba(i, j) - p) ** 2 for (i, j), (p, _) in test.entries.items()
    ]
    return float(np.mean(errors))


def benchmark(named_games, model_factories, split_spec: SplitSpec, seeds=(0, 1, 2)):
    """Fit every model on every game over several split seeds.

    named_games: iterable of (name, ObservedPayoff).
    model_factories: iterable of (name, callable() -> unfitted estimator).
    Returns a list of row dicts including the Elo-normalized MSE ratio when a
    model named 'elo' is present.
    """
    rows = []
    for game_name, obs in named_games:
        for seed in seeds:
            train, test = split(obs, SplitSpec(split_spec.test_fraction, seed))
            per_seed = []
            for model_name, factory in model_factories:
                model = factory()
                start = time.perf_counter()
                model.fit(train)
                elapsed = time.perf_counter() - start
                report = model.report_
                row = {
                    "game": game_name,
                    "model": model_name,
                    "params": report.n_params,
                    "train_mse": mse(model, train),
                    "test_mse": mse(model, test),
                    "elo_ratio": None,
                    "seed": seed,
                    "wall_time": elapsed,
                }
                per_seed.append(row)
            elo_rows = [r for r in per_seed if r["model"] == "elo"]
            if elo_rows:
                elo_mse = elo_rows[0]["test_mse"]
                for row in per_seed:
                    if row["test_mse"] > 0:
                        row["elo_ratio"] = elo_mse / row["test_mse"]
            rows.extend(per_seed)
    return rows


BENCHMARK_COLUMNS = ("game", "model", "params", "train_mse", "test_mse", "elo_ratio", "seed")


def write_benchmark_csv(rows, path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as handle:
        writer = csv.DictWriter(handle, fieldnames=BENCHMARK_COLUMNS, extrasaction="ignore")
        writer.writeheader()
        writer.writerows(rows)


def write_benchmark_json(rows, path) -> None:
    trimmed = [{k: row[k] for k in BENCHMARK_COLUMNS} for row in rows]
    with open(path, "w", encoding="utf-8") as handle:
        json.dump(trimmed, handle, indent=2, sort_keys=True)
        handle.write("\n")
