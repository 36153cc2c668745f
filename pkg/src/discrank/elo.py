"""Classical Elo rating: stationary fit, prediction, online update."""

from __future__ import annotations

import copy
import time

import numpy as np
from scipy.optimize import minimize
from sklearn.base import BaseEstimator

from .errors import ConvergenceFailure, DegenerateGame, UnknownPlayer
from .evaluation import FitReport
from .payoff import DensePayoff, ObservedPayoff, sigmoid

LOSSES = ("bce", "quadratic")


def _bce(p, q):
    # binary cross entropy with guarded logs; q strictly inside (0, 1) here
    return -(p * np.log(q) + (1.0 - p) * np.log1p(-q))


def elo_objective(u, p, mask, weights, loss):
    """Loss and gradient of the stationary Elo objective on observed entries.

    Sums over both orientations of every observed pair, matching the
    double-sum convention of the stationary formulation.
    """
    diff = u[:, None] - u[None, :]
    q = sigmoid(diff)
    if loss == "bce":
        value = np.sum(weights * _bce(p, q), where=mask)
        dldz = (q - p) * weights
    else:  # quadratic
        value = 0.5 * np.sum(weights * (p - q) ** 2, where=mask)
        dldz = (q - p) * q * (1.0 - q) * weights
    dldz[~mask] = 0.0
    grad = dldz.sum(axis=1) - dldz.sum(axis=0)
    return value, grad


def _newton_polish(u, p, mask, weights, loss, tol, max_iter=100):
    """Damped Newton steps to push the gradient below tol.

    L-BFGS-B stops on relative objective progress, which at typical problem
    scales leaves the gradient around 1e-7; the Newton tail finishes the job.
    The Hessian is sum over observed pairs of phi''(z) (e_i - e_j)(e_i - e_j)^T.
    """
    u = u.copy()
    n = len(u)
    for _ in range(max_iter):
        value, grad = elo_objective(u, p, mask, weights, loss)
        if np.abs(grad).max() <= tol:
            break
        q = sigmoid(u[:, None] - u[None, :])
        curvature = q * (1.0 - q)
        if loss == "quadratic":
            curvature = curvature**2 + (q - p) * curvature * (1.0 - 2.0 * q)
        b = np.where(mask, weights * curvature, 0.0)
        b = b + b.T
        hessian = np.diag(b.sum(axis=1)) - b
        step, *_ = np.linalg.lstsq(hessian, -grad, rcond=None)
        # near the optimum the attainable decrease (~ grad^2) sits below the
        # rounding noise of the objective, so allow steps within that noise
        slack = 1e-12 * max(1.0, abs(value))
        scale = 1.0
        for _ in range(30):
            trial = u + scale * step
            if elo_objective(trial, p, mask, weights, loss)[0] <= value + slack:
                u = trial
                break
            scale *= 0.5
        else:
            break
    return u


def _connected_components(mask: np.ndarray) -> int:
    n = mask.shape[0]
    seen = np.zeros(n, dtype=bool)
    components = 0
    adjacency = mask & ~np.eye(n, dtype=bool)
    for start in range(n):
        if seen[start]:
            continue
        components += 1
        stack = [start]
        seen[start] = True
        while stack:
            node = stack.pop()
            for neighbor in np.flatnonzero(adjacency[node]):
                if not seen[neighbor]:
                    seen[neighbor] = True
                    stack.append(neighbor)
    return components


class EloModel(BaseEstimator):
    """Stationary Elo fit with a bce or quadratic loss.

    Fitted attributes: players_, u_ (mean-centered scores), report_.
    """

    def __init__(self, loss="bce", tol=1e-8, max_iter=1000, count_weighted=False):
        self.loss = loss
        self.tol = tol
        self.max_iter = max_iter
        self.count_weighted = count_weighted

    def fit(self, obs):
        if self.loss not in LOSSES:
            raise ValueError(f"loss must be one of {LOSSES}")
        if isinstance(obs, DensePayoff):
            obs = obs.to_observed()
        if obs.n_players < 2:
            raise DegenerateGame("Elo fit needs at least 2 players")
        start = time.perf_counter()
        dense = obs.to_dense()
        p = dense.matrix
        mask = dense.mask & ~np.eye(obs.n_players, dtype=bool)
        if not np.all(mask.any(axis=1)):
            raise DegenerateGame("every player must appear in at least one observed entry")
        weights = np.ones_like(p)
        if self.count_weighted:
            for (i, j), (_, count) in obs.entries.items():
                weights[i, j] = weights[j, i] = count

        trace = []

        def fun(u):
            value, grad = elo_objective(u, p, mask, weights, self.loss)
            trace.append(float(value))
            return value, grad

        result = minimize(
            fun,
            np.zeros(obs.n_players),
            jac=True,
            method="L-BFGS-B",
            options={"maxiter": self.max_iter, "gtol": self.tol, "ftol": 0.0},
        )
        u = _newton_polish(result.x, p, mask, weights, self.loss, self.tol)
        u -= u.mean()
        _, grad = elo_objective(u, p, mask, weights, self.loss)
        grad_norm = float(np.abs(grad).max())

        warnings_list = []
        n_components = _connected_components(dense.mask)
        if n_components > 1:
            warnings_list.append(
                f"matchup graph has {n_components} components; offsets between "
                "components are unidentified"
            )
        self.players_ = obs.players
        self.u_ = u
        self.report_ = FitReport(
            model="elo" if self.loss == "bce" else "elopp",
            n_params=obs.n_players,
            config={
                "loss": self.loss,
                "tol": self.tol,
                "max_iter": self.max_iter,
                "count_weighted": self.count_weighted,
            },
            objective_trace=trace,
            wall_time=time.perf_counter() - start,
            converged=grad_norm <= self.tol,
            warnings=warnings_list,
        )
        if grad_norm > self.tol:
            raise ConvergenceFailure(
                f"Elo fit stalled with gradient inf-norm {grad_norm:.3e} > tol {self.tol:.1e}",
                last_iterate=u,
                diagnostics={"report": self.report_},
            )
        return self

    def _index(self, player) -> int:
        if isinstance(player, (int, np.integer)):
            if not 0 <= player < len(self.players_):
                raise UnknownPlayer(f"player index {player} out of range")
            return int(player)
        try:
            return self.players_.index(player)
        except ValueError:
            raise UnknownPlayer(f"unknown player {player!r}") from None

    def predict_proba(self, i, j) -> float:
        """Probability that i beats j."""
        i, j = self._index(i), self._index(j)
        return float(sigmoid(self.u_[i] - self.u_[j]))

    def update_online(self, i, j, outcome, eta) -> "EloModel":
        """One online Elo step; returns a new model, leaving this one unchanged."""
        if eta <= 0:
            raise ValueError("eta must be positive")
        i, j = self._index(i), self._index(j)
        innovation = eta * (outcome - self.predict_proba(i, j))
        updated = copy.deepcopy(self)
        updated.u_ = self.u_.copy()
        updated.u_[i] += innovation
        updated.u_[j] -= innovation
        return updated

    def to_json_dict(self) -> dict:
        return {"model": "elo", "players": list(self.players_), "u": self.u_.tolist()}

    @classmethod
    def from_json_dict(cls, payload: dict) -> "EloModel":
        model = cls()
        model.players_ = tuple(payload["players"])
        model.u_ = np.asarray(payload["u"], dtype=float)
        model.report_ = FitReport(model="elo", n_params=len(model.players_))
        return model
