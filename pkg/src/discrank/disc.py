"""Penalized alternating minimization of the rank-2k skew-symmetric factorization.

The model approximates logit(P) (or P - 1/2 in probability space) by a sum of
cross-product components u v^T - v u^T, fitted one component at a time
against the accumulated residual; orthogonality between components is kept by
normalized quadratic penalties.
"""

from __future__ import annotations

import copy
import time
import warnings as _warnings
from dataclasses import dataclass

import numpy as np
from scipy.linalg import schur
from scipy.optimize import minimize, minimize_scalar
from scipy.special import xlog1py, xlogy
from sklearn.base import BaseEstimator

from .errors import (
    ConvergenceFailure,
    DegenerateGame,
    InvalidConfig,
    NotTransitive,
    UnknownPlayer,
)
from .evaluation import FitReport
from .geometry import GameClassification, classify_disc, reparametrize_positive
from .payoff import DEFAULT_CLIP_EPS, DensePayoff, ObservedPayoff, logit, logit_transform, sigmoid

LOSS_SPACES = ("logit-mse", "bce-sigmoid", "prob-mse")
CONSISTENCY_FLOOR = 1e-6
MAX_PENALTY_RETRIES = 3
_OUTER_TOL = 1e-7
_OUTER_PATIENCE = 5


# ---------------------------------------------------------------------------
# losses
# ---------------------------------------------------------------------------

def _data_loss(loss_space, target, a_hat, mask):
    """Loss value and entrywise derivative matrix G on the observed mask.

    ``target`` is logit(P) for logit-mse and the (possibly shifted)
    probability matrix otherwise.
    """
    if loss_space == "logit-mse":
        diff = a_hat - target
        value = np.sum(diff**2, where=mask)
        g = 2.0 * diff
    elif loss_space == "bce-sigmoid":
        q = sigmoid(a_hat)
        # xlogy keeps 0 * log(0) at zero when observed probabilities hit 0 or 1
        value = np.sum(-(xlogy(target, q) + xlog1py(1.0 - target, -q)), where=mask)
        g = q - target
    elif loss_space == "prob-mse":
        diff = a_hat - (target - 0.5)
        value = 0.5 * np.sum(diff**2, where=mask)
        g = diff
    else:
        raise InvalidConfig(f"loss_space must be one of {LOSS_SPACES}")
    g = np.where(mask, g, 0.0)
    return float(value), g


def loss_value(loss_space, p, a_hat) -> float:
    """Scalar per-entry loss between an observed probability and a model logit."""
    if loss_space == "logit-mse":
        return float((logit(p) - a_hat) ** 2)
    mask = np.ones((1, 1), dtype=bool)
    value, _ = _data_loss(loss_space, np.full((1, 1), float(p)), np.full((1, 1), float(a_hat)), mask)
    return value


def _penalty(x, c):
    """<x, c>^2 / ||c||^2 with gradients w.r.t. both arguments."""
    c_sq = float(c @ c)
    dot = float(x @ c)
    value = dot**2 / c_sq
    grad_x = 2.0 * dot * c / c_sq
    grad_c = 2.0 * dot * x / c_sq - 2.0 * dot**2 * c / c_sq**2
    return value, grad_x, grad_c


def objective_and_gradient(target, mask, us, vs, loss_space, penalty_weight=1.0, ridge=0.0):
    """Full penalized objective over all components, with exact gradients.

    Returns (value, grad_us, grad_vs); the penalty structure mirrors the
    alternating scheme (cross-component terms plus the within-pair
    <u, v>^2 / ||u||^2 term), and the ridge acts on the first component's v.
    """
    us = np.asarray(us, dtype=float)
    vs = np.asarray(vs, dtype=float)
    n, k = us.shape
    a_hat = np.zeros((n, n))
    for l in range(k):
        a_hat += np.outer(us[:, l], vs[:, l]) - np.outer(vs[:, l], us[:, l])
    value, g = _data_loss(loss_space, target, a_hat, mask)
    gd = g - g.T
    grad_us = np.column_stack([gd @ vs[:, l] for l in range(k)])
    grad_vs = np.column_stack([gd.T @ us[:, l] for l in range(k)])

    for l in range(k):
        pv, gx, gc = _penalty(vs[:, l], us[:, l])
        value += penalty_weight * pv
        grad_vs[:, l] += penalty_weight * gx
        grad_us[:, l] += penalty_weight * gc
        for m in range(l):
            for x_col, grad_x_col in ((us, grad_us), (vs, grad_vs)):
                for c_col, grad_c_col in ((us, grad_us), (vs, grad_vs)):
                    pv, gx, gc = _penalty(x_col[:, l], c_col[:, m])
                    value += penalty_weight * pv
                    grad_x_col[:, l] += penalty_weight * gx
                    grad_c_col[:, m] += penalty_weight * gc
    if ridge > 0.0:
        value += 0.5 * ridge * float(np.sum((vs[:, 0] - 1.0) ** 2))
        grad_vs[:, 0] += ridge * (vs[:, 0] - 1.0)
    return value, grad_us, grad_vs


# ---------------------------------------------------------------------------
# alternating minimization
# ---------------------------------------------------------------------------

def _solve_inner(fun, x0, tol, max_inner):
    result = minimize(
        fun,
        x0,
        jac=True,
        method="L-BFGS-B",
        options={"maxiter": max_inner, "gtol": tol, "ftol": 0.0},
    )
    return result.x


def fit_component(
    target,
    mask,
    a_prev,
    prior_us,
    prior_vs,
    loss_space,
    u0,
    v0,
    *,
    tol=1e-8,
    max_inner=200,
    max_outer=1000,
    penalty_weight=1.0,
    ridge=0.0,
):
    """Fit one cross-product component against the accumulated residual.

    Alternates exact (quasi-Newton) minimization over u then v.  The u step
    penalizes alignment with the previously fitted vectors; the v step
    additionally penalizes <u, v>.  Returns (u, v, diagnostics).
    """
    u, v = np.asarray(u0, dtype=float).copy(), np.asarray(v0, dtype=float).copy()
    priors = list(prior_us) + list(prior_vs)

    def cross_penalties(x):
        value, grad = 0.0, np.zeros_like(x)
        for c in priors:
            pv, gx, _ = _penalty(x, c)
            value += penalty_weight * pv
            grad += penalty_weight * gx
        return value, grad

    def data_term(u_cur, v_cur):
        a_hat = a_prev + np.outer(u_cur, v_cur) - np.outer(v_cur, u_cur)
        return _data_loss(loss_space, target, a_hat, mask)

    def f_u(u_cur):
        value, g = data_term(u_cur, v)
        grad = (g - g.T) @ v
        pv, pg = cross_penalties(u_cur)
        return value + pv, grad + pg

    def f_v(v_cur):
        value, g = data_term(u, v_cur)
        grad = (g.T - g) @ u
        pv, pg = cross_penalties(v_cur)
        value += pv
        grad += pg
        ov, ogx, _ = _penalty(v_cur, u)
        value += penalty_weight * ov
        grad += penalty_weight * ogx
        if ridge > 0.0:
            value += 0.5 * ridge * float(np.sum((v_cur - 1.0) ** 2))
            grad += ridge * (v_cur - 1.0)
        return value, grad

    def scale_step(u_cur, v_cur):
        # the data term is invariant under (u, v) -> (cu, v/c) and with a
        # ridge the alternation crawls along that direction, so minimize
        # over the scale exactly; penalties are quadratic in each argument
        a_coef = cross_penalties(u_cur)[0]
        b_coef = cross_penalties(v_cur)[0] + penalty_weight * _penalty(v_cur, u_cur)[0]

        def along(log_c):
            c = np.exp(log_c)
            return (
                a_coef * c**2
                + b_coef / c**2
                + 0.5 * ridge * float(np.sum((v_cur / c - 1.0) ** 2))
            )

        result = minimize_scalar(along, bounds=(-7.0, 7.0), method="bounded")
        if result.fun < along(0.0):
            c = float(np.exp(result.x))
            return u_cur * c, v_cur / c
        return u_cur, v_cur

    trace = []
    descent_ok = True
    flat_sweeps = 0
    for _ in range(max_outer):
        before_u = f_u(u)[0]
        u = _solve_inner(f_u, u, tol, max_inner)
        after_u = f_u(u)[0]
        before_v = f_v(v)[0]
        v = _solve_inner(f_v, v, tol, max_inner)
        after_v = f_v(v)[0]
        if after_u > before_u + 1e-9 or after_v > before_v + 1e-9:
            descent_ok = False
        if ridge > 0.0:
            u, v = scale_step(u, v)
            after_v = f_v(v)[0]
        trace.append(after_v)
        # the cross products are scale invariant (u, v) -> (cu, v/c), so the
        # penalized objective can creep along a flat valley indefinitely;
        # stop once per-sweep progress stays negligible at the objective's
        # scale for several sweeps (single flat sweeps occur mid-descent)
        if len(trace) >= 2 and trace[-2] - trace[-1] < _OUTER_TOL * max(
            1.0, abs(trace[-2])
        ):
            flat_sweeps += 1
            if flat_sweeps >= _OUTER_PATIENCE:
                break
        else:
            flat_sweeps = 0
    else:
        raise ConvergenceFailure(
            f"component fit did not settle within {max_outer} alternations",
            last_iterate=(u, v),
            diagnostics={"objective_trace": trace},
        )
    return u, v, {"objective_trace": trace, "descent_ok": descent_ok}


def _logit_residual(target, mask, a_prev, loss_space):
    """Remaining skew-symmetric signal in the model's output space."""
    if loss_space == "logit-mse":
        remaining = target - a_prev
    elif loss_space == "bce-sigmoid":
        clipped = np.clip(target, DEFAULT_CLIP_EPS, 1.0 - DEFAULT_CLIP_EPS)
        remaining = logit(clipped) - a_prev
    else:  # prob-mse
        remaining = (target - 0.5) - a_prev
    return np.where(mask, remaining, 0.0)


def _schur_init(residual, rng):
    """Top cross-product pair of the skew residual as a warm start.

    Random starts can settle in sign-flipped local optima of the penalized
    objective; the dominant pair of the residual's normal decomposition
    starts the alternation in the right basin.  Falls back to a random
    start when the residual carries no signal.
    """
    n = residual.shape[0]
    skew = 0.5 * (residual - residual.T)
    t, q = schur(skew, output="real")
    off = np.diagonal(t, offset=1)
    best = int(np.argmax(np.abs(off))) if len(off) else 0
    lam = abs(off[best]) if len(off) else 0.0
    if lam <= 1e-12:
        u0 = rng.normal(0.0, 0.1 / np.sqrt(n), size=n)
        v0 = rng.normal(0.0, 0.1 / np.sqrt(n), size=n)
        return u0, v0
    scale = np.sqrt(lam)
    if off[best] > 0:
        return scale * q[:, best], scale * q[:, best + 1]
    return scale * q[:, best + 1], scale * q[:, best]


def _orthogonality_residuals(us, vs):
    """Normalized inner products: within-pair and across components."""
    residuals = []
    k = us.shape[1]
    for l in range(k):
        nu, nv = np.linalg.norm(us[:, l]), np.linalg.norm(vs[:, l])
        residuals.append(abs(us[:, l] @ vs[:, l]) / (nu * nv))
        for m in range(l):
            residuals.append(
                abs(us[:, l] @ us[:, m]) / (nu * np.linalg.norm(us[:, m]))
            )
            residuals.append(
                abs(vs[:, l] @ vs[:, m]) / (nv * np.linalg.norm(vs[:, m]))
            )
    return residuals


def fit_components(
    target,
    mask,
    loss_space,
    k,
    seed,
    *,
    tol=1e-8,
    max_inner=200,
    max_outer=1000,
    penalty_weight=1.0,
    tol_orth=1e-4,
    ridge=0.0,
):
    """Greedy extraction of k components (largest first), each refit with a
    10x stronger penalty when orthogonality residuals exceed tol_orth."""
    n = target.shape[0]
    rng = np.random.default_rng(seed)
    a_prev = np.zeros((n, n))
    us = np.zeros((n, k))
    vs = np.zeros((n, k))
    traces, warn_list = [], []
    for l in range(k):
        u0, v0 = _schur_init(_logit_residual(target, mask, a_prev, loss_space), rng)
        prior_us = [us[:, m] for m in range(l)]
        prior_vs = [vs[:, m] for m in range(l)]
        component_ridge = ridge if l == 0 else 0.0
        weight = penalty_weight
        best = None
        attempts = 0
        for attempt in range(MAX_PENALTY_RETRIES + 1):
            attempts = attempt + 1
            try:
                u, v, diag = fit_component(
                    target,
                    mask,
                    a_prev,
                    prior_us,
                    prior_vs,
                    loss_space,
                    u0,
                    v0,
                    tol=tol,
                    max_inner=max_inner,
                    max_outer=max_outer,
                    penalty_weight=weight,
                    ridge=component_ridge,
                )
            except ConvergenceFailure:
                # a retry at a stiffer penalty may creep along the scale
                # invariance of the cross product; keep the best settled fit
                if best is None:
                    raise
                warn_list.append(
                    f"component {l + 1}: penalty retry at weight {weight:g} "
                    "did not settle; keeping the previous fit"
                )
                break
            trial_us, trial_vs = us.copy(), vs.copy()
            trial_us[:, l], trial_vs[:, l] = u, v
            residual = max(_orthogonality_residuals(trial_us[:, : l + 1], trial_vs[:, : l + 1]))
            if best is None or residual < best[3]:
                best = (u, v, diag, residual)
            if residual <= tol_orth:
                break
            weight *= 10.0
        u, v, diag, residual = best
        if residual > tol_orth:
            warn_list.append(
                f"component {l + 1}: orthogonality residual {residual:.2e} "
                f"above tol_orth {tol_orth:.1e} after {attempts} attempts"
            )
        us[:, l], vs[:, l] = u, v
        a_prev += np.outer(u, v) - np.outer(v, u)
        traces.append(diag["objective_trace"])
        if not diag["descent_ok"]:
            warn_list.append(f"component {l + 1}: non-monotone alternation detected")
    return us, vs, traces, warn_list


def _canonicalize(us, vs):
    """Sort components by magnitude and fix the orientation convention.

    Each component is rotated about the origin (cross products, hence
    predictions, are invariant) so that the principal axis of its point
    cloud lies along the u direction; a purely additive component then
    serializes with a near-constant v.  Signs are fixed by sum v >= 0,
    ties broken by sum u >= 0.
    """
    lambdas = np.linalg.norm(us, axis=0) * np.linalg.norm(vs, axis=0)
    order = np.argsort(-lambdas)
    us, vs, lambdas = us[:, order].copy(), vs[:, order].copy(), lambdas[order]
    for l in range(us.shape[1]):
        points = np.column_stack((us[:, l], vs[:, l]))
        centered = points - points.mean(axis=0)
        _, eigvecs = np.linalg.eigh(centered.T @ centered)
        d = eigvecs[:, -1]  # principal direction
        us[:, l] = d[0] * points[:, 0] + d[1] * points[:, 1]
        vs[:, l] = -d[1] * points[:, 0] + d[0] * points[:, 1]
        sv, su = vs[:, l].sum(), us[:, l].sum()
        if sv < 0.0 or (sv == 0.0 and su < 0.0):
            us[:, l] = -us[:, l]
            vs[:, l] = -vs[:, l]
    return us, vs, lambdas


# ---------------------------------------------------------------------------
# estimators
# ---------------------------------------------------------------------------

class DiscModel(BaseEstimator):
    """Disc decomposition rating model.

    Fitted attributes: players_, us_ and vs_ with shape (n, k), lambdas_,
    report_.  ``loss_space`` selects the fit: 'bce-sigmoid' (default, robust
    to 0/1 probabilities), 'logit-mse' (clips first), or 'prob-mse'
    (probability-space factorization, the Schur-style baseline).
    """

    model_name = "disc"

    def __init__(
        self,
        k=1,
        loss_space="bce-sigmoid",
        clip_eps=DEFAULT_CLIP_EPS,
        tol=1e-8,
        max_inner=200,
        max_outer=1000,
        penalty_weight=1.0,
        tol_orth=1e-4,
        ridge=0.0,
        seed=0,
    ):
        self.k = k
        self.loss_space = loss_space
        self.clip_eps = clip_eps
        self.tol = tol
        self.max_inner = max_inner
        self.max_outer = max_outer
        self.penalty_weight = penalty_weight
        self.tol_orth = tol_orth
        self.ridge = ridge
        self.seed = seed

    # subclasses override the residualization and prediction offset
    def _target(self, dense):
        if self.loss_space == "logit-mse":
            a, _ = logit_transform(dense, self.clip_eps)
            return a
        return dense.matrix

    def fit(self, obs):
        if self.loss_space not in LOSS_SPACES:
            raise InvalidConfig(f"loss_space must be one of {LOSS_SPACES}")
        if self.k < 1:
            raise InvalidConfig("k must be >= 1")
        if isinstance(obs, DensePayoff):
            obs = obs.to_observed()
        n = obs.n_players
        if self.k > n // 2:
            raise InvalidConfig(f"k must be <= floor(n/2) = {n // 2}")
        start = time.perf_counter()
        dense = obs.to_dense()
        mask = dense.mask & ~np.eye(n, dtype=bool)
        target = self._target(dense)
        us, vs, traces, warn_list = fit_components(
            target,
            mask,
            self.loss_space,
            self.k,
            self.seed,
            tol=self.tol,
            max_inner=self.max_inner,
            max_outer=self.max_outer,
            penalty_weight=self.penalty_weight,
            tol_orth=self.tol_orth,
            ridge=self.ridge,
        )
        us, vs, lambdas = _canonicalize(us, vs)
        self.players_ = obs.players
        self.us_, self.vs_, self.lambdas_ = us, vs, lambdas
        self.report_ = FitReport(
            model=self.model_name,
            n_params=self._n_params(n),
            config=self.get_params(),
            objective_trace=[t[-1] for t in traces],
            orthogonality_residuals=_orthogonality_residuals(us, vs),
            wall_time=time.perf_counter() - start,
            seed=self.seed,
            warnings=warn_list,
        )
        return self

    def _n_params(self, n):
        return 2 * self.k * n

    def _index(self, player) -> int:
        if isinstance(player, (int, np.integer)):
            if not 0 <= player < len(self.players_):
                raise UnknownPlayer(f"player index {player} out of range")
            return int(player)
        try:
            return self.players_.index(player)
        except ValueError:
            raise UnknownPlayer(f"unknown player {player!r}") from None

    def _score(self, i, j) -> float:
        return float(self.us_[i] @ self.vs_[j] - self.vs_[i] @ self.us_[j])

    def _offset(self, i, j) -> float:
        return 0.0

    def predict_proba(self, i, j) -> float:
        """Probability that i beats j; symmetric by construction."""
        i, j = self._index(i), self._index(j)
        score = self._score(i, j) + self._offset(i, j)
        if self.loss_space == "prob-mse":
            return 0.5 + float(np.clip(score, -0.5, 0.5))
        return float(sigmoid(score))

    def component_points(self, l: int = 1) -> np.ndarray:
        """(u_i, v_i) points of the l-th component (1-based)."""
        if not 1 <= l <= self.k:
            raise InvalidConfig(f"component must be in 1..{self.k}")
        return np.column_stack((self.us_[:, l - 1], self.vs_[:, l - 1]))

    def classify_main_component(self) -> GameClassification:
        if len(self.players_) < 3:
            raise DegenerateGame("classification needs at least 3 players")
        return classify_disc(self.component_points(1))

    def to_strength_consistency(self) -> "StrengthConsistency":
        """Strength/consistency view of the main component (transitive only)."""
        rotated = reparametrize_positive(self.component_points(1))
        consistency = rotated[:, 1]
        return StrengthConsistency(
            strength=rotated[:, 0] / consistency, consistency=consistency
        )

    def to_json_dict(self) -> dict:
        return {
            "model": self.model_name,
            "loss_space": self.loss_space,
            "k": self.k,
            "players": list(self.players_),
            "components": [
                {"u": self.us_[:, l].tolist(), "v": self.vs_[:, l].tolist()}
                for l in range(self.k)
            ],
            "ridge": self.ridge,
            "seed": self.seed,
        }

    @classmethod
    def from_json_dict(cls, payload: dict) -> "DiscModel":
        model = cls(
            k=int(payload["k"]),
            loss_space=payload["loss_space"],
            ridge=float(payload.get("ridge", 0.0)),
            seed=int(payload.get("seed", 0)),
        )
        model.players_ = tuple(payload["players"])
        model.us_ = np.column_stack([np.asarray(c["u"], dtype=float) for c in payload["components"]])
        model.vs_ = np.column_stack([np.asarray(c["v"], dtype=float) for c in payload["components"]])
        model.lambdas_ = np.linalg.norm(model.us_, axis=0) * np.linalg.norm(model.vs_, axis=0)
        model.report_ = FitReport(model=model.model_name, n_params=model._n_params(len(model.players_)))
        return model


class MEloModel(DiscModel):
    """Baseline with a fixed additive part from probability-space row means.

    The residual P - (pbar_i - pbar_j) is factorized in probability space;
    predictions add the fixed part back and clamp symmetrically.
    """

    model_name = "melo"

    def __init__(
        self,
        k=1,
        tol=1e-8,
        max_inner=200,
        max_outer=1000,
        penalty_weight=1.0,
        tol_orth=1e-4,
        ridge=0.0,
        seed=0,
    ):
        super().__init__(
            k=k,
            loss_space="prob-mse",
            tol=tol,
            max_inner=max_inner,
            max_outer=max_outer,
            penalty_weight=penalty_weight,
            tol_orth=tol_orth,
            ridge=ridge,
            seed=seed,
        )

    def _target(self, dense):
        counts = dense.mask.sum(axis=1)
        row_means = np.where(dense.mask, dense.matrix, 0.0).sum(axis=1) / counts
        self.base_ = row_means
        return dense.matrix - (row_means[:, None] - row_means[None, :])

    def _offset(self, i, j) -> float:
        return float(self.base_[i] - self.base_[j])

    def predict_proba(self, i, j) -> float:
        i, j = self._index(i), self._index(j)
        score = self._score(i, j) + self._offset(i, j)
        return 0.5 + float(np.clip(score, -0.5, 0.5))

    def _n_params(self, n):
        return (2 * self.k + 1) * n

    def to_json_dict(self) -> dict:
        payload = super().to_json_dict()
        payload["base"] = self.base_.tolist()
        return payload

    @classmethod
    def from_json_dict(cls, payload: dict) -> "MEloModel":
        model = cls(
            k=int(payload["k"]),
            ridge=float(payload.get("ridge", 0.0)),
            seed=int(payload.get("seed", 0)),
        )
        model.players_ = tuple(payload["players"])
        model.us_ = np.column_stack([np.asarray(c["u"], dtype=float) for c in payload["components"]])
        model.vs_ = np.column_stack([np.asarray(c["v"], dtype=float) for c in payload["components"]])
        model.lambdas_ = np.linalg.norm(model.us_, axis=0) * np.linalg.norm(model.vs_, axis=0)
        model.base_ = np.asarray(payload["base"], dtype=float)
        model.report_ = FitReport(model=model.model_name, n_params=model._n_params(len(model.players_)))
        return model


# ---------------------------------------------------------------------------
# strength / consistency view and online updates
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class StrengthConsistency:
    """Reparametrized transitive view: one strength and one positive
    consistency per player."""

    strength: np.ndarray
    consistency: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "strength", np.asarray(self.strength, dtype=float))
        object.__setattr__(self, "consistency", np.asarray(self.consistency, dtype=float))
        if np.any(self.consistency <= 0.0):
            raise NotTransitive("consistency must be strictly positive")

    def predict_proba(self, i: int, j: int) -> float:
        s, c = self.strength, self.consistency
        return float(sigmoid(c[i] * c[j] * (s[i] - s[j])))


def update_disc_online(
    sc: StrengthConsistency, i: int, j: int, outcome: float, eta: float,
    consistency_floor: float = CONSISTENCY_FLOOR,
) -> StrengthConsistency:
    """One online step of the strength/consistency update for both players.

    Both players are updated from the pre-update state; consistencies driven
    to zero or below are clamped at ``consistency_floor`` with a warning.
    """
    if eta <= 0:
        raise ValueError("eta must be positive")
    s = sc.strength.copy()
    c = sc.consistency.copy()
    p_hat = sc.predict_proba(i, j)
    innovation = outcome - p_hat
    s[i] = sc.strength[i] + eta * innovation * sc.consistency[i] * sc.consistency[j]
    c[i] = sc.consistency[i] + eta * innovation * sc.consistency[j] * (
        sc.strength[i] - sc.strength[j]
    )
    s[j] = sc.strength[j] - eta * innovation * sc.consistency[i] * sc.consistency[j]
    c[j] = sc.consistency[j] + eta * innovation * sc.consistency[i] * (
        sc.strength[i] - sc.strength[j]
    )
    for idx in (i, j):
        if c[idx] <= 0.0:
            _warnings.warn(
                f"consistency of player {idx} crossed zero; clamped to {consistency_floor}",
                RuntimeWarning,
                stacklevel=2,
            )
            c[idx] = consistency_floor
    return StrengthConsistency(strength=s, consistency=c)


# ---------------------------------------------------------------------------
# ridge cross-validation
# ---------------------------------------------------------------------------

def cross_validate_ridge(obs: ObservedPayoff, model: DiscModel, lambda_grid, folds=5, seed=0):
    """Pick the ridge weight minimizing mean held-out probability-space MSE.

    Entry-wise folds over unordered pairs; deterministic given seed.  Ties
    resolve toward the smaller weight.
    """
    grid = sorted(lambda_grid)
    if not grid:
        raise InvalidConfig("lambda_grid must be non-empty")
    if folds < 2:
        raise InvalidConfig("folds must be >= 2")
    keys = sorted(obs.entries)
    if len(keys) < folds:
        raise InvalidConfig("need at least one entry per fold")
    rng = np.random.default_rng(seed)
    order = rng.permutation(len(keys))
    fold_of = np.empty(len(keys), dtype=int)
    fold_of[order] = np.arange(len(keys)) % folds

    best_lambda, best_score = None, np.inf
    for lam in grid:
        fold_scores = []
        for fold in range(folds):
            train_entries = {
                keys[idx]: obs.entries[keys[idx]]
                for idx in range(len(keys))
                if fold_of[idx] != fold
            }
            test_entries = {
                keys[idx]: obs.entries[keys[idx]]
                for idx in range(len(keys))
                if fold_of[idx] == fold
            }
            train = ObservedPayoff(players=obs.players, entries=train_entries)
            candidate = copy.deepcopy(model)
            candidate.set_params(ridge=lam)
            candidate.fit(train)
            errors = [
                (candidate.predict_proba(i, j) - p) ** 2
                for (i, j), (p, _) in test_entries.items()
            ]
            fold_scores.append(float(np.mean(errors)))
        score = float(np.mean(fold_scores))
        if score < best_score - 1e-15:
            best_lambda, best_score = lam, score
    return best_lambda
