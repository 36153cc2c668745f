"""Transitivity/cyclicity of planar embeddings and payoff matrices.

A disc embedding is cyclic exactly when the origin lies strictly inside the
convex hull of the player points; otherwise it is transitive and can be
rotated so that every second coordinate is positive.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateGame, InvalidRecord, NotTransitive, OriginPlayer
from .payoff import DensePayoff

DEFAULT_PERTURB_EPS = 1e-6


class Verdict(enum.Enum):
    FULLY_TRANSITIVE = "fully_transitive"
    FULLY_CYCLIC = "fully_cyclic"


class OriginLocation(enum.Enum):
    INTERIOR = "interior"
    EXTERIOR = "exterior"
    ON_BORDER_PERTURBED = "on_border_perturbed"


@dataclass(frozen=True)
class GameClassification:
    verdict: Verdict
    origin_location: OriginLocation
    witness: tuple | None = None


def convex_hull(points: np.ndarray) -> np.ndarray:
    """Andrew's monotone chain; returns hull vertices in CCW order."""
    pts = np.unique(np.asarray(points, dtype=float), axis=0)
    if len(pts) <= 2:
        return pts
    order = np.lexsort((pts[:, 1], pts[:, 0]))
    pts = pts[order]

    def cross(o, a, b):
        return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])

    lower = []
    for p in pts:
        while len(lower) >= 2 and cross(lower[-2], lower[-1], p) <= 0:
            lower.pop()
        lower.append(p)
    upper = []
    for p in pts[::-1]:
        while len(upper) >= 2 and cross(upper[-2], upper[-1], p) <= 0:
            upper.pop()
        upper.append(p)
    return np.array(lower[:-1] + upper[:-1])


def _segment_distance(point, a, b) -> float:
    ab = b - a
    denom = float(ab @ ab)
    if denom == 0.0:
        return float(np.linalg.norm(point - a))
    t = np.clip((point - a) @ ab / denom, 0.0, 1.0)
    return float(np.linalg.norm(point - (a + t * ab)))


def _hull_border_distance(hull: np.ndarray) -> float:
    origin = np.zeros(2)
    m = len(hull)
    if m == 1:
        return float(np.linalg.norm(hull[0]))
    return min(
        _segment_distance(origin, hull[i], hull[(i + 1) % m]) for i in range(m)
    )


def _origin_strictly_inside(hull: np.ndarray) -> bool:
    if len(hull) < 3:
        return False
    nxt = np.roll(hull, -1, axis=0)
    crosses = hull[:, 0] * nxt[:, 1] - hull[:, 1] * nxt[:, 0]
    return bool(np.all(crosses > 0.0))


def _cycle_witness(points: np.ndarray) -> tuple | None:
    # i beats j iff cross(p_i, p_j) > 0; lexicographically smallest triple
    n = len(points)
    beats = np.outer(points[:, 0], points[:, 1]) - np.outer(points[:, 1], points[:, 0]) > 0.0
    for i in range(n):
        for j in range(n):
            if i == j or not beats[i, j]:
                continue
            for k in range(n):
                if k in (i, j):
                    continue
                if beats[j, k] and beats[k, i]:
                    return (i, j, k)
    return None


def classify_disc(points, perturb_eps: float = DEFAULT_PERTURB_EPS) -> GameClassification:
    """Classify a planar disc embedding via the origin-in-hull criterion.

    If the origin sits within perturb_eps of the hull border, every point is
    pushed radially outward by the same relative amount and the test is
    re-run once; the result is then reported as OnBorder-perturbed.
    """
    points = np.asarray(points, dtype=float)
    if points.ndim != 2 or points.shape[1] != 2:
        raise InvalidRecord("points must be an (n, 2) array")
    if len(points) < 3:
        raise DegenerateGame("hull classification needs at least 3 points")
    norms = np.linalg.norm(points, axis=1)
    if np.any(norms == 0.0):
        raise OriginPlayer("a player sits exactly at the origin")

    hull = convex_hull(points)
    location = None
    if _hull_border_distance(hull) < perturb_eps:
        points = points * (1.0 + perturb_eps)
        hull = convex_hull(points)
        location = OriginLocation.ON_BORDER_PERTURBED

    inside = _origin_strictly_inside(hull)
    if location is None:
        location = OriginLocation.INTERIOR if inside else OriginLocation.EXTERIOR
    if inside:
        return GameClassification(
            verdict=Verdict.FULLY_CYCLIC,
            origin_location=location,
            witness=_cycle_witness(points),
        )
    return GameClassification(verdict=Verdict.FULLY_TRANSITIVE, origin_location=location)


def is_fully_transitive(payoff: DensePayoff) -> bool:
    """True iff no beat-triple is violated (ties count as neither beating)."""
    if not payoff.fully_observed:
        raise InvalidRecord("transitivity check requires a fully observed payoff")
    beats = payoff.matrix > 0.5
    two_step = (beats @ beats) > 0
    return not np.any(two_step & ~beats & ~np.eye(payoff.n_players, dtype=bool))


def find_cycle(payoff: DensePayoff) -> tuple | None:
    """Lexicographically smallest 3-cycle (i, j, k), or None."""
    if not payoff.fully_observed:
        raise InvalidRecord("cycle search requires a fully observed payoff")
    beats = payoff.matrix > 0.5
    n = payoff.n_players
    for i in range(n):
        for j in range(n):
            if i == j or not beats[i, j]:
                continue
            for k in range(n):
                if k in (i, j):
                    continue
                if beats[j, k] and beats[k, i]:
                    return (i, j, k)
    return None


def reparametrize_positive(points) -> np.ndarray:
    """Rotate a transitive embedding so every second coordinate is positive.

    The rotation maps the direction from the origin to the nearest hull point
    onto the +v axis; cross products (hence payoffs) are preserved.
    """
    points = np.asarray(points, dtype=float)
    if points.ndim != 2 or points.shape[1] != 2:
        raise InvalidRecord("points must be an (n, 2) array")
    if np.any(np.linalg.norm(points, axis=1) == 0.0):
        raise OriginPlayer("a player sits exactly at the origin")
    hull = convex_hull(points)
    if _origin_strictly_inside(hull):
        raise NotTransitive("cannot reparametrize a cyclic embedding")
    origin = np.zeros(2)
    best, best_dist = None, np.inf
    m = len(hull)
    for i in range(max(m, 1)):
        a = hull[i]
        b = hull[(i + 1) % m] if m > 1 else hull[i]
        ab = b - a
        denom = float(ab @ ab)
        t = 0.0 if denom == 0.0 else float(np.clip(-(a @ ab) / denom, 0.0, 1.0))
        candidate = a + t * ab
        dist = float(np.linalg.norm(candidate - origin))
        if dist < best_dist:
            best, best_dist = candidate, dist
    direction = best / best_dist
    # rotation with rows (b, a) has determinant +1, so cross products survive
    rotated = np.column_stack(
        (
            direction[1] * points[:, 0] - direction[0] * points[:, 1],
            direction[0] * points[:, 0] + direction[1] * points[:, 1],
        )
    )
    if not np.all(rotated[:, 1] > 0.0):
        raise NotTransitive("embedding is borderline; no strictly positive reparametrization")
    return rotated
