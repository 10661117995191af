"""
Greedy user dropping driven by the covariance-overlap interference term.

Each user is scored by the interference it shares with the others
(``term2`` of the mean-interference decomposition by default) and the worst
offenders are removed one at a time, rescoring after every removal.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .channel import UserProfile
from .errors import ParameterError
from .interference import mean_interference

__all__ = ["DropDecision", "pairwise_interference", "rank_users_by_term2", "drop_users"]

METRICS = ("term2", "total")
AGGREGATES = ("sum", "max")


@dataclass(frozen=True)
class DropDecision:
    dropped_indices: tuple[int, ...]
    retained_indices: tuple[int, ...]
    scores: np.ndarray


def pairwise_interference(users: Sequence[UserProfile], metric: str = "term2") -> np.ndarray:
    """Symmetric ``L x L`` matrix of pairwise mean interference (zero diagonal)."""
    if metric not in METRICS:
        raise ParameterError(f"metric must be one of {METRICS}, got {metric!r}")
    l = len(users)
    p = np.zeros((l, l))
    for k in range(l):
        for j in range(k + 1, l):
            br = mean_interference(users[k], users[j])
            p[k, j] = p[j, k] = br.term2 if metric == "term2" else br.total
    return p


def _scores(p: np.ndarray, aggregate: str) -> np.ndarray:
    if aggregate == "sum":
        return p.sum(axis=1)
    return p.max(axis=1) if p.shape[0] > 1 else np.zeros(p.shape[0])


def rank_users_by_term2(users: Sequence[UserProfile], metric: str = "term2", aggregate: str = "sum") -> np.ndarray:
    """
    Per-user score ``sum_{l != k} term2(k, l)``.

    ``aggregate="max"`` scores by the single worst pair instead, and
    ``metric="total"`` uses the full mean interference.
    """
    if len(users) < 2:
        raise ParameterError("ranking needs at least two users")
    if aggregate not in AGGREGATES:
        raise ParameterError(f"aggregate must be one of {AGGREGATES}, got {aggregate!r}")
    return _scores(pairwise_interference(users, metric), aggregate)


def drop_users(users: Sequence[UserProfile], n_drop: int, metric: str = "term2", aggregate: str = "sum") -> DropDecision:
    """
    Remove ``n_drop`` users greedily, highest score first.

    Scores are recomputed on the retained set after each removal; ties go
    to the lowest index.  ``scores`` in the result are the initial scores
    over all users.
    """
    l = len(users)
    if not 0 <= n_drop < l:
        raise ParameterError(f"n_drop must satisfy 0 <= n_drop < L = {l}, got {n_drop}")
    if aggregate not in AGGREGATES:
        raise ParameterError(f"aggregate must be one of {AGGREGATES}, got {aggregate!r}")
    p = pairwise_interference(users, metric) if l > 1 else np.zeros((l, l))
    initial = _scores(p, aggregate)
    retained = list(range(l))
    dropped = []
    for _ in range(n_drop):
        sub = p[np.ix_(retained, retained)]
        worst = retained[int(np.argmax(_scores(sub, aggregate)))]
        retained.remove(worst)
        dropped.append(worst)
    return DropDecision(tuple(dropped), tuple(retained), initial)
