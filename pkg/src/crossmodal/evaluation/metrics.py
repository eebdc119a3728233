"""Verification accuracy and collection-retrieval AUC.

Verification accuracy is strict: a tie between the untampered and the
tampered score counts as a failure. AUC follows the Mann-Whitney
convention and credits ties half a win.
"""

from __future__ import annotations

import numpy as np
from scipy.stats import rankdata


def verification_accuracy(pairs: list[tuple[float, float]]) -> float:
    """Fraction of (untampered, tampered) pairs where the untampered
    score is strictly higher."""
    if not pairs:
        raise ValueError("verification accuracy needs at least one pair")
    wins = sum(1 for untampered, tampered in pairs if untampered > tampered)
    return wins / len(pairs)


def auc(untampered_scores: list[float], tampered_scores: list[float]) -> float:
    """Rank-based AUC: (#pairs untampered > tampered + 0.5 * #ties)
    divided by |U| * |T|, computed via the rank-sum identity."""
    if not untampered_scores or not tampered_scores:
        raise ValueError("auc needs scores on both sides")
    u = np.asarray(untampered_scores, dtype=np.float64)
    t = np.asarray(tampered_scores, dtype=np.float64)
    ranks = rankdata(np.concatenate([u, t]), method="average")
    rank_sum_u = float(ranks[: len(u)].sum())
    u_statistic = rank_sum_u - len(u) * (len(u) + 1) / 2.0
    return u_statistic / (len(u) * len(t))
