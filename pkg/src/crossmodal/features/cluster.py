"""Agglomerative majority-cluster aggregation of face embeddings.

A person's reference crawl usually yields several faces of the queried
person plus the occasional bystander or mismatch. All face vectors are
clustered jointly; the mean of the largest cluster represents the person
and outliers fall into smaller clusters that are ignored.

Algorithm: average-linkage agglomerative clustering under cosine
distance. Pairs of clusters are merged while the smallest average
pairwise distance is <= ``threshold`` (default 0.5). Inputs are brought
into canonical lexicographic order first, which makes the result
invariant under permutation of the input list even when merge distances
tie.
"""

from __future__ import annotations

import numpy as np

from .types import EmbeddingVector

DEFAULT_MERGE_THRESHOLD = 0.5


def _canonical_order(rows: np.ndarray) -> list[int]:
    """Indices that sort rows lexicographically."""
    return sorted(range(rows.shape[0]), key=lambda i: tuple(rows[i]))


def cluster_assignments(
    vectors: list[EmbeddingVector] | tuple[EmbeddingVector, ...],
    *,
    threshold: float = DEFAULT_MERGE_THRESHOLD,
) -> list[tuple[int, ...]]:
    """Cluster vectors and return the partition as tuples of canonical
    indices (positions after lexicographic reordering), sorted by their
    smallest member."""
    if not vectors:
        raise ValueError("cannot cluster an empty vector list")
    dims = {v.dim for v in vectors}
    if len(dims) != 1:
        raise ValueError(f"vectors disagree on dim: {sorted(dims)}")

    rows = np.stack([v.as_array() for v in vectors])
    order = _canonical_order(rows)
    rows = rows[order]
    n = rows.shape[0]

    # unit-norm inputs: cosine distance reduces to 1 - dot
    dist = 1.0 - rows @ rows.T
    np.fill_diagonal(dist, 0.0)

    clusters: list[tuple[int, ...]] = [(i,) for i in range(n)]
    while len(clusters) > 1:
        best_pair = None
        best_d = None
        for a in range(len(clusters)):
            for b in range(a + 1, len(clusters)):
                block = dist[np.ix_(clusters[a], clusters[b])]
                d = float(block.mean())
                if best_d is None or d < best_d:
                    best_d = d
                    best_pair = (a, b)
        if best_d is None or best_d > threshold:
            break
        a, b = best_pair
        merged = tuple(sorted(clusters[a] + clusters[b]))
        clusters = [c for i, c in enumerate(clusters) if i not in (a, b)]
        clusters.append(merged)
        clusters.sort(key=lambda c: c[0])
    return clusters


def _mean_intra_distance(dist: np.ndarray, members: tuple[int, ...]) -> float:
    if len(members) < 2:
        return 0.0
    block = dist[np.ix_(members, members)]
    m = len(members)
    # mean over unordered pairs; diagonal is zero
    return float(block.sum() / (m * (m - 1)))


def majority_cluster(
    vectors: list[EmbeddingVector] | tuple[EmbeddingVector, ...],
    *,
    threshold: float = DEFAULT_MERGE_THRESHOLD,
) -> tuple[list[tuple[int, ...]], tuple[int, ...]]:
    """Return the full partition plus the majority cluster.

    Size ties break toward the tightest cluster (smallest mean
    intra-cluster cosine distance), then toward the smallest canonical
    member index.
    """
    clusters = cluster_assignments(vectors, threshold=threshold)
    rows = np.stack([v.as_array() for v in vectors])
    rows = rows[_canonical_order(rows)]
    dist = 1.0 - rows @ rows.T
    np.fill_diagonal(dist, 0.0)
    winner = min(
        clusters,
        key=lambda c: (-len(c), _mean_intra_distance(dist, c), c[0]),
    )
    return clusters, winner


def cluster_majority_mean(
    vectors: list[EmbeddingVector] | tuple[EmbeddingVector, ...],
    *,
    threshold: float = DEFAULT_MERGE_THRESHOLD,
) -> EmbeddingVector:
    """Mean vector of the majority cluster, re-normalized to unit length."""
    if not vectors:
        raise ValueError("cannot cluster an empty vector list")
    providers = {v.provider_id for v in vectors}
    if len(providers) != 1:
        raise ValueError(f"vectors disagree on provider: {sorted(providers)}")

    _, winner = majority_cluster(vectors, threshold=threshold)
    rows = np.stack([v.as_array() for v in vectors])
    rows = rows[_canonical_order(rows)]
    mean = rows[list(winner)].mean(axis=0)
    norm = float(np.linalg.norm(mean))
    if norm < 1e-12:
        raise ValueError("majority cluster mean is degenerate (zero vector)")
    return EmbeddingVector.from_raw(mean, providers.pop())
