"""Majority-cluster aggregation checked against a from-scratch
agglomerative oracle (pure python, recomputing linkage distances from
the raw pairwise matrix at every step)."""

from __future__ import annotations

import math
import random

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from crossmodal.features.cluster import (
    cluster_assignments,
    cluster_majority_mean,
    majority_cluster,
)
from crossmodal.features.types import EmbeddingVector


def vec(values, provider="test") -> EmbeddingVector:
    return EmbeddingVector.from_raw(values, provider)


def random_vectors(rng: random.Random, n: int, dim: int) -> list[EmbeddingVector]:
    out = []
    for _ in range(n):
        raw = [rng.gauss(0, 1) for _ in range(dim)]
        out.append(vec(raw))
    return out


# --- oracle -----------------------------------------------------------------


def _cos_dist(a, b) -> float:
    dot = sum(x * y for x, y in zip(a, b))
    na = math.sqrt(sum(x * x for x in a))
    nb = math.sqrt(sum(y * y for y in b))
    return 1.0 - dot / (na * nb)


def oracle_partition(vectors: list[tuple[float, ...]], threshold: float = 0.5):
    """Greedy average-linkage agglomeration, smallest average pairwise
    cosine distance first, merging while it stays <= threshold."""
    order = sorted(range(len(vectors)), key=lambda i: vectors[i])
    points = [vectors[i] for i in order]
    clusters: list[tuple[int, ...]] = [(i,) for i in range(len(points))]
    while len(clusters) > 1:
        candidates = []
        for i in range(len(clusters)):
            for j in range(i + 1, len(clusters)):
                dists = [
                    _cos_dist(points[a], points[b])
                    for a in clusters[i]
                    for b in clusters[j]
                ]
                d = sum(dists) / len(dists)
                candidates.append((d, clusters[i][0], clusters[j][0], i, j))
        d, _, _, i, j = min(candidates)
        if d > threshold:
            break
        merged = tuple(sorted(clusters[i] + clusters[j]))
        clusters = [c for k, c in enumerate(clusters) if k not in (i, j)]
        clusters.append(merged)
        clusters.sort(key=lambda c: c[0])
    return clusters


def oracle_majority_mean(vectors: list[tuple[float, ...]], threshold: float = 0.5):
    order = sorted(range(len(vectors)), key=lambda i: vectors[i])
    points = [vectors[i] for i in order]
    clusters = oracle_partition(vectors, threshold)

    def intra(cluster):
        if len(cluster) < 2:
            return 0.0
        dists = [
            _cos_dist(points[a], points[b])
            for a in cluster
            for b in cluster
            if a < b
        ]
        return sum(dists) / len(dists)

    winner = sorted(clusters, key=lambda c: (-len(c), intra(c), c[0]))[0]
    dim = len(points[0])
    mean = [sum(points[m][d] for m in winner) / len(winner) for d in range(dim)]
    norm = math.sqrt(sum(v * v for v in mean))
    return winner, tuple(v / norm for v in mean)


# --- behaviour --------------------------------------------------------------


def test_single_vector_returns_itself():
    v = vec([0.6, 0.8])
    out = cluster_majority_mean([v])
    assert np.allclose(out.values, v.values)


def test_identical_vectors_collapse_to_one_cluster():
    v = vec([1.0, 0.0, 0.0])
    out = cluster_majority_mean([v, v, v])
    assert np.allclose(out.values, v.values)
    assert len(cluster_assignments([v, v, v])) == 1


def test_majority_beats_orthogonal_minority():
    # five small perturbations of e1, two of e2; e1 and e2 orthogonal
    rng = random.Random(7)
    e1_group = [
        vec([1.0, rng.uniform(-0.05, 0.05), rng.uniform(-0.05, 0.05)]) for _ in range(5)
    ]
    e2_group = [vec([rng.uniform(-0.05, 0.05), 1.0, 0.0]) for _ in range(2)]
    vectors = e1_group + e2_group
    out = cluster_majority_mean(vectors)

    expected = np.mean([v.as_array() for v in e1_group], axis=0)
    expected = expected / np.linalg.norm(expected)
    assert np.allclose(out.values, expected, atol=1e-12)

    _, winner = majority_cluster(vectors)
    assert len(winner) == 5


def test_empty_input_rejected():
    with pytest.raises(ValueError):
        cluster_majority_mean([])


def test_mixed_dims_rejected():
    with pytest.raises(ValueError):
        cluster_majority_mean([vec([1.0, 0.0]), vec([1.0, 0.0, 0.0])])


def test_mixed_providers_rejected():
    with pytest.raises(ValueError):
        cluster_majority_mean([vec([1.0, 0.0], "a"), vec([0.0, 1.0], "b")])


def test_matches_oracle_on_random_inputs():
    rng = random.Random(1234)
    for _ in range(300):
        n = rng.randint(1, 8)
        dim = rng.randint(2, 6)
        vectors = random_vectors(rng, n, dim)
        tuples = [v.values for v in vectors]

        got_partition = cluster_assignments(vectors)
        want_partition = oracle_partition(tuples)
        assert sorted(got_partition) == sorted(want_partition)

        want_winner, want_mean = oracle_majority_mean(tuples)
        got = cluster_majority_mean(vectors)
        assert np.allclose(got.values, want_mean, atol=1e-9)


@settings(max_examples=60, deadline=None)
@given(st.data())
def test_permutation_invariance(data):
    rng = random.Random(data.draw(st.integers(0, 10_000)))
    n = data.draw(st.integers(min_value=1, max_value=7))
    vectors = random_vectors(rng, n, 4)
    baseline = cluster_majority_mean(vectors)
    permutation = data.draw(st.permutations(vectors))
    permuted = cluster_majority_mean(list(permutation))
    assert permuted.values == baseline.values


def test_majority_cluster_is_largest():
    rng = random.Random(99)
    for _ in range(100):
        vectors = random_vectors(rng, rng.randint(1, 8), 3)
        clusters, winner = majority_cluster(vectors)
        assert len(winner) == max(len(c) for c in clusters)
