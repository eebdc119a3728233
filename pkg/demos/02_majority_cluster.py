"""Why face evidence is aggregated through a majority cluster.

A crawl for a person usually returns several images of them plus the
odd bystander or mismatch. Averaging everything would drag the profile
toward the outliers; clustering first and keeping the largest cluster's
mean does not.
"""

import numpy as np

from crossmodal.features import EmbeddingVector, cluster_majority_mean
from crossmodal.features.cluster import majority_cluster
from crossmodal.scoring import cosine

rng = np.random.default_rng(7)


def noisy(direction, scale=0.06):
    return EmbeddingVector.from_raw(direction + rng.normal(0, scale, size=len(direction)), "demo")


def main():
    person = np.array([1.0, 0.0, 0.0, 0.0])
    bystander = np.array([0.0, 1.0, 0.0, 0.0])

    faces = [noisy(person) for _ in range(5)] + [noisy(bystander) for _ in range(2)]
    clusters, winner = majority_cluster(faces)
    print(f"{len(faces)} face vectors -> {len(clusters)} clusters, majority size {len(winner)}")

    profile = cluster_majority_mean(faces)
    true_person = EmbeddingVector.from_raw(person, "demo")
    print(f"cosine(profile, true person)  = {cosine(profile, true_person):+.4f}")
    print(f"cosine(profile, bystander)    = {cosine(profile, EmbeddingVector.from_raw(bystander, 'demo')):+.4f}")

    naive = EmbeddingVector.from_raw(
        np.mean([f.as_array() for f in faces], axis=0), "demo"
    )
    print(f"naive mean of all faces would score {cosine(naive, true_person):+.4f} instead")


if __name__ == "__main__":
    main()
