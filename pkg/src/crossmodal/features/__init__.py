"""Visual feature extraction: embedding providers, face detection, and
majority-cluster aggregation of face vectors."""

from .types import (
    EmbeddingVector,
    EntityVisualProfile,
    FaceDetection,
    ImagePayload,
    Modality,
    ProviderDescriptor,
)
from .hashing import hash_embed
from .cluster import cluster_majority_mean
from .providers import EmbedProvider, FixtureEmbedProvider, HashEmbedProvider, load_fixture_vectors
from .detectors import FaceDetector, FixtureFaceDetector, FullFrameFaceDetector, load_fixture_detections
from .profiles import ProfileResult, build_person_profile, build_place_or_event_profile

__all__ = [
    "EmbeddingVector",
    "EntityVisualProfile",
    "FaceDetection",
    "ImagePayload",
    "Modality",
    "ProviderDescriptor",
    "hash_embed",
    "cluster_majority_mean",
    "EmbedProvider",
    "FixtureEmbedProvider",
    "HashEmbedProvider",
    "load_fixture_vectors",
    "FaceDetector",
    "FixtureFaceDetector",
    "FullFrameFaceDetector",
    "load_fixture_detections",
    "ProfileResult",
    "build_person_profile",
    "build_place_or_event_profile",
]
