"""Build per-entity visual profiles from reference image sets.

Persons: every face found in any reference image is embedded, all face
vectors are clustered jointly, and the majority-cluster mean becomes the
single profile vector. Locations and events keep one vector per
decodable reference image; aggregation happens at scoring time via the
maximum.

No-evidence (zero usable faces or images) is a first-class outcome, not
an error: the profile comes back ``None`` with an explanatory warning.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

from ..errors import ConfigurationError, CrossmodalError, FormatError, TransportError
from ..evidence.types import ReferenceImage, ReferenceImageSet
from .cluster import DEFAULT_MERGE_THRESHOLD, cluster_majority_mean
from .detectors import FaceDetector
from .providers import EmbedProvider
from .types import EmbeddingVector, EntityVisualProfile, ImagePayload, Modality, name_for_url

logger = logging.getLogger(__name__)


@dataclass
class ProfileResult:
    profile: EntityVisualProfile | None
    warnings: list[str] = field(default_factory=list)

    @property
    def no_evidence(self) -> bool:
        return self.profile is None


def payload_from_reference(ref: ReferenceImage) -> ImagePayload:
    return ImagePayload(
        content=ref.content,
        content_type=ref.content_type,
        name=name_for_url(ref.source_url),
    )


def build_person_profile(
    refset: ReferenceImageSet,
    detector: FaceDetector,
    provider: EmbedProvider,
    *,
    threshold: float = DEFAULT_MERGE_THRESHOLD,
) -> ProfileResult:
    """Detect and embed every reference face, then aggregate the majority
    cluster into one vector."""
    warnings: list[str] = []
    face_vectors: list[EmbeddingVector] = []
    for ref in refset.images:
        payload = payload_from_reference(ref)
        try:
            detections = detector.detect(payload)
        except FormatError as exc:
            warnings.append(f"reference {ref.source_url}: {exc}")
            continue
        for detection in detections:
            try:
                face_vectors.append(provider.embed(payload, bbox=detection.bbox))
            except (FormatError, TransportError, ConfigurationError) as exc:
                warnings.append(f"reference {ref.source_url}: {exc}")
    if not face_vectors:
        warnings.append(f"no usable faces in reference images for {refset.kb_id}")
        return ProfileResult(None, warnings)
    aggregated = cluster_majority_mean(face_vectors, threshold=threshold)
    profile = EntityVisualProfile(
        kb_id=refset.kb_id,
        modality=Modality.FACE,
        vectors=(aggregated,),
        warnings=tuple(warnings),
    )
    return ProfileResult(profile, warnings)


def build_place_or_event_profile(
    refset: ReferenceImageSet,
    modality: Modality,
    provider: EmbedProvider,
) -> ProfileResult:
    """One vector per decodable reference image; undecodable references
    are skipped with a warning."""
    if modality not in (Modality.LOCATION, Modality.EVENT):
        raise ConfigurationError(f"expected location or event modality, got {modality}")
    warnings: list[str] = []
    vectors: list[EmbeddingVector] = []
    for ref in refset.images:
        payload = payload_from_reference(ref)
        try:
            vectors.append(provider.embed(payload))
        except (FormatError, TransportError, ConfigurationError, CrossmodalError) as exc:
            warnings.append(f"reference {ref.source_url}: {exc}")
    if not vectors:
        warnings.append(f"no usable reference images for {refset.kb_id}")
        return ProfileResult(None, warnings)
    profile = EntityVisualProfile(
        kb_id=refset.kb_id,
        modality=modality,
        vectors=tuple(vectors),
        warnings=tuple(warnings),
    )
    return ProfileResult(profile, warnings)
