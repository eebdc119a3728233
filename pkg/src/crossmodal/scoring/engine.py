"""Scoring: cosine similarity, per-entity maxima, and the full
link -> crawl -> profile -> score pipeline."""

from __future__ import annotations

import hashlib
import logging
from dataclasses import dataclass

import numpy as np

from ..errors import ConfigurationError, CrossmodalError, FormatError, TransportError
from ..evidence.refset import ReferenceImageCollector
from ..features.detectors import FaceDetector
from ..features.profiles import (
    ProfileResult,
    build_person_profile,
    build_place_or_event_profile,
)
from ..features.providers import EmbedProvider
from ..features.types import EmbeddingVector, EntityVisualProfile, ImagePayload, Modality
from ..linking.linker import EntityLinker
from ..linking.types import EntityType, LinkedEntity
from .types import (
    BREAKDOWN_CAP,
    KIND_FOR_TYPE,
    MODALITY_FOR_TYPE,
    CrossModalScore,
    DocumentReport,
    ScoreKind,
)

logger = logging.getLogger(__name__)


def cosine(a: EmbeddingVector, b: EmbeddingVector) -> float:
    """Dot product of unit vectors, clamped to [-1, 1]."""
    if a.dim != b.dim:
        raise ValueError(f"dimension mismatch: {a.dim} vs {b.dim}")
    value = float(np.dot(a.as_array(), b.as_array()))
    return max(-1.0, min(1.0, value))


def entity_similarity(
    query_vectors: list[EmbeddingVector],
    profile: EntityVisualProfile | None,
    *,
    kb_id: str,
    kind: ScoreKind,
) -> CrossModalScore:
    """Maximum similarity over all (query, profile) pairs.

    An empty profile yields the no-evidence score (value None,
    evidence_count 0).
    """
    if profile is None or not profile.vectors:
        return CrossModalScore(
            kb_id=kb_id, kind=kind, value=None, breakdown=(), evidence_count=0
        )
    if not query_vectors:
        raise ValueError("query vector list must be non-empty")
    triples = []
    for p_idx, p_vec in enumerate(profile.vectors):
        for q_idx, q_vec in enumerate(query_vectors):
            triples.append((p_idx, q_idx, cosine(q_vec, p_vec)))
    triples.sort(key=lambda t: (-t[2], t[0], t[1]))
    value = triples[0][2]
    return CrossModalScore(
        kb_id=kb_id,
        kind=kind,
        value=value,
        breakdown=tuple(triples[:BREAKDOWN_CAP]),
        evidence_count=len(profile.vectors),
    )


def score_profile_against_image(
    image: ImagePayload,
    profile: EntityVisualProfile | None,
    *,
    kb_id: str,
    entity_type: EntityType,
    providers: dict[Modality, EmbedProvider],
    detector: FaceDetector,
    warnings: list[str],
) -> CrossModalScore | None:
    """Score one entity's profile against the document image.

    Returns None (absent score) when the profile has no evidence, the
    query image has no faces (persons), or a provider fails; the reason
    lands in ``warnings``.
    """
    kind = KIND_FOR_TYPE[entity_type]
    modality = MODALITY_FOR_TYPE[entity_type]
    if profile is None or not profile.vectors:
        warnings.append(f"{kb_id}: no visual evidence")
        return None
    provider = providers.get(modality)
    if provider is None:
        raise ConfigurationError(f"no provider configured for {modality.value}")

    try:
        if entity_type == EntityType.PERSON:
            detections = detector.detect(image)
            if not detections:
                warnings.append(f"{kb_id}: no faces in query image")
                return None
            query_vectors = [provider.embed(image, bbox=d.bbox) for d in detections]
        else:
            query_vectors = [provider.embed(image)]
    except FormatError as exc:
        warnings.append(f"{kb_id}: query image unusable: {exc}")
        return None
    except (TransportError, ConfigurationError) as exc:
        warnings.append(f"{kb_id}: provider failure: {exc}")
        return None

    return entity_similarity(query_vectors, profile, kb_id=kb_id, kind=kind)


@dataclass(frozen=True)
class ScoreOptions:
    """Per-request knobs; ``types`` mirrors the UI's per-type buttons."""

    types: frozenset[EntityType] = frozenset(EntityType)
    language: str = "en"
    k: int = 5
    cluster_threshold: float = 0.5

    @classmethod
    def with_types(cls, types, **kwargs) -> "ScoreOptions":
        return cls(types=frozenset(types), **kwargs)


@dataclass
class ConsistencyEngine:
    """Owns the wired pipeline components and produces document reports."""

    linker: EntityLinker
    collector: ReferenceImageCollector
    providers: dict[Modality, EmbedProvider]
    detector: FaceDetector

    def build_profile(
        self, entity_type: EntityType, refset, *, threshold: float = 0.5
    ) -> ProfileResult:
        modality = MODALITY_FOR_TYPE[entity_type]
        provider = self.providers.get(modality)
        if provider is None:
            raise ConfigurationError(f"no provider configured for {modality.value}")
        if entity_type == EntityType.PERSON:
            return build_person_profile(refset, self.detector, provider, threshold=threshold)
        return build_place_or_event_profile(refset, modality, provider)

    def score_entity(
        self,
        image: ImagePayload,
        entity: LinkedEntity,
        *,
        options: ScoreOptions | None = None,
        warnings: list[str] | None = None,
    ) -> CrossModalScore | None:
        options = options or ScoreOptions()
        warnings = warnings if warnings is not None else []
        try:
            refset = self.collector.get_reference_set(entity.kb_id, entity.label, options.k)
        except (TransportError, CrossmodalError) as exc:
            warnings.append(f"{entity.kb_id}: evidence crawl failed: {exc}")
            return None
        result = self.build_profile(
            entity.entity_type, refset, threshold=options.cluster_threshold
        )
        warnings.extend(result.warnings)
        return score_profile_against_image(
            image,
            result.profile,
            kb_id=entity.kb_id,
            entity_type=entity.entity_type,
            providers=self.providers,
            detector=self.detector,
            warnings=warnings,
        )

    def score_document(
        self,
        text: str,
        image: ImagePayload | None,
        options: ScoreOptions | None = None,
        *,
        document_id: str | None = None,
        entities: list[LinkedEntity] | None = None,
    ) -> DocumentReport:
        """Full pipeline. ``entities`` short-circuits linking when the
        caller already has them (resumed jobs, evaluation)."""
        options = options or ScoreOptions()
        if not text and image is None:
            raise ValueError("need text or an image to analyze")

        warnings: list[str] = []
        if entities is None:
            link_result = self.linker.link_document(text, options.language)
            entities = link_result.entities
            warnings.extend(link_result.warnings)

        if document_id is None:
            digest = hashlib.sha256()
            digest.update(text.encode("utf-8"))
            if image is not None:
                digest.update(image.content)
            document_id = digest.hexdigest()[:16]

        scores: dict[str, CrossModalScore | None] = {}
        for entity in entities:
            if entity.entity_type not in options.types:
                continue
            if image is None:
                warnings.append(f"{entity.kb_id}: no query image supplied")
                scores[entity.kb_id] = None
                continue
            scores[entity.kb_id] = self.score_entity(
                image, entity, options=options, warnings=warnings
            )
        return DocumentReport(
            document_id=document_id,
            entities=list(entities),
            scores=scores,
            warnings=warnings,
            language=options.language,
        )
