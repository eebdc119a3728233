"""Domain types for cross-modal scores and document reports."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

from ..features.types import Modality
from ..linking.types import EntityType, LinkedEntity

BREAKDOWN_CAP = 100


class ScoreKind(str, enum.Enum):
    """Per-type similarity measures: persons (CMPS), locations (CMLS),
    events (CMES)."""

    CMPS = "CMPS"
    CMLS = "CMLS"
    CMES = "CMES"


KIND_FOR_TYPE = {
    EntityType.PERSON: ScoreKind.CMPS,
    EntityType.LOCATION: ScoreKind.CMLS,
    EntityType.EVENT: ScoreKind.CMES,
}

MODALITY_FOR_TYPE = {
    EntityType.PERSON: Modality.FACE,
    EntityType.LOCATION: Modality.LOCATION,
    EntityType.EVENT: Modality.EVENT,
}


@dataclass(frozen=True)
class CrossModalScore:
    """Similarity verdict for one entity.

    ``value`` is the raw maximum cosine similarity in [-1, 1], or None
    for the no-evidence outcome. ``breakdown`` holds
    ``(profile_vector_index, query_vector_index, similarity)`` triples,
    largest first, capped at 100 pairs.
    """

    kb_id: str
    kind: ScoreKind
    value: float | None
    breakdown: tuple[tuple[int, int, float], ...]
    evidence_count: int

    def __post_init__(self):
        if self.value is not None:
            if not -1.0 <= self.value <= 1.0:
                raise ValueError(f"score out of range: {self.value}")
            if not self.breakdown:
                raise ValueError("a present score requires a non-empty breakdown")
            top = max(sim for _, _, sim in self.breakdown)
            if self.value != top:
                raise ValueError("score value must equal the breakdown maximum")
        elif self.breakdown:
            raise ValueError("absent score cannot carry a breakdown")

    def to_json(self) -> dict:
        return {
            "kb_id": self.kb_id,
            "kind": self.kind.value,
            "value": self.value,
            "evidence_count": self.evidence_count,
            "breakdown": [
                {"reference": r, "query": q, "similarity": s} for r, q, s in self.breakdown
            ],
        }

    @classmethod
    def from_json(cls, data: dict) -> "CrossModalScore":
        return cls(
            kb_id=data["kb_id"],
            kind=ScoreKind(data["kind"]),
            value=data["value"],
            evidence_count=data["evidence_count"],
            breakdown=tuple(
                (item["reference"], item["query"], item["similarity"])
                for item in data["breakdown"]
            ),
        )


@dataclass
class DocumentReport:
    """Full per-document result: linked entities, per-entity scores, and
    accumulated warnings."""

    document_id: str
    entities: list[LinkedEntity]
    scores: dict[str, CrossModalScore | None]
    warnings: list[str] = field(default_factory=list)
    language: str = "en"

    def __post_init__(self):
        known = {e.kb_id for e in self.entities}
        unknown = set(self.scores) - known
        if unknown:
            raise ValueError(f"scores reference unlisted entities: {sorted(unknown)}")
