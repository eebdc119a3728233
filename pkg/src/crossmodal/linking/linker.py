"""Document-level linking: compose annotation, candidate selection,
fallback search, record fetching, and typing."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

from ..errors import CrossmodalError, NoCandidateError, NotFoundError, TransportError
from .annotator import Annotator
from .classify import classify_entity
from .kb import KBClient
from .types import EntityCandidate, EntityType, KBRecord, LinkedEntity, TextSpan

logger = logging.getLogger(__name__)


def select_candidate(candidates: list[EntityCandidate]) -> EntityCandidate:
    """Pick the candidate with the highest PageRank.

    Ties break toward the lexicographically smallest kb_id so the choice
    is reproducible regardless of input order.
    """
    if not candidates:
        raise NoCandidateError("no candidates to select from")
    return min(candidates, key=lambda c: (-c.pagerank, c.kb_id))


@dataclass
class LinkResult:
    entities: list[LinkedEntity]
    warnings: list[str] = field(default_factory=list)

    def by_type(self, entity_type: EntityType) -> list[LinkedEntity]:
        return [e for e in self.entities if e.entity_type == entity_type]


class EntityLinker:
    """Links a document's mentions to typed knowledge-base entities.

    External failures degrade to warnings on the result; the document is
    always returned.
    """

    def __init__(self, annotator: Annotator, kb: KBClient, event_ids: frozenset[str]):
        self.annotator = annotator
        self.kb = kb
        self.event_ids = event_ids

    def fallback_search(self, surface: str) -> EntityCandidate | None:
        """First hit of the knowledge-base search endpoint, used for spans
        the primary annotator left unlinked."""
        results = self.kb.search(surface)
        if not results:
            return None
        span = TextSpan(0, len(surface), surface)
        return EntityCandidate(kb_id=results[0], pagerank=0.0, span=span)

    def resolve_label(self, label_or_id: str) -> KBRecord:
        """Resolve a claimed entity given either a kb_id or a label."""
        try:
            return self.kb.get_record(label_or_id)
        except (NotFoundError, ValueError):
            pass
        results = self.kb.search(label_or_id)
        if not results:
            raise NoCandidateError(f"cannot resolve {label_or_id!r} to any entity")
        return self.kb.get_record(results[0])

    def link_document(self, text: str, language: str = "en") -> LinkResult:
        """Deduplicated by kb_id with merged spans; only typed entities
        are returned."""
        warnings: list[str] = []
        annotations = self.annotator.annotate(text, language)

        resolved: dict[str, list[TextSpan]] = {}
        for span, candidates in annotations:
            span.check_against(text)
            if not candidates:
                try:
                    fallback = self.fallback_search(span.surface)
                except TransportError as exc:
                    warnings.append(f"search fallback failed for {span.surface!r}: {exc}")
                    continue
                if fallback is None:
                    continue
                kb_id = fallback.kb_id
            else:
                kb_id = select_candidate(candidates).kb_id
            resolved.setdefault(kb_id, []).append(span)

        entities: list[LinkedEntity] = []
        for kb_id, spans in resolved.items():
            try:
                record = self.kb.get_record(kb_id)
            except NotFoundError:
                warnings.append(f"entity {kb_id} not found in knowledge base")
                continue
            except (TransportError, CrossmodalError) as exc:
                warnings.append(f"could not fetch {kb_id}: {exc}")
                continue
            entity_type = classify_entity(record, self.event_ids)
            if entity_type is None:
                continue
            entities.append(
                LinkedEntity(
                    kb_id=kb_id,
                    label=record.label,
                    entity_type=entity_type,
                    spans=tuple(sorted(spans, key=lambda s: s.start)),
                    record=record,
                )
            )
        entities.sort(key=lambda e: e.spans[0].start)
        return LinkResult(entities=entities, warnings=warnings)
