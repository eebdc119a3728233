"""Entity typing from knowledge-base attributes.

Rules, in precedence order:

1. instance-of contains the human class -> person;
2. id on the verified event list -> event;
3. coordinate present -> location;
4. otherwise the entity is discarded (returns None).

Events are checked before the coordinate rule because real events
(battles, summits) frequently carry coordinates and would otherwise be
misclassified as locations.
"""

from __future__ import annotations

from .types import HUMAN_CLASS_ID, EntityType, KBRecord


def classify_entity(
    record: KBRecord,
    event_ids: frozenset[str] | set[str],
    *,
    human_class_id: str = HUMAN_CLASS_ID,
) -> EntityType | None:
    """Total and deterministic: exactly one of the four outcomes."""
    if human_class_id in record.instance_of:
        return EntityType.PERSON
    if record.kb_id in event_ids:
        return EntityType.EVENT
    if record.coordinate is not None:
        return EntityType.LOCATION
    return None
