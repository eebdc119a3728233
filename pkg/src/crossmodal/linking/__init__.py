"""Named entity linking: recognize mentions, resolve them to a knowledge
base, and classify them as person / location / event."""

from .types import (
    Coordinate,
    EntityCandidate,
    EntityCard,
    EntityType,
    KBRecord,
    LinkedEntity,
    TextSpan,
)
from .classify import classify_entity
from .events import load_event_list
from .gazetteer import GazetteerAnnotator, load_gazetteer
from .kb import CachingKBClient, HttpKBClient, KBClient, StaticKBClient
from .linker import EntityLinker, LinkResult, select_candidate

__all__ = [
    "Coordinate",
    "EntityCandidate",
    "EntityCard",
    "EntityType",
    "KBRecord",
    "LinkedEntity",
    "TextSpan",
    "classify_entity",
    "load_event_list",
    "GazetteerAnnotator",
    "load_gazetteer",
    "KBClient",
    "HttpKBClient",
    "StaticKBClient",
    "CachingKBClient",
    "EntityLinker",
    "LinkResult",
    "select_candidate",
]
