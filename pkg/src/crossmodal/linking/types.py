"""Domain types for entity linking."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

HUMAN_CLASS_ID = "Q5"

SUPPORTED_LANGUAGES = ("en", "de")


class EntityType(str, enum.Enum):
    PERSON = "person"
    LOCATION = "location"
    EVENT = "event"


@dataclass(frozen=True, order=True)
class TextSpan:
    """Character span of one mention; offsets index the original text."""

    start: int
    end: int
    surface: str

    def __post_init__(self):
        if self.start < 0 or self.end <= self.start:
            raise ValueError(f"invalid span [{self.start}, {self.end})")
        if len(self.surface) != self.end - self.start:
            raise ValueError("surface length does not match span bounds")

    def check_against(self, text: str) -> None:
        if self.end > len(text):
            raise ValueError(f"span [{self.start}, {self.end}) exceeds text length {len(text)}")
        if text[self.start : self.end] != self.surface:
            raise ValueError(f"surface mismatch at [{self.start}, {self.end})")


@dataclass(frozen=True)
class EntityCandidate:
    """A possible knowledge-base resolution for one span."""

    kb_id: str
    pagerank: float
    span: TextSpan

    def __post_init__(self):
        if not self.kb_id:
            raise ValueError("candidate kb_id must be non-empty")
        if self.pagerank < 0:
            raise ValueError("pagerank must be non-negative")


@dataclass(frozen=True)
class Coordinate:
    lat: float
    lon: float

    def __post_init__(self):
        if not -90.0 <= self.lat <= 90.0:
            raise ValueError(f"latitude out of range: {self.lat}")
        if not -180.0 < self.lon <= 180.0:
            raise ValueError(f"longitude out of range: {self.lon}")


@dataclass(frozen=True)
class KBRecord:
    """Knowledge-base attributes consumed by typing, tampering, and cards."""

    kb_id: str
    label: str
    instance_of: tuple[str, ...] = ()
    coordinate: Coordinate | None = None
    parent_classes: tuple[str, ...] = ()
    depiction: str | None = None
    country_of_citizenship: str | None = None
    gender: str | None = None
    description: str | None = None

    def to_json(self) -> dict:
        return {
            "kb_id": self.kb_id,
            "label": self.label,
            "instance_of": list(self.instance_of),
            "coordinate": [self.coordinate.lat, self.coordinate.lon] if self.coordinate else None,
            "parent_classes": list(self.parent_classes),
            "depiction": self.depiction,
            "country_of_citizenship": self.country_of_citizenship,
            "gender": self.gender,
            "description": self.description,
        }

    @classmethod
    def from_json(cls, data: dict) -> "KBRecord":
        coordinate = data.get("coordinate")
        return cls(
            kb_id=data["kb_id"],
            label=data.get("label", data["kb_id"]),
            instance_of=tuple(data.get("instance_of", ())),
            coordinate=Coordinate(coordinate[0], coordinate[1]) if coordinate else None,
            parent_classes=tuple(data.get("parent_classes", ())),
            depiction=data.get("depiction"),
            country_of_citizenship=data.get("country_of_citizenship"),
            gender=data.get("gender"),
            description=data.get("description"),
        )


@dataclass(frozen=True)
class LinkedEntity:
    """A text mention resolved to the knowledge base and typed.

    One LinkedEntity per distinct kb_id per document; repeat mentions
    merge into ``spans``.
    """

    kb_id: str
    label: str
    entity_type: EntityType
    spans: tuple[TextSpan, ...]
    record: KBRecord

    def __post_init__(self):
        if not self.spans:
            raise ValueError("linked entity needs at least one span")

    def to_json(self) -> dict:
        return {
            "kb_id": self.kb_id,
            "label": self.label,
            "entity_type": self.entity_type.value,
            "spans": [
                {"start": s.start, "end": s.end, "surface": s.surface} for s in self.spans
            ],
            "record": self.record.to_json(),
        }

    @classmethod
    def from_json(cls, data: dict) -> "LinkedEntity":
        return cls(
            kb_id=data["kb_id"],
            label=data["label"],
            entity_type=EntityType(data["entity_type"]),
            spans=tuple(
                TextSpan(s["start"], s["end"], s["surface"]) for s in data["spans"]
            ),
            record=KBRecord.from_json(data["record"]),
        )


@dataclass(frozen=True)
class EntityCard:
    """Display card combining description, depiction, and page links."""

    kb_id: str
    label: str
    description: str | None
    depiction: str | None
    links: dict[str, str] = field(default_factory=dict)

    def to_json(self) -> dict:
        return {
            "kb_id": self.kb_id,
            "label": self.label,
            "description": self.description,
            "depiction": self.depiction,
            "links": dict(self.links),
        }
