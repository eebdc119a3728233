"""Domain types for the evaluation harness."""

from __future__ import annotations

from dataclasses import dataclass, field

from ..linking.types import Coordinate, EntityType


@dataclass(frozen=True)
class CatalogEntity:
    """One entity of the evaluation catalog, with the attributes the
    tampering strategies filter on and offline reference image paths."""

    kb_id: str
    entity_type: EntityType
    label: str
    gender: str | None = None
    country_of_citizenship: str | None = None
    coordinate: Coordinate | None = None
    location_type: str | None = None
    parent_classes: tuple[str, ...] = ()
    reference_images: tuple[str, ...] = ()

    def to_json(self) -> dict:
        return {
            "kb_id": self.kb_id,
            "entity_type": self.entity_type.value,
            "label": self.label,
            "gender": self.gender,
            "country_of_citizenship": self.country_of_citizenship,
            "coordinate": [self.coordinate.lat, self.coordinate.lon] if self.coordinate else None,
            "location_type": self.location_type,
            "parent_classes": list(self.parent_classes),
            "reference_images": list(self.reference_images),
        }

    @classmethod
    def from_json(cls, data: dict) -> "CatalogEntity":
        coordinate = data.get("coordinate")
        return cls(
            kb_id=data["kb_id"],
            entity_type=EntityType(data["entity_type"]),
            label=data.get("label", data["kb_id"]),
            gender=data.get("gender"),
            country_of_citizenship=data.get("country_of_citizenship"),
            coordinate=Coordinate(coordinate[0], coordinate[1]) if coordinate else None,
            location_type=data.get("location_type"),
            parent_classes=tuple(data.get("parent_classes", ())),
            reference_images=tuple(data.get("reference_images", ())),
        )


@dataclass(frozen=True)
class EvalDocument:
    """One evaluation document.

    ``entities`` lists the original kb_ids per entity type. ``tampered``
    optionally pre-materializes replacements per strategy name as an
    ``{original_kb_id: replacement_kb_id}`` map; strategies without an
    entry are sampled at run time from the catalog.
    """

    id: str
    text: str
    image: str  # path to the document image
    entities: dict[str, list[str]] = field(default_factory=dict)
    tampered: dict[str, dict[str, str]] = field(default_factory=dict)

    def originals_for(self, entity_type: EntityType) -> list[str]:
        return list(self.entities.get(entity_type.value, []))

    def to_json(self) -> dict:
        return {
            "id": self.id,
            "text": self.text,
            "image": self.image,
            "entities": {k: list(v) for k, v in self.entities.items()},
            "tampered": {k: dict(v) for k, v in self.tampered.items()},
        }

    @classmethod
    def from_json(cls, data: dict) -> "EvalDocument":
        tampered = {}
        for strategy, mapping in data.get("tampered", {}).items():
            for original, replacement in mapping.items():
                if replacement == original:
                    raise ValueError(
                        f"document {data['id']}: tampered entity equals original {original}"
                    )
            tampered[strategy] = dict(mapping)
        return cls(
            id=str(data["id"]),
            text=data.get("text", ""),
            image=data["image"],
            entities={k: list(v) for k, v in data.get("entities", {}).items()},
            tampered=tampered,
        )


@dataclass
class EvaluationRun:
    """Result of evaluating one strategy over a dataset."""

    strategy_name: str
    strategy_params: dict
    seed: int
    dataset_size: int
    pairs: list[tuple[str, float, float]]  # (document id, untampered, tampered)
    excluded_ids: list[str]
    va: float
    auc: float

    @property
    def excluded(self) -> int:
        return len(self.excluded_ids)

    def __post_init__(self):
        if len(self.pairs) + len(self.excluded_ids) != self.dataset_size:
            raise ValueError("pairs + excluded must account for every document")
