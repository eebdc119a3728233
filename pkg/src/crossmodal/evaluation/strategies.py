"""Tampering strategies: rules for substituting an entity with an
attribute-matched confounder.

Persons can be swapped at random or constrained to share citizenship,
gender, or both. Locations can be swapped at random or constrained to
the same location type within a great-circle distance band; the bands
are fixed at 25-200, 200-750, and 750-2500 km. Events can be swapped at
random or constrained to share a parent class.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Protocol

from ..errors import SamplingExhaustedError
from ..linking.types import EntityType
from .geo import haversine_km
from .types import CatalogEntity

ALLOWED_DISTANCE_BANDS = ((25.0, 200.0), (200.0, 750.0), (750.0, 2500.0))


class TamperingStrategy(Protocol):
    @property
    def name(self) -> str: ...

    @property
    def entity_type(self) -> EntityType: ...

    def constraint(self, original: CatalogEntity) -> str:
        """Human-readable description of the eligibility rule."""
        ...

    def matches(self, original: CatalogEntity, candidate: CatalogEntity) -> bool: ...


@dataclass(frozen=True)
class RandomSameType:
    entity_type: EntityType

    @property
    def name(self) -> str:
        return f"random-{self.entity_type.value}"

    def constraint(self, original: CatalogEntity) -> str:
        return f"any other {self.entity_type.value}"

    def matches(self, original: CatalogEntity, candidate: CatalogEntity) -> bool:
        return True


@dataclass(frozen=True)
class SameCitizenship:
    entity_type: EntityType = EntityType.PERSON

    @property
    def name(self) -> str:
        return "person-same-country"

    def constraint(self, original: CatalogEntity) -> str:
        return f"person with country_of_citizenship == {original.country_of_citizenship!r}"

    def matches(self, original: CatalogEntity, candidate: CatalogEntity) -> bool:
        return (
            original.country_of_citizenship is not None
            and candidate.country_of_citizenship == original.country_of_citizenship
        )


@dataclass(frozen=True)
class SameGender:
    entity_type: EntityType = EntityType.PERSON

    @property
    def name(self) -> str:
        return "person-same-gender"

    def constraint(self, original: CatalogEntity) -> str:
        return f"person with gender == {original.gender!r}"

    def matches(self, original: CatalogEntity, candidate: CatalogEntity) -> bool:
        return original.gender is not None and candidate.gender == original.gender


@dataclass(frozen=True)
class SameCitizenshipAndGender:
    entity_type: EntityType = EntityType.PERSON

    @property
    def name(self) -> str:
        return "person-same-country-gender"

    def constraint(self, original: CatalogEntity) -> str:
        return (
            f"person with country_of_citizenship == {original.country_of_citizenship!r} "
            f"and gender == {original.gender!r}"
        )

    def matches(self, original: CatalogEntity, candidate: CatalogEntity) -> bool:
        return SameCitizenship().matches(original, candidate) and SameGender().matches(
            original, candidate
        )


@dataclass(frozen=True)
class DistanceBand:
    """Locations of the same type within [min_km, max_km) great-circle
    distance of the original."""

    min_km: float
    max_km: float
    same_type: bool = True
    entity_type: EntityType = EntityType.LOCATION

    def __post_init__(self):
        if (self.min_km, self.max_km) not in ALLOWED_DISTANCE_BANDS:
            raise ValueError(
                f"unsupported distance band ({self.min_km}, {self.max_km}); "
                f"allowed: {ALLOWED_DISTANCE_BANDS}"
            )

    @property
    def name(self) -> str:
        return f"location-gcd-{self.min_km:g}-{self.max_km:g}"

    def constraint(self, original: CatalogEntity) -> str:
        parts = [f"location within [{self.min_km:g}, {self.max_km:g}) km of {original.kb_id}"]
        if self.same_type:
            parts.append(f"with location_type == {original.location_type!r}")
        return " ".join(parts)

    def matches(self, original: CatalogEntity, candidate: CatalogEntity) -> bool:
        if original.coordinate is None or candidate.coordinate is None:
            return False
        if self.same_type and (
            original.location_type is None
            or candidate.location_type != original.location_type
        ):
            return False
        distance = haversine_km(original.coordinate, candidate.coordinate)
        return self.min_km <= distance < self.max_km


@dataclass(frozen=True)
class SharedParentClass:
    """Events sharing at least one parent class with the original."""

    entity_type: EntityType = EntityType.EVENT

    @property
    def name(self) -> str:
        return "event-shared-parent"

    def constraint(self, original: CatalogEntity) -> str:
        return f"event sharing a parent class with {original.kb_id} ({list(original.parent_classes)})"

    def matches(self, original: CatalogEntity, candidate: CatalogEntity) -> bool:
        return bool(set(original.parent_classes) & set(candidate.parent_classes))


_REGISTRY: dict[str, TamperingStrategy] = {
    s.name: s
    for s in (
        RandomSameType(EntityType.PERSON),
        SameCitizenship(),
        SameGender(),
        SameCitizenshipAndGender(),
        RandomSameType(EntityType.LOCATION),
        DistanceBand(25.0, 200.0),
        DistanceBand(200.0, 750.0),
        DistanceBand(750.0, 2500.0),
        RandomSameType(EntityType.EVENT),
        SharedParentClass(),
    )
}


def strategy_names() -> list[str]:
    return list(_REGISTRY)


def parse_strategy(name: str) -> TamperingStrategy:
    try:
        return _REGISTRY[name]
    except KeyError:
        raise ValueError(
            f"unknown strategy {name!r}; valid names: {', '.join(_REGISTRY)}"
        ) from None


def sample_tampered(
    original: CatalogEntity,
    strategy: TamperingStrategy,
    catalog: list[CatalogEntity],
    rng: random.Random,
) -> CatalogEntity:
    """Uniformly sample an eligible confounder for ``original``.

    Candidates are ordered by kb_id before sampling so the draw depends
    only on the RNG state, not on catalog order. Raises
    SamplingExhaustedError when nothing qualifies.
    """
    eligible = sorted(
        (
            c
            for c in catalog
            if c.kb_id != original.kb_id
            and c.entity_type == strategy.entity_type
            and strategy.matches(original, c)
        ),
        key=lambda c: c.kb_id,
    )
    if not eligible:
        constraint = strategy.constraint(original)
        raise SamplingExhaustedError(
            f"no eligible confounder for {original.kb_id} under {strategy.name}: {constraint}",
            constraint=constraint,
        )
    return eligible[rng.randrange(len(eligible))]
