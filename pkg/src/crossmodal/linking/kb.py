"""Knowledge-base clients.

``HttpKBClient`` speaks the Wikidata-style REST contract (entity JSON
with ``claims``, plus a label-search endpoint); ``StaticKBClient`` holds
records in memory for tests and offline demos. ``CachingKBClient`` wraps
either with the shared TTL cache so repeated lookups within the TTL make
zero network calls.
"""

from __future__ import annotations

import json
import re
from pathlib import Path
from typing import Protocol

import httpx

from ..cache import TTLCache, make_key
from ..errors import NotFoundError, TransportError
from .types import Coordinate, EntityCard, KBRecord

# Wikidata-compatible property ids used when parsing entity JSON.
PROP_INSTANCE_OF = "P31"
PROP_COORDINATE = "P625"
PROP_SUBCLASS_OF = "P279"
PROP_DEPICTION = "P18"
PROP_CITIZENSHIP = "P27"
PROP_GENDER = "P21"

def check_kb_id(kb_id: str) -> None:
    if not kb_id or not re.match(r"^\w+$", kb_id):
        raise ValueError(f"malformed knowledge-base id: {kb_id!r}")


class KBClient(Protocol):
    def get_record(self, kb_id: str) -> KBRecord: ...

    def search(self, surface: str) -> list[str]:
        """kb_ids in the endpoint's rank order; empty when nothing matches."""
        ...


class StaticKBClient:
    """In-memory knowledge base."""

    def __init__(self, records: dict[str, KBRecord], search_index: dict[str, list[str]] | None = None):
        self.records = dict(records)
        self.search_index = dict(search_index or {})

    @classmethod
    def from_file(cls, path: str | Path) -> "StaticKBClient":
        """Load a JSON snapshot: ``{"records": [...], "search": {surface: [ids]}}``."""
        data = json.loads(Path(path).read_text(encoding="utf-8"))
        records = {r["kb_id"]: KBRecord.from_json(r) for r in data.get("records", [])}
        return cls(records, data.get("search", {}))

    def get_record(self, kb_id: str) -> KBRecord:
        check_kb_id(kb_id)
        if kb_id not in self.records:
            raise NotFoundError(f"unknown entity {kb_id}")
        return self.records[kb_id]

    def search(self, surface: str) -> list[str]:
        if not surface:
            return []
        exact = self.search_index.get(surface)
        if exact is not None:
            return list(exact)
        # fall back to label match so demos work without a search index
        return [
            kb_id
            for kb_id, record in sorted(self.records.items())
            if record.label.lower() == surface.lower()
        ]


class HttpKBClient:
    """Client for Wikidata-style entity and search endpoints."""

    def __init__(
        self,
        entity_url: str,
        search_url: str,
        *,
        language: str = "en",
        depiction_base: str = "https://commons.wikimedia.org/wiki/Special:FilePath/",
        client: httpx.Client | None = None,
        timeout: float = 15.0,
    ):
        self.entity_url = entity_url
        self.search_url = search_url
        self.language = language
        self.depiction_base = depiction_base
        self._client = client if client is not None else httpx.Client(timeout=timeout)

    def _get(self, url: str, params: dict) -> dict:
        try:
            response = self._client.get(url, params=params)
        except httpx.HTTPError as exc:
            raise TransportError(f"knowledge base unreachable: {exc}") from exc
        if response.status_code >= 500:
            raise TransportError(f"knowledge base returned {response.status_code}")
        if response.status_code >= 400:
            raise TransportError(
                f"knowledge base rejected request: {response.status_code}", retryable=False
            )
        return response.json()

    def get_record(self, kb_id: str) -> KBRecord:
        check_kb_id(kb_id)
        data = self._get(
            self.entity_url,
            {"action": "wbgetentities", "ids": kb_id, "format": "json"},
        )
        entity = data.get("entities", {}).get(kb_id)
        if entity is None or "missing" in entity:
            raise NotFoundError(f"unknown entity {kb_id}")
        return self._parse_entity(kb_id, entity)

    def search(self, surface: str) -> list[str]:
        if not surface:
            return []
        data = self._get(
            self.search_url,
            {
                "action": "wbsearchentities",
                "search": surface,
                "language": self.language,
                "format": "json",
            },
        )
        return [hit["id"] for hit in data.get("search", []) if "id" in hit]

    def _parse_entity(self, kb_id: str, entity: dict) -> KBRecord:
        claims = entity.get("claims", {})

        def item_values(prop: str) -> tuple[str, ...]:
            values = []
            for claim in claims.get(prop, []):
                value = claim.get("mainsnak", {}).get("datavalue", {}).get("value")
                if isinstance(value, dict) and "id" in value:
                    values.append(value["id"])
            return tuple(values)

        def first_item(prop: str) -> str | None:
            values = item_values(prop)
            return values[0] if values else None

        coordinate = None
        for claim in claims.get(PROP_COORDINATE, []):
            value = claim.get("mainsnak", {}).get("datavalue", {}).get("value")
            if isinstance(value, dict) and "latitude" in value:
                try:
                    coordinate = Coordinate(float(value["latitude"]), float(value["longitude"]))
                except ValueError:
                    coordinate = None
                break

        depiction = None
        for claim in claims.get(PROP_DEPICTION, []):
            value = claim.get("mainsnak", {}).get("datavalue", {}).get("value")
            if isinstance(value, str) and value:
                depiction = self.depiction_base + value.replace(" ", "_")
                break

        labels = entity.get("labels", {})
        label = labels.get(self.language, labels.get("en", {})).get("value", kb_id)
        descriptions = entity.get("descriptions", {})
        description = descriptions.get(self.language, descriptions.get("en", {})).get("value")

        return KBRecord(
            kb_id=kb_id,
            label=label,
            instance_of=item_values(PROP_INSTANCE_OF),
            coordinate=coordinate,
            parent_classes=item_values(PROP_SUBCLASS_OF),
            depiction=depiction,
            country_of_citizenship=first_item(PROP_CITIZENSHIP),
            gender=first_item(PROP_GENDER),
            description=description,
        )


class CachingKBClient:
    """Caches records and search results from an inner client."""

    def __init__(self, inner: KBClient, cache: TTLCache, *, ttl: float | None = None):
        self.inner = inner
        self.cache = cache
        self.ttl = ttl

    def get_record(self, kb_id: str) -> KBRecord:
        check_kb_id(kb_id)
        key = make_key("kb", kb_id)
        cached = self.cache.get_json(key)
        if cached is not None:
            return KBRecord.from_json(cached)
        record = self.inner.get_record(kb_id)
        self.cache.put_json(key, record.to_json(), ttl=self.ttl)
        return record

    def search(self, surface: str) -> list[str]:
        key = make_key("kbsearch", surface)
        cached = self.cache.get_json(key)
        if cached is not None:
            return list(cached)
        results = self.inner.search(surface)
        self.cache.put_json(key, results, ttl=self.ttl)
        return results


def entity_card(record: KBRecord, *, page_base: str = "https://www.wikidata.org/wiki/") -> EntityCard:
    """Assemble the hover-card payload for one entity."""
    return EntityCard(
        kb_id=record.kb_id,
        label=record.label,
        description=record.description,
        depiction=record.depiction,
        links={"kb": f"{page_base}{record.kb_id}"},
    )
