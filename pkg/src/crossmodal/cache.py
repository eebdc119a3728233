"""TTL + LRU key-value cache with memory and on-disk backends.

External requests (knowledge base, image search, article parsing) and
derived artifacts (reference image sets, completed analyses) are cached
for 24 hours by default. Expiry is driven by an injected clock; capacity
overflow evicts the least recently used entry. Storage failures degrade
to cache misses with a logged warning, never to pipeline failures.

Disk layout: one ``<sha256(key)>.bin`` payload plus a ``.meta`` JSON
record holding the key, ``stored_at``, ``ttl`` and last access time.
"""

from __future__ import annotations

import hashlib
import json
import logging
import threading
from collections import OrderedDict
from dataclasses import dataclass
from pathlib import Path

from .clock import Clock, SystemClock

logger = logging.getLogger(__name__)

DEFAULT_TTL_SECONDS = 24 * 3600.0


def make_key(*parts: object) -> str:
    """Join namespace parts into a cache key, e.g. ``refset/Q42/5``."""
    return "/".join(str(p) for p in parts)


@dataclass
class CacheEntry:
    key: str
    payload: bytes
    stored_at: float
    ttl: float

    def expired(self, now: float) -> bool:
        return now - self.stored_at > self.ttl


class MemoryCacheBackend:
    """Dict-backed storage preserving access order for LRU."""

    def __init__(self):
        self._entries: OrderedDict[str, CacheEntry] = OrderedDict()

    def load(self, key: str) -> CacheEntry | None:
        entry = self._entries.get(key)
        if entry is not None:
            self._entries.move_to_end(key)
        return entry

    def store(self, entry: CacheEntry) -> None:
        self._entries[entry.key] = entry
        self._entries.move_to_end(entry.key)

    def delete(self, key: str) -> None:
        self._entries.pop(key, None)

    def keys_lru_first(self) -> list[str]:
        return list(self._entries)

    def __len__(self) -> int:
        return len(self._entries)


class DiskCacheBackend:
    """File-per-entry storage under a cache directory."""

    def __init__(self, root: str | Path):
        self.root = Path(root)
        self.root.mkdir(parents=True, exist_ok=True)

    def _paths(self, key: str) -> tuple[Path, Path]:
        digest = hashlib.sha256(key.encode("utf-8")).hexdigest()
        return self.root / f"{digest}.bin", self.root / f"{digest}.meta"

    def load(self, key: str) -> CacheEntry | None:
        payload_path, meta_path = self._paths(key)
        if not meta_path.exists():
            return None
        meta = json.loads(meta_path.read_text(encoding="utf-8"))
        return CacheEntry(
            key=meta["key"],
            payload=payload_path.read_bytes(),
            stored_at=meta["stored_at"],
            ttl=meta["ttl"],
        )

    def store(self, entry: CacheEntry) -> None:
        payload_path, meta_path = self._paths(entry.key)
        payload_path.write_bytes(entry.payload)
        meta = {
            "key": entry.key,
            "stored_at": entry.stored_at,
            "ttl": entry.ttl,
            "accessed_at": entry.stored_at,
        }
        meta_path.write_text(json.dumps(meta), encoding="utf-8")

    def delete(self, key: str) -> None:
        payload_path, meta_path = self._paths(key)
        payload_path.unlink(missing_ok=True)
        meta_path.unlink(missing_ok=True)

    def keys_lru_first(self) -> list[str]:
        metas = []
        for meta_path in self.root.glob("*.meta"):
            try:
                meta = json.loads(meta_path.read_text(encoding="utf-8"))
            except (OSError, ValueError):
                continue
            metas.append((meta.get("accessed_at", meta.get("stored_at", 0.0)), meta["key"]))
        metas.sort()
        return [key for _, key in metas]

    def touch(self, key: str, now: float) -> None:
        _, meta_path = self._paths(key)
        try:
            meta = json.loads(meta_path.read_text(encoding="utf-8"))
            meta["accessed_at"] = now
            meta_path.write_text(json.dumps(meta), encoding="utf-8")
        except (OSError, ValueError):
            pass

    def __len__(self) -> int:
        return sum(1 for _ in self.root.glob("*.meta"))


class TTLCache:
    """Thread-safe TTL cache with LRU capacity eviction.

    ``get`` returns the payload only while ``now - stored_at <= ttl``;
    an expired entry is removed on first access past its deadline.
    """

    def __init__(
        self,
        backend: MemoryCacheBackend | DiskCacheBackend | None = None,
        *,
        clock: Clock | None = None,
        default_ttl: float = DEFAULT_TTL_SECONDS,
        capacity: int = 4096,
    ):
        if capacity < 1:
            raise ValueError("cache capacity must be positive")
        self.backend = backend if backend is not None else MemoryCacheBackend()
        self.clock = clock if clock is not None else SystemClock()
        self.default_ttl = float(default_ttl)
        self.capacity = capacity
        self._lock = threading.Lock()

    def get(self, key: str) -> bytes | None:
        if not key:
            raise ValueError("cache key must be non-empty")
        with self._lock:
            try:
                entry = self.backend.load(key)
            except OSError as exc:
                logger.warning("cache read failed for %r: %s", key, exc)
                return None
            if entry is None:
                return None
            now = self.clock.now()
            if entry.expired(now):
                try:
                    self.backend.delete(key)
                except OSError:
                    pass
                return None
            if isinstance(self.backend, DiskCacheBackend):
                self.backend.touch(key, now)
            return entry.payload

    def put(self, key: str, payload: bytes, ttl: float | None = None) -> None:
        if not key:
            raise ValueError("cache key must be non-empty")
        entry = CacheEntry(
            key=key,
            payload=bytes(payload),
            stored_at=self.clock.now(),
            ttl=self.default_ttl if ttl is None else float(ttl),
        )
        with self._lock:
            try:
                self.backend.store(entry)
                self._evict_over_capacity()
            except OSError as exc:
                logger.warning("cache write failed for %r: %s", key, exc)

    def delete(self, key: str) -> None:
        with self._lock:
            try:
                self.backend.delete(key)
            except OSError as exc:
                logger.warning("cache delete failed for %r: %s", key, exc)

    def _evict_over_capacity(self) -> None:
        while len(self.backend) > self.capacity:
            lru = self.backend.keys_lru_first()
            if not lru:
                break
            self.backend.delete(lru[0])

    def get_json(self, key: str) -> object | None:
        payload = self.get(key)
        if payload is None:
            return None
        try:
            return json.loads(payload.decode("utf-8"))
        except (ValueError, UnicodeDecodeError) as exc:
            logger.warning("cache entry %r held invalid JSON: %s", key, exc)
            return None

    def put_json(self, key: str, value: object, ttl: float | None = None) -> None:
        self.put(key, json.dumps(value).encode("utf-8"), ttl=ttl)
