"""Reference-set assembly: search, fetch, cache."""

from __future__ import annotations

import logging
from concurrent.futures import ThreadPoolExecutor

from ..cache import TTLCache, make_key
from ..errors import CrossmodalError, FormatError, TransportError
from .fetch import ImageFetcher
from .search import ImageSearchEngine
from .types import DEFAULT_K, ReferenceImage, ReferenceImageSet

logger = logging.getLogger(__name__)


class ReferenceImageCollector:
    """Crawls up to ``k`` reference images per entity.

    Results are cached under ``("refset", kb_id, k)``; a repeat call
    within the TTL performs zero network calls. Individual fetch
    failures are skipped (the set may come back smaller than ``k``, or
    empty: the no-evidence outcome is the caller's to interpret).
    """

    def __init__(
        self,
        engine: ImageSearchEngine,
        fetcher: ImageFetcher,
        cache: TTLCache | None = None,
        *,
        parallelism: int = 4,
        ttl: float | None = None,
    ):
        self.engine = engine
        self.fetcher = fetcher
        self.cache = cache
        self.parallelism = max(1, parallelism)
        self.ttl = ttl

    def get_reference_set(self, kb_id: str, query: str, k: int = DEFAULT_K) -> ReferenceImageSet:
        cache_key = make_key("refset", kb_id, k)
        if self.cache is not None:
            cached = self.cache.get_json(cache_key)
            if cached is not None:
                return ReferenceImageSet.from_json(cached)

        warnings: list[str] = []
        urls = self.engine.search(query, k, kb_id=kb_id)
        images = self._fetch_all(urls, warnings)
        refset = ReferenceImageSet(
            kb_id=kb_id,
            query=query,
            images=tuple(images),
            k=k,
            warnings=tuple(warnings),
        )
        if self.cache is not None:
            self.cache.put_json(cache_key, refset.to_json(), ttl=self.ttl)
        return refset

    def _fetch_all(self, urls: list[str], warnings: list[str]) -> list[ReferenceImage]:
        if not urls:
            return []
        results: list[ReferenceImage | None] = [None] * len(urls)

        def fetch_one(index: int, url: str) -> None:
            try:
                results[index] = self.fetcher.fetch(url)
            except (TransportError, FormatError, CrossmodalError) as exc:
                warnings.append(f"skipped {url}: {exc}")

        with ThreadPoolExecutor(max_workers=self.parallelism) as pool:
            futures = [pool.submit(fetch_one, i, url) for i, url in enumerate(urls)]
            for future in futures:
                future.result()
        return [img for img in results if img is not None]
