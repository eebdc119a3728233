"""Image search engines behind a common interface.

The live engine talks to a configurable HTTP endpoint (Bing-style JSON
contract); the directory stub serves files from a local fixture tree so
tests and demos never touch the network.
"""

from __future__ import annotations

import logging
import os
from pathlib import Path
from typing import Protocol

import httpx

from ..errors import ConfigurationError, TransportError

logger = logging.getLogger(__name__)

_IMAGE_EXTENSIONS = (".jpg", ".jpeg", ".png", ".gif", ".webp", ".bmp")


class ImageSearchEngine(Protocol):
    def search(self, query: str, k: int, *, kb_id: str | None = None) -> list[str]:
        """Return at most ``k`` image URLs in engine rank order."""
        ...


def _check_search_args(query: str, k: int) -> None:
    if not query:
        raise ValueError("search query must be non-empty")
    if k < 1:
        raise ValueError("k must be >= 1")


class DirectoryImageSearch:
    """Serves fixture images laid out as ``<root>/<kb_id>/NN.<ext>``,
    consumed in lexicographic order. Falls back to a directory named
    after the query when no kb_id directory exists."""

    def __init__(self, root: str | Path):
        self.root = Path(root)
        if not self.root.is_dir():
            raise ConfigurationError(f"image fixture root does not exist: {self.root}")

    @staticmethod
    def _safe_name(name: str | None) -> str | None:
        # lookups stay direct children of the fixture root
        if not name or "/" in name or "\\" in name or name in (".", ".."):
            return None
        return name

    def search(self, query: str, k: int, *, kb_id: str | None = None) -> list[str]:
        _check_search_args(query, k)
        candidates = [
            self.root / name
            for name in (self._safe_name(kb_id), self._safe_name(query))
            if name is not None
        ]
        directory = next((d for d in candidates if d.is_dir()), None)
        if directory is None:
            return []
        files = sorted(
            p for p in directory.iterdir()
            if p.is_file() and p.suffix.lower() in _IMAGE_EXTENSIONS
        )
        return [p.resolve().as_uri() for p in files[:k]]


class HttpImageSearch:
    """Client for an HTTP image-search endpoint.

    Expects a JSON body with a ``value`` array of hits carrying a
    ``contentUrl``. The API key is read from the environment variable
    named by ``api_key_env`` and sent as ``Ocp-Apim-Subscription-Key``.
    """

    def __init__(
        self,
        base_url: str,
        *,
        api_key_env: str = "CROSSMODAL_ENGINE_API_KEY",
        client: httpx.Client | None = None,
        timeout: float = 10.0,
    ):
        self.base_url = base_url
        self.api_key_env = api_key_env
        self._client = client if client is not None else httpx.Client(timeout=timeout)

    def search(self, query: str, k: int, *, kb_id: str | None = None) -> list[str]:
        _check_search_args(query, k)
        headers = {}
        api_key = os.environ.get(self.api_key_env)
        if api_key:
            headers["Ocp-Apim-Subscription-Key"] = api_key
        try:
            response = self._client.get(
                self.base_url,
                params={"q": query, "count": k},
                headers=headers,
            )
        except httpx.HTTPError as exc:
            raise TransportError(f"image search failed for {query!r}: {exc}") from exc
        if response.status_code == 429 or response.status_code >= 500:
            raise TransportError(
                f"image search returned {response.status_code} for {query!r}"
            )
        if response.status_code >= 400:
            raise TransportError(
                f"image search rejected query {query!r}: {response.status_code}",
                retryable=False,
            )
        hits = response.json().get("value", [])
        urls = [hit["contentUrl"] for hit in hits if hit.get("contentUrl")]
        return urls[:k]
