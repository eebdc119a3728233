"""Annotation-service client.

The live recognizer/linker sits behind an HTTP endpoint taking
``{"text": ..., "language": ...}`` and returning::

    {"annotations": [{"start": 0, "end": 5,
                      "candidates": [{"kb_id": "Q76", "pagerank": 0.7}]}]}

Candidates may be empty for spans the service recognized but could not
link; those fall through to the knowledge-base search fallback.
"""

from __future__ import annotations

from typing import Protocol

import httpx

from ..errors import TransportError
from .gazetteer import check_language
from .types import EntityCandidate, TextSpan


class Annotator(Protocol):
    def annotate(
        self, text: str, language: str = "en"
    ) -> list[tuple[TextSpan, list[EntityCandidate]]]: ...


class HttpAnnotator:
    def __init__(self, base_url: str, *, client: httpx.Client | None = None, timeout: float = 30.0):
        self.base_url = base_url
        self._client = client if client is not None else httpx.Client(timeout=timeout)

    def annotate(
        self, text: str, language: str = "en"
    ) -> list[tuple[TextSpan, list[EntityCandidate]]]:
        check_language(language)
        if not text:
            raise ValueError("text must be non-empty")
        try:
            response = self._client.post(
                self.base_url, json={"text": text, "language": language}
            )
            response.raise_for_status()
        except httpx.HTTPError as exc:
            raise TransportError(f"annotation service failed: {exc}") from exc
        results = []
        for item in response.json().get("annotations", []):
            span = TextSpan(item["start"], item["end"], text[item["start"] : item["end"]])
            candidates = [
                EntityCandidate(kb_id=c["kb_id"], pagerank=float(c.get("pagerank", 0.0)), span=span)
                for c in item.get("candidates", [])
            ]
            results.append((span, candidates))
        results.sort(key=lambda pair: pair[0].start)
        return results
