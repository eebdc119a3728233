"""Deterministic gazetteer recognizer for tests and offline runs.

The live annotation service is an external dependency; this recognizer
reproduces its shape (spans plus linked candidates) from a TSV file of
``surface<TAB>kb_id`` entries so the rest of the pipeline can be
exercised hermetically.
"""

from __future__ import annotations

import re
from pathlib import Path

from ..errors import ConfigurationError
from .types import SUPPORTED_LANGUAGES, EntityCandidate, TextSpan


def check_language(language: str) -> None:
    if language not in SUPPORTED_LANGUAGES:
        raise ConfigurationError(
            f"unsupported language {language!r}; supported: {', '.join(SUPPORTED_LANGUAGES)}"
        )


def load_gazetteer(path: str | Path) -> dict[str, str]:
    """Parse ``surface<TAB>kb_id`` lines into a lookup table."""
    table: dict[str, str] = {}
    text = Path(path).read_text(encoding="utf-8")
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.rstrip("\n")
        if not line or line.startswith("#"):
            continue
        try:
            surface, kb_id = line.split("\t")
        except ValueError as exc:
            raise ConfigurationError(f"{path}:{lineno}: expected surface<TAB>kb_id") from exc
        if not surface or not kb_id:
            raise ConfigurationError(f"{path}:{lineno}: empty surface or kb_id")
        table[surface] = kb_id
    return table


class GazetteerAnnotator:
    """Finds exact surface matches at word boundaries.

    Overlapping matches resolve longest-first, then leftmost; the
    returned spans are non-overlapping and sorted by start offset.
    """

    def __init__(self, gazetteer: dict[str, str]):
        self.gazetteer = dict(gazetteer)

    @classmethod
    def from_file(cls, path: str | Path) -> "GazetteerAnnotator":
        return cls(load_gazetteer(path))

    def _matches(self, text: str) -> list[tuple[TextSpan, str]]:
        found: list[tuple[TextSpan, str]] = []
        for surface, kb_id in self.gazetteer.items():
            pattern = re.compile(rf"(?<!\w){re.escape(surface)}(?!\w)", re.UNICODE)
            for match in pattern.finditer(text):
                span = TextSpan(match.start(), match.end(), surface)
                found.append((span, kb_id))
        return found

    def recognize_spans(self, text: str, language: str = "en") -> list[TextSpan]:
        return [span for span, _ in self.annotate(text, language)]

    def annotate(
        self, text: str, language: str = "en"
    ) -> list[tuple[TextSpan, list[EntityCandidate]]]:
        """Spans with their candidate lists (a single full-confidence
        candidate per gazetteer hit)."""
        check_language(language)
        if not text:
            raise ValueError("text must be non-empty")
        matches = self._matches(text)
        matches.sort(key=lambda m: (-(m[0].end - m[0].start), m[0].start))
        taken: list[TextSpan] = []
        for span, kb_id in matches:
            if all(span.end <= t.start or span.start >= t.end for t in taken):
                taken.append(span)
        taken.sort(key=lambda s: s.start)
        by_span = {span: kb_id for span, kb_id in matches}
        return [
            (span, [EntityCandidate(kb_id=by_span[span], pagerank=1.0, span=span)])
            for span in taken
        ]
