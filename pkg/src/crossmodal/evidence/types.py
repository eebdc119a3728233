"""Domain types for crawled reference imagery."""

from __future__ import annotations

import base64
from dataclasses import dataclass, field

DEFAULT_K = 5


@dataclass(frozen=True)
class ReferenceImage:
    """One crawled evidence image with provenance."""

    source_url: str
    content: bytes
    content_type: str
    fetched_at: float  # UTC seconds

    def __post_init__(self):
        if not self.content:
            raise ValueError("reference image content must be non-empty")
        if not self.content_type.startswith("image/"):
            raise ValueError(f"not an image content type: {self.content_type!r}")


@dataclass(frozen=True)
class ReferenceImageSet:
    """Up to ``k`` evidence images crawled for one entity."""

    kb_id: str
    query: str
    images: tuple[ReferenceImage, ...]
    k: int = DEFAULT_K
    warnings: tuple[str, ...] = field(default=())

    def __post_init__(self):
        if self.k < 1:
            raise ValueError("k must be positive")
        if len(self.images) > self.k:
            raise ValueError(f"{len(self.images)} images exceed the k={self.k} cap")

    def to_json(self) -> dict:
        return {
            "kb_id": self.kb_id,
            "query": self.query,
            "k": self.k,
            "warnings": list(self.warnings),
            "images": [
                {
                    "source_url": img.source_url,
                    "content_type": img.content_type,
                    "fetched_at": img.fetched_at,
                    "content_b64": base64.b64encode(img.content).decode("ascii"),
                }
                for img in self.images
            ],
        }

    @classmethod
    def from_json(cls, data: dict) -> "ReferenceImageSet":
        return cls(
            kb_id=data["kb_id"],
            query=data["query"],
            k=data["k"],
            warnings=tuple(data.get("warnings", [])),
            images=tuple(
                ReferenceImage(
                    source_url=img["source_url"],
                    content=base64.b64decode(img["content_b64"]),
                    content_type=img["content_type"],
                    fetched_at=img["fetched_at"],
                )
                for img in data["images"]
            ),
        )
