"""Domain types for visual features."""

from __future__ import annotations

import enum
import hashlib
from dataclasses import dataclass, field
from pathlib import PurePosixPath
from urllib.parse import urlparse

import numpy as np

UNIT_NORM_TOLERANCE = 1e-6


class Modality(str, enum.Enum):
    FACE = "face"
    LOCATION = "location"
    EVENT = "event"


@dataclass(frozen=True)
class EmbeddingVector:
    """Unit-norm feature vector emitted by a modality provider."""

    values: tuple[float, ...]
    provider_id: str

    def __post_init__(self):
        if len(self.values) < 1:
            raise ValueError("embedding must have at least one component")
        norm = float(np.linalg.norm(self.values))
        if abs(norm - 1.0) > UNIT_NORM_TOLERANCE:
            raise ValueError(f"embedding is not unit-norm (|v| = {norm!r})")

    @property
    def dim(self) -> int:
        return len(self.values)

    def as_array(self) -> np.ndarray:
        return np.asarray(self.values, dtype=np.float64)

    @classmethod
    def from_raw(cls, values, provider_id: str, *, normalize: bool = True) -> "EmbeddingVector":
        arr = np.asarray(values, dtype=np.float64).ravel()
        if normalize:
            norm = float(np.linalg.norm(arr))
            if norm < 1e-12:
                raise ValueError("cannot normalize a zero vector")
            arr = arr / norm
        return cls(values=tuple(float(v) for v in arr), provider_id=provider_id)


@dataclass(frozen=True)
class FaceDetection:
    """Face bounding box in pixel coordinates, origin top-left."""

    x: int
    y: int
    w: int
    h: int
    confidence: float

    def __post_init__(self):
        if self.w <= 0 or self.h <= 0:
            raise ValueError("face box must have positive width and height")
        if not 0.0 <= self.confidence <= 1.0:
            raise ValueError("confidence must lie in [0, 1]")

    @property
    def bbox(self) -> tuple[int, int, int, int]:
        return (self.x, self.y, self.w, self.h)


@dataclass(frozen=True)
class ProviderDescriptor:
    provider_id: str
    modality: Modality
    dim: int
    backend: str  # remote-rpc | fixture | hash-mock


@dataclass(frozen=True)
class ImagePayload:
    """Image bytes plus an optional logical name used for fixture keying."""

    content: bytes
    content_type: str | None = None
    name: str | None = None

    def image_id(self) -> str:
        """Stable identifier: the logical name when present, otherwise a
        content-hash prefix."""
        if self.name:
            return self.name
        return hashlib.sha256(self.content).hexdigest()[:16]

    @classmethod
    def from_file(cls, path, content_type: str | None = None) -> "ImagePayload":
        from pathlib import Path

        p = Path(path)
        return cls(content=p.read_bytes(), content_type=content_type, name=name_for_path(p))


def name_for_path(path) -> str:
    """Logical image id for a filesystem path: the last two path components
    with the extension stripped, e.g. ``Q42/00``.

    Two components keep ids unique across the per-entity fixture layout
    where every directory holds files named ``00.png``, ``01.png``, ...
    """
    p = PurePosixPath(str(path).replace("\\", "/"))
    stem = p.stem
    if p.parent.name:
        return f"{p.parent.name}/{stem}"
    return stem


def name_for_url(url: str) -> str:
    """Logical image id for a URL; file URLs reuse the path rule, remote
    URLs hash the full URL."""
    parsed = urlparse(url)
    if parsed.scheme in ("", "file"):
        return name_for_path(parsed.path)
    return hashlib.sha256(url.encode("utf-8")).hexdigest()[:16]


@dataclass(frozen=True)
class EntityVisualProfile:
    """Visual evidence for one entity.

    Persons hold a single aggregated face vector; locations and events
    hold one vector per reference image (the maximum is taken at scoring
    time).
    """

    kb_id: str
    modality: Modality
    vectors: tuple[EmbeddingVector, ...]
    warnings: tuple[str, ...] = field(default=())

    def __post_init__(self):
        if not self.vectors:
            raise ValueError("profile requires at least one vector")
        dims = {v.dim for v in self.vectors}
        providers = {v.provider_id for v in self.vectors}
        if len(dims) != 1:
            raise ValueError(f"profile vectors disagree on dim: {sorted(dims)}")
        if len(providers) != 1:
            raise ValueError(f"profile vectors disagree on provider: {sorted(providers)}")

    @property
    def dim(self) -> int:
        return self.vectors[0].dim
