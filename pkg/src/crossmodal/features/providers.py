"""Embedding providers.

Three backends produce the same :class:`EmbeddingVector` contract:

* ``hash-mock`` — deterministic vectors derived from the image id, for
  tests and offline demos;
* ``fixture`` — vectors read from a TSV file (one line per image id:
  ``id<TAB>v1,v2,...,vd``; face crops are keyed ``id@x,y,w,h``);
* ``remote-rpc`` — a client for the binary RPC contract served by the
  inference sidecar (see :mod:`crossmodal.features.rpc`).
"""

from __future__ import annotations

from pathlib import Path
from typing import Protocol

from ..errors import ConfigurationError
from .hashing import hash_embed
from .types import EmbeddingVector, ImagePayload, Modality, ProviderDescriptor


class EmbedProvider(Protocol):
    def descriptor(self) -> ProviderDescriptor: ...

    def embed(
        self, image: ImagePayload, bbox: tuple[int, int, int, int] | None = None
    ) -> EmbeddingVector:
        """Unit-norm vector for the image (face crop when bbox given)."""
        ...


def check_bbox_contract(modality: Modality, bbox) -> None:
    if modality is Modality.FACE and bbox is None:
        raise ConfigurationError("face embedding requires a bbox")
    if modality is not Modality.FACE and bbox is not None:
        raise ConfigurationError(f"{modality.value} embedding does not accept a bbox")


def crop_key(image_id: str, bbox: tuple[int, int, int, int] | None) -> str:
    if bbox is None:
        return image_id
    x, y, w, h = bbox
    return f"{image_id}@{x},{y},{w},{h}"


class HashEmbedProvider:
    """Deterministic mock provider keyed by image id and face crop."""

    def __init__(self, modality: Modality, dim: int = 128):
        self.modality = modality
        self.dim = dim
        self.provider_id = f"hash-mock/{modality.value}/{dim}"

    def descriptor(self) -> ProviderDescriptor:
        return ProviderDescriptor(self.provider_id, self.modality, self.dim, "hash-mock")

    def embed(self, image: ImagePayload, bbox=None) -> EmbeddingVector:
        check_bbox_contract(self.modality, bbox)
        key = crop_key(image.image_id(), bbox)
        return hash_embed(f"{self.modality.value}:{key}", self.dim, provider_id=self.provider_id)


class FixtureEmbedProvider:
    """Provider backed by a vector table loaded from a fixture file."""

    def __init__(
        self,
        modality: Modality,
        table: dict[str, tuple[float, ...]],
        *,
        provider_id: str | None = None,
    ):
        if not table:
            raise ConfigurationError("fixture vector table is empty")
        dims = {len(v) for v in table.values()}
        if len(dims) != 1:
            raise ConfigurationError(f"fixture vectors disagree on dim: {sorted(dims)}")
        self.modality = modality
        self.table = table
        self.dim = dims.pop()
        self.provider_id = provider_id or f"fixture/{modality.value}/{self.dim}"

    @classmethod
    def from_file(cls, modality: Modality, path: str | Path, **kwargs) -> "FixtureEmbedProvider":
        return cls(modality, load_fixture_vectors(path), **kwargs)

    def descriptor(self) -> ProviderDescriptor:
        return ProviderDescriptor(self.provider_id, self.modality, self.dim, "fixture")

    def embed(self, image: ImagePayload, bbox=None) -> EmbeddingVector:
        check_bbox_contract(self.modality, bbox)
        key = crop_key(image.image_id(), bbox)
        if key not in self.table:
            raise ConfigurationError(f"no fixture vector for image id {key!r}")
        return EmbeddingVector.from_raw(self.table[key], self.provider_id)


def load_fixture_vectors(path: str | Path) -> dict[str, tuple[float, ...]]:
    """Parse a fixture vector file: ``id<TAB>v1,v2,...,vd`` per line."""
    table: dict[str, tuple[float, ...]] = {}
    text = Path(path).read_text(encoding="utf-8")
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        try:
            image_id, values = line.split("\t", 1)
            table[image_id] = tuple(float(v) for v in values.split(","))
        except ValueError as exc:
            raise ConfigurationError(f"{path}:{lineno}: malformed vector line") from exc
    return table
