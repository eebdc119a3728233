"""Deterministic mock embeddings derived from SHA-256.

The hash-mock backend lets the whole pipeline run without any model:
identical inputs map to identical unit vectors on every platform, and
distinct inputs are effectively never collinear.
"""

from __future__ import annotations

import hashlib

import numpy as np

from .types import EmbeddingVector

_BYTES_PER_COMPONENT = 8


def hash_embed(key: str, dim: int, *, provider_id: str = "hash-mock") -> EmbeddingVector:
    """Expand SHA-256(key) by counter-mode rehashing into ``dim`` reals in
    [-1, 1] and normalize to unit length.

    Stable across runs and platforms: the byte stream is consumed as
    big-endian uint64 regardless of host endianness.
    """
    if dim < 2:
        raise ValueError("hash embeddings need dim >= 2")
    encoded = key.encode("utf-8")
    raw = bytearray()
    counter = 0
    needed = dim * _BYTES_PER_COMPONENT
    while len(raw) < needed:
        raw.extend(hashlib.sha256(encoded + counter.to_bytes(4, "big")).digest())
        counter += 1
    ints = np.frombuffer(bytes(raw[:needed]), dtype=">u8").astype(np.float64)
    values = ints / (2.0**63) - 1.0
    return EmbeddingVector.from_raw(values, provider_id)
