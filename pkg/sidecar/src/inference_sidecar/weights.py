"""Weights management.

Real checkpoints are fetched by ``fetch_weights`` from a manifest that
pins a URL and a full SHA-256 per modality; weights are never vendored
into the repository and a checksum mismatch aborts the install. See
``weights/manifest.example.json`` for the format.

``make_dev_weights`` generates small seeded bundles locally so the
sidecar (and its test suite) runs with zero downloads.
"""

from __future__ import annotations

import hashlib
import json
from pathlib import Path

import torch

from .models import MODALITIES, SmallConvEmbedder


def sha256_file(path: Path) -> str:
    digest = hashlib.sha256()
    with path.open("rb") as handle:
        for chunk in iter(lambda: handle.read(1 << 20), b""):
            digest.update(chunk)
    return digest.hexdigest()


def fetch_weights(manifest_path: str | Path, dest_dir: str | Path) -> list[Path]:
    """Download every manifest entry and verify its checksum.

    Manifest format::

        {"face": {"url": "https://...", "sha256": "<64 hex chars>",
                  "filename": "face.pt"}, ...}
    """
    import httpx

    manifest = json.loads(Path(manifest_path).read_text(encoding="utf-8"))
    dest = Path(dest_dir)
    dest.mkdir(parents=True, exist_ok=True)
    written = []
    for modality, entry in manifest.items():
        url = entry["url"]
        expected = entry["sha256"].lower()
        if len(expected) != 64:
            raise ValueError(f"{modality}: sha256 must be 64 hex characters")
        target = dest / entry.get("filename", f"{modality}.pt")
        response = httpx.get(url, follow_redirects=True, timeout=120.0)
        response.raise_for_status()
        target.write_bytes(response.content)
        actual = sha256_file(target)
        if actual != expected:
            target.unlink()
            raise ValueError(
                f"{modality}: checksum mismatch for {url}: got {actual}, expected {expected}"
            )
        written.append(target)
    return written


def make_dev_weights(dest_dir: str | Path, *, dim: int = 64, seed: int = 2024) -> dict[str, Path]:
    """Seeded small_conv state dicts, one per modality; bit-stable for a
    given torch version."""
    dest = Path(dest_dir)
    dest.mkdir(parents=True, exist_ok=True)
    paths = {}
    for offset, modality in enumerate(MODALITIES):
        torch.manual_seed(seed + offset)
        module = SmallConvEmbedder(dim)
        path = dest / f"{modality}.pt"
        torch.save(module.state_dict(), path)
        paths[modality] = path
    return paths
