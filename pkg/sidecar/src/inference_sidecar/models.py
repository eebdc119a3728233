"""Embedding model bundles.

A bundle names the architecture, the expected output dimension, the
weights file, and the preprocessing constants. Checkpoint choice is
configuration: any torch module whose pooled output matches ``dim``
can stand behind a modality. Two architectures ship here:

* ``small_conv`` — a compact conv net used for development and tests
  (weights generated locally with a fixed seed, see ``weights.py``);
* ``resnet18`` / ``resnet50`` — torchvision backbones with the
  classifier head stripped, for real deployments.

Inference runs in deterministic mode: eval, no-grad, single thread.
The same bytes always embed to the same vector.
"""

from __future__ import annotations

import io
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
import torch
from PIL import Image, UnidentifiedImageError
from torch import nn

MODALITIES = ("face", "location", "event")

torch.set_num_threads(1)


class DecodeError(ValueError):
    pass


@dataclass(frozen=True)
class PreprocessSpec:
    resize: int = 64
    mean: tuple[float, float, float] = (0.5, 0.5, 0.5)
    std: tuple[float, float, float] = (0.5, 0.5, 0.5)


class SmallConvEmbedder(nn.Module):
    """Three conv blocks, global average pool, ``dim`` channels out."""

    def __init__(self, dim: int):
        super().__init__()
        self.features = nn.Sequential(
            nn.Conv2d(3, 16, 3, stride=2, padding=1),
            nn.ReLU(),
            nn.Conv2d(16, 32, 3, stride=2, padding=1),
            nn.ReLU(),
            nn.Conv2d(32, dim, 3, stride=2, padding=1),
        )
        self.pool = nn.AdaptiveAvgPool2d(1)

    def forward(self, x):
        return self.pool(self.features(x)).flatten(1)


def build_arch(arch: str, dim: int) -> nn.Module:
    if arch == "small_conv":
        return SmallConvEmbedder(dim)
    if arch in ("resnet18", "resnet50"):
        import torchvision.models

        backbone = getattr(torchvision.models, arch)(weights=None)
        feature_dim = backbone.fc.in_features
        if feature_dim != dim:
            raise ValueError(f"{arch} emits {feature_dim}-d features, bundle says {dim}")
        backbone.fc = nn.Identity()
        return backbone
    raise ValueError(f"unknown architecture {arch!r}")


@dataclass
class ModelBundle:
    modality: str
    arch: str
    dim: int
    weights_path: str
    preprocess: PreprocessSpec = field(default_factory=PreprocessSpec)

    def provider_id(self) -> str:
        return f"sidecar/{self.arch}/{self.modality}-{self.dim}"

    def load(self) -> "LoadedModel":
        path = Path(self.weights_path)
        if not path.exists():
            raise FileNotFoundError(f"weights file missing: {path}")
        module = build_arch(self.arch, self.dim)
        state = torch.load(path, map_location="cpu", weights_only=True)
        module.load_state_dict(state)
        module.eval()
        return LoadedModel(bundle=self, module=module)


@dataclass
class LoadedModel:
    bundle: ModelBundle
    module: nn.Module

    def _decode(self, image_bytes: bytes, bbox) -> Image.Image:
        try:
            image = Image.open(io.BytesIO(image_bytes))
            image.load()
        except (UnidentifiedImageError, OSError) as exc:
            raise DecodeError(f"undecodable image: {exc}") from exc
        image = image.convert("RGB")
        if bbox is not None:
            x, y, w, h = bbox
            if w < 1 or h < 1 or x + w > image.width or y + h > image.height:
                raise DecodeError(
                    f"bbox {bbox} outside image bounds {image.width}x{image.height}"
                )
            image = image.crop((x, y, x + w, y + h))
        return image

    def embed(self, image_bytes: bytes, bbox=None) -> np.ndarray:
        """Unit-norm float32 vector for the image (or face crop)."""
        spec = self.bundle.preprocess
        image = self._decode(image_bytes, bbox)
        image = image.resize((spec.resize, spec.resize), Image.BILINEAR)
        array = np.asarray(image, dtype=np.float32) / 255.0
        array = (array - np.asarray(spec.mean, dtype=np.float32)) / np.asarray(
            spec.std, dtype=np.float32
        )
        tensor = torch.from_numpy(array.transpose(2, 0, 1)).unsqueeze(0)
        with torch.no_grad():
            features = self.module(tensor).squeeze(0).numpy().astype(np.float64)
        norm = float(np.linalg.norm(features))
        if norm < 1e-12:
            raise DecodeError("model produced a degenerate (zero) embedding")
        return (features / norm).astype(np.float32)
