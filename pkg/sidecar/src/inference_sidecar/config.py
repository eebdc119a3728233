"""Sidecar configuration from YAML."""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

import yaml

from .models import MODALITIES, ModelBundle, PreprocessSpec


@dataclass
class SidecarConfig:
    port: int = 50051
    max_parallel: int = 4
    max_request_mib: int = 10
    bundles: list[ModelBundle] = field(default_factory=list)
    face_detector: dict = field(default_factory=dict)

    @property
    def max_request_bytes(self) -> int:
        return self.max_request_mib * 1024 * 1024

    @classmethod
    def from_file(cls, path: str | Path) -> "SidecarConfig":
        raw = yaml.safe_load(Path(path).read_text(encoding="utf-8")) or {}
        if not isinstance(raw, dict):
            raise ValueError(f"config root must be a mapping: {path}")
        bundles = []
        for modality, spec in (raw.get("models") or {}).items():
            if modality not in MODALITIES:
                raise ValueError(f"unknown modality {modality!r} in {path}")
            preprocess = PreprocessSpec(
                resize=spec.get("resize", 64),
                mean=tuple(spec.get("mean", (0.5, 0.5, 0.5))),
                std=tuple(spec.get("std", (0.5, 0.5, 0.5))),
            )
            bundles.append(
                ModelBundle(
                    modality=modality,
                    arch=spec.get("arch", "small_conv"),
                    dim=int(spec["dim"]),
                    weights_path=spec["weights"],
                    preprocess=preprocess,
                )
            )
        return cls(
            port=int(raw.get("port", 50051)),
            max_parallel=int(raw.get("max_parallel", 4)),
            max_request_mib=int(raw.get("max_request_mib", 10)),
            bundles=bundles,
            face_detector=raw.get("face_detector") or {},
        )
