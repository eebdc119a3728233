"""Face detection.

Default detector: the trained LBP frontal-face cascade that ships inside
scikit-image (originally from the OpenCV model zoo), so face detection
works offline with zero downloads. The cascade emits no per-window
score, so every detection carries confidence 1.0. Alternative detectors
plug in behind the same ``detect(image_bytes)`` interface via
configuration.
"""

from __future__ import annotations

import io
from dataclasses import dataclass

import numpy as np
from PIL import Image, UnidentifiedImageError

from .models import DecodeError


@dataclass
class LbpCascadeDetector:
    cascade_path: str | None = None
    scale_factor: float = 1.2
    step_ratio: float = 1.3
    min_size: int = 48
    max_size: int | None = None

    def __post_init__(self):
        from skimage.data import lbp_frontal_face_cascade_filename
        from skimage.feature import Cascade

        path = self.cascade_path or lbp_frontal_face_cascade_filename()
        self._cascade = Cascade(path)

    def detect(self, image_bytes: bytes) -> list[tuple[int, int, int, int, float]]:
        try:
            image = Image.open(io.BytesIO(image_bytes))
            image.load()
        except (UnidentifiedImageError, OSError) as exc:
            raise DecodeError(f"undecodable image: {exc}") from exc
        array = np.asarray(image.convert("RGB"))
        height, width = array.shape[:2]
        max_side = self.max_size or max(height, width)
        found = self._cascade.detect_multi_scale(
            img=array,
            scale_factor=self.scale_factor,
            step_ratio=self.step_ratio,
            min_size=(self.min_size, self.min_size),
            max_size=(max_side, max_side),
        )
        detections = []
        for hit in found:
            x = int(hit["c"])
            y = int(hit["r"])
            w = int(hit["width"])
            h = int(hit["height"])
            # clamp to the frame so downstream crops never go out of bounds
            x, y = max(0, x), max(0, y)
            w = min(w, width - x)
            h = min(h, height - y)
            if w > 0 and h > 0:
                detections.append((x, y, w, h, 1.0))
        return detections


def build_detector(config: dict | None) -> LbpCascadeDetector:
    config = dict(config or {})
    kind = config.pop("kind", "lbp-cascade")
    if kind != "lbp-cascade":
        raise ValueError(f"unknown face detector kind {kind!r}")
    return LbpCascadeDetector(**config)
