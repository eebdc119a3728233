"""Face detectors.

The primary component ships two local detectors: a fixture detector fed
from an annotation file (``id<TAB>x,y,w,h,conf;x,y,w,h,conf`` per line)
and a full-frame detector that treats every decodable image as one face
covering the whole frame — the hash-mock backend's stand-in so person
scoring stays exercisable without a model. Real detection runs in the
inference sidecar behind the RPC contract.
"""

from __future__ import annotations

import io
from pathlib import Path
from typing import Protocol

from PIL import Image, UnidentifiedImageError

from ..errors import ConfigurationError, FormatError
from .types import FaceDetection, ImagePayload


class FaceDetector(Protocol):
    def detect(self, image: ImagePayload) -> list[FaceDetection]:
        """Detections sorted by descending confidence; may be empty."""
        ...


class FixtureFaceDetector:
    """Returns pre-annotated detections keyed by image id; images absent
    from the table count as face-free."""

    def __init__(self, table: dict[str, list[FaceDetection]]):
        self.table = table

    @classmethod
    def from_file(cls, path: str | Path) -> "FixtureFaceDetector":
        return cls(load_fixture_detections(path))

    def detect(self, image: ImagePayload) -> list[FaceDetection]:
        detections = self.table.get(image.image_id(), [])
        return sorted(detections, key=lambda d: -d.confidence)


class FullFrameFaceDetector:
    """One detection spanning the full decoded frame."""

    def detect(self, image: ImagePayload) -> list[FaceDetection]:
        try:
            with Image.open(io.BytesIO(image.content)) as img:
                width, height = img.size
        except (UnidentifiedImageError, OSError) as exc:
            raise FormatError(f"undecodable image {image.image_id()!r}: {exc}") from exc
        return [FaceDetection(x=0, y=0, w=width, h=height, confidence=1.0)]


def load_fixture_detections(path: str | Path) -> dict[str, list[FaceDetection]]:
    """Parse a detection fixture file.

    One line per image id; detections separated by ``;`` with fields
    ``x,y,w,h,confidence``. An id with an empty detection list marks an
    annotated face-free image.
    """
    table: dict[str, list[FaceDetection]] = {}
    text = Path(path).read_text(encoding="utf-8")
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split("\t")
        image_id = parts[0]
        detections: list[FaceDetection] = []
        if len(parts) > 1 and parts[1]:
            for chunk in parts[1].split(";"):
                try:
                    x, y, w, h, conf = chunk.split(",")
                    detections.append(
                        FaceDetection(
                            x=int(x), y=int(y), w=int(w), h=int(h), confidence=float(conf)
                        )
                    )
                except ValueError as exc:
                    raise ConfigurationError(
                        f"{path}:{lineno}: malformed detection {chunk!r}"
                    ) from exc
        table[image_id] = detections
    return table
