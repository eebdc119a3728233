import io

import pytest
from PIL import Image

from inference_sidecar.faces import LbpCascadeDetector, build_detector
from inference_sidecar.models import DecodeError

from tests.conftest import png_bytes


@pytest.fixture(scope="module")
def detector():
    return LbpCascadeDetector(min_size=60)


GOLDEN_PORTRAIT_FACES = 1  # pinned from the first run on the bundled portrait


def test_golden_face_count_on_portrait(detector, portrait_png):
    detections = detector.detect(portrait_png)
    assert len(detections) == GOLDEN_PORTRAIT_FACES


def test_golden_count_stable_across_runs(detector, portrait_png):
    first = detector.detect(portrait_png)
    second = detector.detect(portrait_png)
    assert first == second


def test_blank_image_has_no_faces(detector):
    assert detector.detect(png_bytes(128, 128, color=(0, 0, 0))) == []


def test_bboxes_within_image_bounds(detector, portrait_png):
    with Image.open(io.BytesIO(portrait_png)) as img:
        width, height = img.size
    for x, y, w, h, confidence in detector.detect(portrait_png):
        assert 0 <= x and 0 <= y
        assert x + w <= width
        assert y + h <= height
        assert 0.0 <= confidence <= 1.0


def test_undecodable_bytes_rejected(detector):
    with pytest.raises(DecodeError):
        detector.detect(b"junk")


def test_build_detector_rejects_unknown_kind():
    with pytest.raises(ValueError, match="kind"):
        build_detector({"kind": "cnn-from-the-future"})
