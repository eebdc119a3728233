"""Sidecar release criteria, one PASS/FAIL line each:

- every embed response unit-norm within 1e-5;
- dim constant per modality across many inputs;
- golden face count on the pinned portrait fixture stable across runs.
"""

import functools

import numpy as np

from inference_sidecar.faces import LbpCascadeDetector
from inference_sidecar.server import ModelRegistry

from tests.conftest import png_bytes
from tests.test_faces import GOLDEN_PORTRAIT_FACES


def criterion(name):
    def decorate(fn):
        @functools.wraps(fn)
        def wrapper(*args, **kwargs):
            try:
                result = fn(*args, **kwargs)
            except BaseException:
                print(f"[ACCEPTANCE] {name}: FAIL")
                raise
            print(f"[ACCEPTANCE] {name}: PASS")
            return result

        return wrapper

    return decorate


@criterion("sidecar-embed-norms-and-dims")
def test_embed_norms_and_dims(bundles):
    registry = ModelRegistry.from_bundles(bundles)
    for modality, model in registry.loaded.items():
        dims = set()
        for n in range(10):
            image = png_bytes(96 + n, 96, color=(20 * n % 255, 90, 140))
            bbox = (0, 0, 48, 48) if modality == "face" else None
            values = model.embed(image, bbox)
            assert abs(float(np.linalg.norm(values.astype(np.float64))) - 1.0) < 1e-5
            dims.add(values.size)
        assert dims == {model.bundle.dim}, f"{modality} dim drifted: {dims}"


@criterion("sidecar-golden-face-count")
def test_golden_face_count_stable(portrait_png):
    detector = LbpCascadeDetector(min_size=60)
    counts = {len(detector.detect(portrait_png)) for _ in range(3)}
    assert counts == {GOLDEN_PORTRAIT_FACES}
