import io

import pytest
from PIL import Image

from inference_sidecar.config import SidecarConfig
from inference_sidecar.models import ModelBundle
from inference_sidecar.weights import make_dev_weights


def png_bytes(width=96, height=96, color=(200, 40, 40)) -> bytes:
    buf = io.BytesIO()
    Image.new("RGB", (width, height), color).save(buf, format="PNG")
    return buf.getvalue()


@pytest.fixture(scope="session")
def dev_weights(tmp_path_factory):
    dest = tmp_path_factory.mktemp("weights")
    return make_dev_weights(dest, dim=32, seed=7)


@pytest.fixture(scope="session")
def bundles(dev_weights):
    return [
        ModelBundle(modality=modality, arch="small_conv", dim=32, weights_path=str(path))
        for modality, path in dev_weights.items()
    ]


@pytest.fixture(scope="session")
def portrait_png(tmp_path_factory) -> bytes:
    """A real photograph with exactly one frontal face (bundled with
    scikit-image), used as the pinned golden fixture."""
    from skimage import data

    image = Image.fromarray(data.astronaut())
    buf = io.BytesIO()
    image.save(buf, format="PNG")
    return buf.getvalue()


@pytest.fixture(scope="session")
def config_file(tmp_path_factory, dev_weights):
    path = tmp_path_factory.mktemp("config") / "sidecar.yaml"
    models = "\n".join(
        f"  {modality}:\n    arch: small_conv\n    dim: 32\n    weights: {weights}"
        for modality, weights in dev_weights.items()
    )
    path.write_text(
        f"port: 0\nmax_parallel: 2\nmodels:\n{models}\n"
        "face_detector:\n  kind: lbp-cascade\n  min_size: 48\n",
        encoding="utf-8",
    )
    return path


@pytest.fixture(scope="session")
def sidecar_config(config_file) -> SidecarConfig:
    return SidecarConfig.from_file(config_file)
