"""gRPC server for the provider contract.

Stateless between requests: model modules are loaded once and shared
read-only; requests run concurrently up to the configured thread count.
Payloads over the ingest cap and malformed frames abort with
INVALID_ARGUMENT; a modality whose weights failed to load aborts with
FAILED_PRECONDITION and shows up as ``degraded`` in the health report.
"""

from __future__ import annotations

import logging
from concurrent import futures
from dataclasses import dataclass, field

import grpc

from . import wire
from .faces import LbpCascadeDetector
from .models import DecodeError, LoadedModel, ModelBundle

logger = logging.getLogger(__name__)

SERVICE_PREFIX = "/crossmodal.provider.v1"
DEFAULT_MAX_REQUEST_BYTES = 10 * 1024 * 1024


@dataclass
class ModelRegistry:
    """Loaded models plus load failures, per modality."""

    loaded: dict[str, LoadedModel] = field(default_factory=dict)
    degraded: dict[str, str] = field(default_factory=dict)  # modality -> detail
    degraded_bundles: dict[str, ModelBundle] = field(default_factory=dict)

    @classmethod
    def from_bundles(cls, bundles: list[ModelBundle]) -> "ModelRegistry":
        registry = cls()
        for bundle in bundles:
            try:
                registry.loaded[bundle.modality] = bundle.load()
                logger.info("loaded %s (%s)", bundle.modality, bundle.provider_id())
            except (FileNotFoundError, RuntimeError, ValueError) as exc:
                registry.degraded[bundle.modality] = str(exc)
                registry.degraded_bundles[bundle.modality] = bundle
                logger.warning("modality %s degraded: %s", bundle.modality, exc)
        return registry

    def health_entries(self) -> list[dict]:
        entries = []
        for modality, model in sorted(self.loaded.items()):
            entries.append(
                {
                    "modality": modality,
                    "status": "ok",
                    "provider_id": model.bundle.provider_id(),
                    "dim": model.bundle.dim,
                    "detail": "",
                }
            )
        for modality, detail in sorted(self.degraded.items()):
            bundle = self.degraded_bundles.get(modality)
            entries.append(
                {
                    "modality": modality,
                    "status": "degraded",
                    "provider_id": bundle.provider_id() if bundle else f"sidecar/{modality}",
                    "dim": bundle.dim if bundle else 0,
                    "detail": detail,
                }
            )
        return entries


class ProviderService(grpc.GenericRpcHandler):
    def __init__(
        self,
        registry: ModelRegistry,
        detector: LbpCascadeDetector,
        *,
        max_request_bytes: int = DEFAULT_MAX_REQUEST_BYTES,
    ):
        self.registry = registry
        self.detector = detector
        self.max_request_bytes = max_request_bytes
        self._routes = {
            f"{SERVICE_PREFIX}/Embed": self._embed,
            f"{SERVICE_PREFIX}/EmbedBatch": self._embed_batch,
            f"{SERVICE_PREFIX}/DetectFaces": self._detect,
            f"{SERVICE_PREFIX}/Health": self._health,
        }

    def service(self, handler_call_details):
        handler = self._routes.get(handler_call_details.method)
        if handler is None:
            return None
        return grpc.unary_unary_rpc_method_handler(handler)

    # -- handlers (bytes in, bytes out)

    def _check_size(self, data: bytes, context) -> None:
        if len(data) > self.max_request_bytes:
            context.abort(
                grpc.StatusCode.INVALID_ARGUMENT,
                f"request exceeds {self.max_request_bytes} byte cap",
            )

    def _embed_one(self, call: wire.EmbedCall, context) -> bytes:
        if call.modality in self.registry.degraded:
            context.abort(
                grpc.StatusCode.FAILED_PRECONDITION,
                f"model for {call.modality} not loaded: {self.registry.degraded[call.modality]}",
            )
        model = self.registry.loaded.get(call.modality)
        if model is None:
            context.abort(
                grpc.StatusCode.FAILED_PRECONDITION,
                f"no model configured for {call.modality}",
            )
        if call.modality == "face" and call.bbox is None:
            context.abort(grpc.StatusCode.INVALID_ARGUMENT, "face embedding requires a bbox")
        if call.modality != "face" and call.bbox is not None:
            context.abort(
                grpc.StatusCode.INVALID_ARGUMENT,
                f"{call.modality} embedding does not accept a bbox",
            )
        try:
            values = model.embed(call.image, call.bbox)
        except DecodeError as exc:
            context.abort(grpc.StatusCode.INVALID_ARGUMENT, str(exc))
        return wire.encode_embed_response(model.bundle.provider_id(), values)

    def _embed(self, request: bytes, context) -> bytes:
        self._check_size(request, context)
        try:
            call = wire.decode_embed_request(request)
        except wire.WireError as exc:
            context.abort(grpc.StatusCode.INVALID_ARGUMENT, str(exc))
        return self._embed_one(call, context)

    def _embed_batch(self, request: bytes, context) -> bytes:
        self._check_size(request, context)
        try:
            calls = wire.decode_batch_request(request)
        except wire.WireError as exc:
            context.abort(grpc.StatusCode.INVALID_ARGUMENT, str(exc))
        responses = [self._embed_one(call, context) for call in calls]
        return wire.encode_batch_response(responses)

    def _detect(self, request: bytes, context) -> bytes:
        self._check_size(request, context)
        try:
            image = wire.decode_detect_request(request)
        except wire.WireError as exc:
            context.abort(grpc.StatusCode.INVALID_ARGUMENT, str(exc))
        try:
            detections = self.detector.detect(image)
        except DecodeError as exc:
            context.abort(grpc.StatusCode.INVALID_ARGUMENT, str(exc))
        return wire.encode_detect_response(detections)

    def _health(self, request: bytes, context) -> bytes:
        return wire.encode_health_response(self.registry.health_entries())


def build_server(
    registry: ModelRegistry,
    detector: LbpCascadeDetector,
    *,
    port: int = 50051,
    max_parallel: int = 4,
    max_request_bytes: int = DEFAULT_MAX_REQUEST_BYTES,
) -> tuple[grpc.Server, int]:
    """Returns the (unstarted) server and the bound port."""
    service = ProviderService(registry, detector, max_request_bytes=max_request_bytes)
    server = grpc.server(
        futures.ThreadPoolExecutor(max_workers=max_parallel),
        options=[
            ("grpc.max_receive_message_length", max_request_bytes + 1024),
            ("grpc.max_send_message_length", max_request_bytes + 1024),
        ],
    )
    server.add_generic_rpc_handlers((service,))
    bound = server.add_insecure_port(f"127.0.0.1:{port}" if port else "127.0.0.1:0")
    return server, bound
