"""Client for the remote embedding/detection provider.

Transport is gRPC (binary payloads over HTTP/2) with hand-rolled frame
codecs; the wire schema is versioned in-repo at
``schemas/provider_rpc.md``. The inference sidecar implements the server
side of the same contract.
"""

from __future__ import annotations

import struct

import numpy as np

from ..errors import ConfigurationError, FormatError, TransportError
from .providers import check_bbox_contract
from .types import EmbeddingVector, FaceDetection, ImagePayload, Modality, ProviderDescriptor

RPC_SCHEMA_VERSION = 1
SERVICE_PREFIX = "/crossmodal.provider.v1"

MODALITY_CODES = {Modality.FACE: 1, Modality.LOCATION: 2, Modality.EVENT: 3}
MODALITY_FROM_CODE = {v: k for k, v in MODALITY_CODES.items()}

STATUS_OK = 1
STATUS_DEGRADED = 2


class _Reader:
    def __init__(self, data: bytes):
        self._data = data
        self._pos = 0

    def u8(self) -> int:
        (value,) = struct.unpack_from(">B", self._data, self._pos)
        self._pos += 1
        return value

    def u32(self) -> int:
        (value,) = struct.unpack_from(">I", self._data, self._pos)
        self._pos += 4
        return value

    def f32(self) -> float:
        (value,) = struct.unpack_from(">f", self._data, self._pos)
        self._pos += 4
        return value

    def raw(self, n: int) -> bytes:
        chunk = self._data[self._pos : self._pos + n]
        if len(chunk) != n:
            raise ValueError("truncated frame")
        self._pos += n
        return chunk

    def bytes_field(self) -> bytes:
        return self.raw(self.u32())

    def str_field(self) -> str:
        return self.bytes_field().decode("utf-8")


def _check_version(version: int) -> None:
    if version != RPC_SCHEMA_VERSION:
        raise ValueError(f"unsupported RPC schema version {version}")


def encode_embed_request(
    modality: Modality, image: bytes, bbox: tuple[int, int, int, int] | None = None
) -> bytes:
    frame = bytearray()
    frame += struct.pack(">BBB", RPC_SCHEMA_VERSION, MODALITY_CODES[modality], 1 if bbox else 0)
    if bbox:
        frame += struct.pack(">IIII", *bbox)
    frame += struct.pack(">I", len(image))
    frame += image
    return bytes(frame)


def decode_embed_response(data: bytes) -> tuple[str, np.ndarray]:
    reader = _Reader(data)
    _check_version(reader.u8())
    provider_id = reader.str_field()
    dim = reader.u32()
    values = np.frombuffer(reader.raw(dim * 4), dtype=">f4").astype(np.float64)
    return provider_id, values


def encode_embed_batch_request(
    items: list[tuple[Modality, bytes, tuple[int, int, int, int] | None]],
) -> bytes:
    frame = bytearray(struct.pack(">BI", RPC_SCHEMA_VERSION, len(items)))
    for modality, image, bbox in items:
        frame += encode_embed_request(modality, image, bbox)
    return bytes(frame)


def decode_embed_batch_response(data: bytes) -> list[tuple[str, np.ndarray]]:
    reader = _Reader(data)
    _check_version(reader.u8())
    count = reader.u32()
    responses = []
    for _ in range(count):
        _check_version(reader.u8())
        provider_id = reader.str_field()
        dim = reader.u32()
        values = np.frombuffer(reader.raw(dim * 4), dtype=">f4").astype(np.float64)
        responses.append((provider_id, values))
    return responses


def encode_detect_request(image: bytes) -> bytes:
    return struct.pack(">BI", RPC_SCHEMA_VERSION, len(image)) + image


def decode_detect_response(data: bytes) -> list[FaceDetection]:
    reader = _Reader(data)
    _check_version(reader.u8())
    count = reader.u32()
    detections = []
    for _ in range(count):
        x, y, w, h = (reader.u32() for _ in range(4))
        confidence = reader.f32()
        detections.append(FaceDetection(x=x, y=y, w=w, h=h, confidence=confidence))
    return detections


def decode_health_response(data: bytes) -> dict[str, dict]:
    reader = _Reader(data)
    _check_version(reader.u8())
    count = reader.u32()
    report = {}
    for _ in range(count):
        modality = MODALITY_FROM_CODE[reader.u8()]
        status = reader.u8()
        provider_id = reader.str_field()
        dim = reader.u32()
        detail = reader.str_field()
        report[modality.value] = {
            "status": "ok" if status == STATUS_OK else "degraded",
            "provider_id": provider_id,
            "dim": dim,
            "detail": detail,
        }
    return report


def _identity(b: bytes) -> bytes:
    return b


class _RpcBase:
    def __init__(self, address: str, *, timeout: float = 30.0):
        self.address = address
        self.timeout = timeout
        self._channel = None

    def _call(self, method: str, payload: bytes) -> bytes:
        import grpc

        if self._channel is None:
            self._channel = grpc.insecure_channel(self.address)
        callable_ = self._channel.unary_unary(
            f"{SERVICE_PREFIX}/{method}",
            request_serializer=_identity,
            response_deserializer=_identity,
        )
        try:
            return callable_(payload, timeout=self.timeout)
        except grpc.RpcError as exc:
            code = exc.code()
            detail = exc.details() or str(code)
            if code == grpc.StatusCode.INVALID_ARGUMENT:
                raise FormatError(f"provider rejected payload: {detail}") from exc
            if code == grpc.StatusCode.FAILED_PRECONDITION:
                raise ConfigurationError(f"provider not ready: {detail}") from exc
            raise TransportError(f"provider RPC failed: {detail}") from exc

    def close(self) -> None:
        if self._channel is not None:
            self._channel.close()
            self._channel = None


class RpcEmbedProvider(_RpcBase):
    """Remote provider for one modality."""

    def __init__(self, address: str, modality: Modality, *, dim: int | None = None, timeout: float = 30.0):
        super().__init__(address, timeout=timeout)
        self.modality = modality
        self._dim = dim
        self._provider_id = f"remote-rpc/{modality.value}"

    def descriptor(self) -> ProviderDescriptor:
        return ProviderDescriptor(self._provider_id, self.modality, self._dim or 0, "remote-rpc")

    def _to_vector(self, provider_id: str, values) -> EmbeddingVector:
        if self._dim is not None and values.size != self._dim:
            raise TransportError(
                f"provider returned dim {values.size}, expected {self._dim}", retryable=False
            )
        self._dim = values.size
        self._provider_id = provider_id
        return EmbeddingVector.from_raw(values, provider_id)

    def embed(self, image: ImagePayload, bbox=None) -> EmbeddingVector:
        check_bbox_contract(self.modality, bbox)
        payload = encode_embed_request(self.modality, image.content, bbox)
        provider_id, values = decode_embed_response(self._call("Embed", payload))
        return self._to_vector(provider_id, values)

    def embed_batch(
        self, items: list[tuple[ImagePayload, tuple[int, int, int, int] | None]]
    ) -> list[EmbeddingVector]:
        """Batch variant; the response preserves request order."""
        if not items:
            return []
        for _, bbox in items:
            check_bbox_contract(self.modality, bbox)
        payload = encode_embed_batch_request(
            [(self.modality, image.content, bbox) for image, bbox in items]
        )
        responses = decode_embed_batch_response(self._call("EmbedBatch", payload))
        if len(responses) != len(items):
            raise TransportError(
                f"batch returned {len(responses)} results for {len(items)} requests",
                retryable=False,
            )
        return [self._to_vector(provider_id, values) for provider_id, values in responses]


class RpcFaceDetector(_RpcBase):
    def detect(self, image: ImagePayload) -> list[FaceDetection]:
        payload = encode_detect_request(image.content)
        detections = decode_detect_response(self._call("DetectFaces", payload))
        return sorted(detections, key=lambda d: -d.confidence)


class RpcHealthClient(_RpcBase):
    def health(self) -> dict[str, dict]:
        return decode_health_response(self._call("Health", b""))
