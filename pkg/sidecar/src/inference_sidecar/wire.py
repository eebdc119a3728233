"""Frame codec for the provider RPC contract, server side.

Implements version 1 of ``schemas/provider_rpc.md``: big-endian
integers, IEEE-754 big-endian f32, and u32 length prefixes on byte/str
fields. Malformed frames raise ``WireError``, which the server maps to
INVALID_ARGUMENT.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass

import numpy as np

WIRE_VERSION = 1

MODALITY_CODES = {"face": 1, "location": 2, "event": 3}
MODALITY_NAMES = {code: name for name, code in MODALITY_CODES.items()}

STATUS_CODES = {"ok": 1, "degraded": 2}


class WireError(ValueError):
    pass


class Reader:
    def __init__(self, data: bytes):
        self._data = data
        self._pos = 0

    def _take(self, n: int) -> bytes:
        chunk = self._data[self._pos : self._pos + n]
        if len(chunk) != n:
            raise WireError("truncated frame")
        self._pos += n
        return chunk

    def u8(self) -> int:
        return self._take(1)[0]

    def u32(self) -> int:
        return struct.unpack(">I", self._take(4))[0]

    def f32(self) -> float:
        return struct.unpack(">f", self._take(4))[0]

    def bytes_field(self) -> bytes:
        return self._take(self.u32())

    def str_field(self) -> str:
        try:
            return self.bytes_field().decode("utf-8")
        except UnicodeDecodeError as exc:
            raise WireError("invalid UTF-8 in string field") from exc

    def done(self) -> bool:
        return self._pos == len(self._data)

    def expect_version(self) -> None:
        version = self.u8()
        if version != WIRE_VERSION:
            raise WireError(f"unsupported wire version {version}")


@dataclass(frozen=True)
class EmbedCall:
    modality: str
    image: bytes
    bbox: tuple[int, int, int, int] | None


def read_embed_request(reader: Reader) -> EmbedCall:
    reader.expect_version()
    code = reader.u8()
    if code not in MODALITY_NAMES:
        raise WireError(f"unknown modality code {code}")
    has_bbox = reader.u8()
    bbox = None
    if has_bbox == 1:
        bbox = tuple(reader.u32() for _ in range(4))
    elif has_bbox != 0:
        raise WireError(f"invalid has_bbox flag {has_bbox}")
    image = reader.bytes_field()
    return EmbedCall(modality=MODALITY_NAMES[code], image=image, bbox=bbox)


def decode_embed_request(data: bytes) -> EmbedCall:
    reader = Reader(data)
    call = read_embed_request(reader)
    if not reader.done():
        raise WireError("trailing bytes after embed request")
    return call


def decode_batch_request(data: bytes) -> list[EmbedCall]:
    reader = Reader(data)
    reader.expect_version()
    count = reader.u32()
    calls = [read_embed_request(reader) for _ in range(count)]
    if not reader.done():
        raise WireError("trailing bytes after batch request")
    return calls


def decode_detect_request(data: bytes) -> bytes:
    reader = Reader(data)
    reader.expect_version()
    image = reader.bytes_field()
    if not reader.done():
        raise WireError("trailing bytes after detect request")
    return image


def encode_embed_response(provider_id: str, values: np.ndarray) -> bytes:
    encoded_id = provider_id.encode("utf-8")
    frame = bytearray()
    frame += struct.pack(">B", WIRE_VERSION)
    frame += struct.pack(">I", len(encoded_id)) + encoded_id
    frame += struct.pack(">I", values.size)
    frame += np.asarray(values, dtype=">f4").tobytes()
    return bytes(frame)


def encode_batch_response(responses: list[bytes]) -> bytes:
    frame = bytearray(struct.pack(">BI", WIRE_VERSION, len(responses)))
    for response in responses:
        frame += response
    return bytes(frame)


def encode_detect_response(detections: list[tuple[int, int, int, int, float]]) -> bytes:
    frame = bytearray(struct.pack(">BI", WIRE_VERSION, len(detections)))
    for x, y, w, h, confidence in detections:
        frame += struct.pack(">IIIIf", x, y, w, h, confidence)
    return bytes(frame)


def encode_health_response(entries: list[dict]) -> bytes:
    frame = bytearray(struct.pack(">BI", WIRE_VERSION, len(entries)))
    for entry in entries:
        provider_id = entry["provider_id"].encode("utf-8")
        detail = entry["detail"].encode("utf-8")
        frame += struct.pack(
            ">BB", MODALITY_CODES[entry["modality"]], STATUS_CODES[entry["status"]]
        )
        frame += struct.pack(">I", len(provider_id)) + provider_id
        frame += struct.pack(">I", entry["dim"])
        frame += struct.pack(">I", len(detail)) + detail
    return bytes(frame)
