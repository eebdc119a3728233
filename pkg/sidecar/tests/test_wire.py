import struct

import numpy as np
import pytest

from inference_sidecar import wire


def test_embed_request_round_trip():
    frame = bytearray()
    frame += struct.pack(">BBB", 1, 2, 0)  # version, location, no bbox
    frame += struct.pack(">I", 3) + b"img"
    call = wire.decode_embed_request(bytes(frame))
    assert call.modality == "location"
    assert call.image == b"img"
    assert call.bbox is None


def test_embed_request_with_bbox():
    frame = bytearray()
    frame += struct.pack(">BBB", 1, 1, 1)
    frame += struct.pack(">IIII", 4, 5, 32, 40)
    frame += struct.pack(">I", 2) + b"xy"
    call = wire.decode_embed_request(bytes(frame))
    assert call.modality == "face"
    assert call.bbox == (4, 5, 32, 40)


def test_truncated_frame_rejected():
    with pytest.raises(wire.WireError, match="truncated"):
        wire.decode_embed_request(struct.pack(">BBB", 1, 1, 1))


def test_wrong_version_rejected():
    frame = struct.pack(">BBB", 9, 2, 0) + struct.pack(">I", 0)
    with pytest.raises(wire.WireError, match="version"):
        wire.decode_embed_request(frame)


def test_unknown_modality_rejected():
    frame = struct.pack(">BBB", 1, 7, 0) + struct.pack(">I", 0)
    with pytest.raises(wire.WireError, match="modality"):
        wire.decode_embed_request(frame)


def test_trailing_bytes_rejected():
    frame = struct.pack(">BBB", 1, 2, 0) + struct.pack(">I", 1) + b"a" + b"junk"
    with pytest.raises(wire.WireError, match="trailing"):
        wire.decode_embed_request(frame)


def test_embed_response_layout():
    values = np.array([0.6, 0.8], dtype=np.float32)
    frame = wire.encode_embed_response("sidecar/x", values)
    assert frame[0] == 1
    (id_len,) = struct.unpack_from(">I", frame, 1)
    assert frame[5 : 5 + id_len] == b"sidecar/x"
    (dim,) = struct.unpack_from(">I", frame, 5 + id_len)
    assert dim == 2
    decoded = np.frombuffer(frame[9 + id_len :], dtype=">f4")
    assert np.allclose(decoded, values)


def test_batch_request_round_trip():
    one = struct.pack(">BBB", 1, 2, 0) + struct.pack(">I", 1) + b"a"
    two = struct.pack(">BBB", 1, 3, 0) + struct.pack(">I", 1) + b"b"
    frame = struct.pack(">BI", 1, 2) + one + two
    calls = wire.decode_batch_request(frame)
    assert [c.modality for c in calls] == ["location", "event"]
    assert [c.image for c in calls] == [b"a", b"b"]


def test_detect_codec_round_trip():
    frame = wire.encode_detect_response([(1, 2, 30, 40, 1.0), (9, 9, 5, 5, 0.5)])
    reader = wire.Reader(frame)
    reader.expect_version()
    assert reader.u32() == 2
    assert (reader.u32(), reader.u32(), reader.u32(), reader.u32()) == (1, 2, 30, 40)
    assert reader.f32() == 1.0


def test_health_codec():
    frame = wire.encode_health_response(
        [
            {"modality": "face", "status": "ok", "provider_id": "p", "dim": 32, "detail": ""},
            {"modality": "event", "status": "degraded", "provider_id": "q", "dim": 0,
             "detail": "weights missing"},
        ]
    )
    reader = wire.Reader(frame)
    reader.expect_version()
    assert reader.u32() == 2
    assert reader.u8() == wire.MODALITY_CODES["face"]
    assert reader.u8() == wire.STATUS_CODES["ok"]
    assert reader.str_field() == "p"
    assert reader.u32() == 32
    assert reader.str_field() == ""
