"""Minimal protobuf wire-format decoder.

Walks a serialized message field by field. Values are returned raw: ints for
varints, bytes for length-delimited and fixed-width fields; the caller applies
the message schema. Deprecated group wire types are rejected.
"""

import struct
from typing import Iterator, List, Tuple

VARINT = 0
FIXED64 = 1
LENGTH_DELIMITED = 2
FIXED32 = 5


class WireError(ValueError):
    """Malformed protobuf bytes."""


def read_varint(data: bytes, pos: int) -> Tuple[int, int]:
    result = 0
    shift = 0
    while True:
        if pos >= len(data):
            raise WireError("varint runs past the end of the buffer")
        byte = data[pos]
        pos += 1
        result |= (byte & 0x7F) << shift
        if not byte & 0x80:
            return result, pos
        shift += 7
        if shift >= 70:
            raise WireError("varint longer than 10 bytes")


def iter_fields(data: bytes) -> Iterator[Tuple[int, int, object]]:
    """Yield (field_number, wire_type, raw_value) triples."""
    pos = 0
    while pos < len(data):
        tag, pos = read_varint(data, pos)
        field_number = tag >> 3
        wire_type = tag & 7
        if field_number == 0:
            raise WireError("field number 0")
        if wire_type == VARINT:
            value, pos = read_varint(data, pos)
        elif wire_type == FIXED64:
            if pos + 8 > len(data):
                raise WireError("fixed64 runs past the end of the buffer")
            value = data[pos:pos + 8]
            pos += 8
        elif wire_type == LENGTH_DELIMITED:
            length, pos = read_varint(data, pos)
            if pos + length > len(data):
                raise WireError("length-delimited field runs past the end of the buffer")
            value = data[pos:pos + length]
            pos += length
        elif wire_type == FIXED32:
            if pos + 4 > len(data):
                raise WireError("fixed32 runs past the end of the buffer")
            value = data[pos:pos + 4]
            pos += 4
        else:
            raise WireError(f"unsupported wire type {wire_type}")
        yield field_number, wire_type, value


def as_double(raw: bytes) -> float:
    return struct.unpack("<d", raw)[0]


def as_float(raw: bytes) -> float:
    return struct.unpack("<f", raw)[0]


def as_signed(value: int) -> int:
    # negative int32/int64 varints arrive as 64-bit two's complement
    return value - (1 << 64) if value >= (1 << 63) else value


def unpack_packed_doubles(raw: bytes) -> List[float]:
    if len(raw) % 8:
        raise WireError("packed double payload is not a multiple of 8 bytes")
    return [v[0] for v in struct.iter_unpack("<d", raw)]
