"""Reader and writer for the framed record container the dataset ships in.

Each record on disk is:

    uint64 little-endian payload length
    uint32 masked checksum of those 8 length bytes
    payload
    uint32 masked checksum of the payload
"""

import struct
from typing import Iterable, Iterator

from .crc32c import masked_crc32c


class RecordError(ValueError):
    """Framing or checksum problem in a record stream."""

    def __init__(self, index: int, message: str):
        self.index = index
        super().__init__(f"record {index}: {message}")


def read_records(path) -> Iterator[bytes]:
    """Yield record payloads in order; raises RecordError at the first bad frame."""
    with open(path, "rb") as handle:
        index = 0
        while True:
            header = handle.read(12)
            if not header:
                return
            if len(header) < 12:
                raise RecordError(index, "truncated length header")
            (length,) = struct.unpack("<Q", header[:8])
            (length_crc,) = struct.unpack("<I", header[8:])
            if masked_crc32c(header[:8]) != length_crc:
                raise RecordError(index, "length checksum mismatch")
            payload = handle.read(length)
            if len(payload) < length:
                raise RecordError(index, "truncated payload")
            footer = handle.read(4)
            if len(footer) < 4:
                raise RecordError(index, "truncated payload checksum")
            if masked_crc32c(payload) != struct.unpack("<I", footer)[0]:
                raise RecordError(index, "payload checksum mismatch")
            yield payload
            index += 1


def write_records(path, payloads: Iterable[bytes]) -> int:
    """Write payloads into a fresh record stream; returns the record count."""
    count = 0
    with open(path, "wb") as handle:
        for payload in payloads:
            header = struct.pack("<Q", len(payload))
            handle.write(header)
            handle.write(struct.pack("<I", masked_crc32c(header)))
            handle.write(payload)
            handle.write(struct.pack("<I", masked_crc32c(payload)))
            count += 1
    return count
