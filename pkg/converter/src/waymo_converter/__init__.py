"""One-way converter from motion dataset scenario shards to JSON-lines interchange files."""

from .convert import (
    ANCHOR_MODES,
    ConversionReport,
    FileReport,
    convert,
    convert_file,
    convert_scenario,
    output_name,
)
from .crc32c import crc32c, masked_crc32c
from .schema import validate_record
from .tfrecord import RecordError, read_records, write_records
from .waymo import OBJECT_TYPE_NAMES, decode_scenario, decode_state, decode_track
from .wire import WireError

__version__ = "0.1.0"
