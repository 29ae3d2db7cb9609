from dataclasses import dataclass
import struct
import numpy as np

import gdcan.errors
import gdcan.hamming

"""
Library for 27 byte CAN logger records, differential timestamps and
chunking.

Records travel through the pipeline as numpy structured arrays of
RECORD_DTYPE; CanRecord is the single-record view of the same layout.
"""

RECORD_SIZE = 27

# timestamp (ns), identifier, ide, dlc, edl, brs, dir, channel, data_length, data
RECORD_STRUCT = struct.Struct('<QIBBBBBBB8s')

RECORD_DTYPE = np.dtype([('timestamp', '<u8'),
                         ('identifier', '<u4'),
                         ('ide', 'u1'),
                         ('dlc', 'u1'),
                         ('edl', 'u1'),
                         ('brs', 'u1'),
                         ('dir', 'u1'),
                         ('channel', 'u1'),
                         ('data_length', 'u1'),
                         ('data', 'u1', (8,))])

HALF_ROW = 'half_row'
FULL_ROW = 'full_row'
MULTI_ROW = 'multi_row'


@dataclass(frozen=True)
class CanRecord:
    timestamp: int = 0
    identifier: int = 0
    ide: int = 0
    dlc: int = 0
    edl: int = 0
    brs: int = 0
    dir: int = 0
    channel: int = 0
    data_length: int = 0
    data: bytes = bytes(8)


def validate_record(rec):
    limit = 2**29 if rec.ide else 2**11
    if not 0 <= rec.identifier < limit:
        raise gdcan.errors.FormatError('identifier 0x%x out of range for ide=%d' % (rec.identifier, rec.ide))
    if rec.data_length > 8:
        raise gdcan.errors.FormatError('data_length %d exceeds 8' % rec.data_length)
    if len(rec.data) != 8:
        raise gdcan.errors.FormatError('data must be 8 bytes, got %d' % len(rec.data))
    if any(rec.data[rec.data_length:]):
        raise gdcan.errors.FormatError('data bytes beyond data_length must be zero')

def serialize_record(rec):
    validate_record(rec)
    try:
        return RECORD_STRUCT.pack(rec.timestamp, rec.identifier, rec.ide, rec.dlc, rec.edl,
                                  rec.brs, rec.dir, rec.channel, rec.data_length, bytes(rec.data))
    except struct.error as e:
        raise gdcan.errors.FormatError('record field out of range: %s' % e) from None

def parse_record(data):
    if len(data) != RECORD_SIZE:
        raise gdcan.errors.FormatError('record must be %d bytes, got %d' % (RECORD_SIZE, len(data)))
    rec = CanRecord(*RECORD_STRUCT.unpack(bytes(data)))
    validate_record(rec)
    return rec

def records_to_array(recs):
    """
    Packs CanRecords into a structured array.
    """
    buffer = b''.join(serialize_record(rec) for rec in recs)
    return np.frombuffer(buffer, dtype=RECORD_DTYPE).copy()

def array_to_records(records):
    return [parse_record(records[i:i + 1].tobytes()) for i in range(len(records))]

def records_from_bytes(data):
    """
    Structured array view of concatenated raw records (the .gdr layout).
    Field values are not validated so that any logged byte pattern
    compresses losslessly.
    """
    if len(data) % RECORD_SIZE:
        raise gdcan.errors.FormatError('raw record stream of %d bytes is not a multiple of %d'
                                       % (len(data), RECORD_SIZE))
    return np.frombuffer(bytes(data), dtype=RECORD_DTYPE).copy()

def records_to_bytes(records):
    return np.ascontiguousarray(records, dtype=RECORD_DTYPE).tobytes()

def delta_encode_timestamps(records):
    """
    Keeps the first timestamp and replaces every other one by its
    difference to the previous record, wrapping modulo 2**64.
    """
    records = np.array(records, dtype=RECORD_DTYPE, copy=True)
    ts = records['timestamp']
    if len(ts) > 1:
        ts[1:] = ts[1:] - ts[:-1].copy()
    return records

def delta_decode_timestamps(records):
    records = np.array(records, dtype=RECORD_DTYPE, copy=True)
    if len(records):
        records['timestamp'] = np.cumsum(records['timestamp'], dtype=np.uint64)
    return records


@dataclass(frozen=True)
class ChunkingConfig:
    mode: str
    rows: int
    code: gdcan.hamming.CodeParams

    @property
    def chunk_bytes(self):
        if self.mode == HALF_ROW:
            return (RECORD_SIZE + 1) // 2
        return RECORD_SIZE * self.rows

    @property
    def header_byte(self):
        """
        0 = half_row, 1 = full_row, r >= 2 = multi_row(r).
        """
        if self.mode == HALF_ROW:
            return 0
        return self.rows

    @property
    def label(self):
        if self.mode == MULTI_ROW:
            return 'multi:%d' % self.rows
        return {HALF_ROW: 'half', FULL_ROW: 'full'}[self.mode]

    def chunk_count(self, record_count):
        if self.mode == HALF_ROW:
            return 2 * record_count
        return -(-record_count // self.rows)


def chunking_config(mode=HALF_ROW, rows=1):
    """
    half_row -> H'(112,105), full_row -> H'(216,208),
    multi_row(r) -> choose_code(216 r). multi_row(1) is full_row.
    """
    if mode == HALF_ROW:
        return ChunkingConfig(HALF_ROW, 1, gdcan.hamming.choose_code(8 * (RECORD_SIZE + 1) // 2))
    if mode == MULTI_ROW and rows == 1:
        mode = FULL_ROW
    if mode == FULL_ROW:
        return ChunkingConfig(FULL_ROW, 1, gdcan.hamming.choose_code(8 * RECORD_SIZE))
    if mode != MULTI_ROW:
        raise gdcan.errors.ParameterError('unknown chunking mode %r' % mode)
    if not 2 <= rows <= 255:
        raise gdcan.errors.ParameterError('multi_row needs 2 to 255 records per chunk, got %d' % rows)
    return ChunkingConfig(MULTI_ROW, rows, gdcan.hamming.choose_code(8 * RECORD_SIZE * rows))

def chunking_from_string(text):
    """
    Parses the command line spelling: half, full or multi:N.
    """
    text = text.strip().lower()
    if text in ('half', HALF_ROW):
        return chunking_config(HALF_ROW)
    if text in ('full', FULL_ROW):
        return chunking_config(FULL_ROW)
    if text.startswith('multi:'):
        try:
            rows = int(text.split(':', 1)[1])
        except ValueError:
            raise gdcan.errors.ParameterError('bad multi-row chunking %r' % text) from None
        return chunking_config(MULTI_ROW, rows)
    raise gdcan.errors.ParameterError('chunking must be half, full or multi:N, got %r' % text)

def chunking_from_header_byte(value):
    if value == 0:
        return chunking_config(HALF_ROW)
    if value == 1:
        return chunking_config(FULL_ROW)
    return chunking_config(MULTI_ROW, value)

def records_to_chunks(records, config):
    """
    Packs records into chunk rows (2D uint8, one chunk per row).

    half_row:     each record gets one zero pad byte and is cut into two
                  14 byte chunks.
    full_row:     one record per chunk.
    multi_row(r): r consecutive records per chunk, the last group zero
                  padded.
    """
    raw = np.frombuffer(records_to_bytes(records), dtype=np.uint8).reshape(-1, RECORD_SIZE)
    if config.mode == HALF_ROW:
        padded = np.zeros((len(raw), RECORD_SIZE + 1), dtype=np.uint8)
        padded[:, :RECORD_SIZE] = raw
        return padded.reshape(-1, config.chunk_bytes)
    if config.mode == FULL_ROW:
        return raw.copy()

    group_count = config.chunk_count(len(raw))
    flat = np.zeros(group_count * config.chunk_bytes, dtype=np.uint8)
    flat[:raw.size] = raw.ravel()
    return flat.reshape(-1, config.chunk_bytes)

def chunks_to_records(chunks, config, record_count):
    chunks = np.asarray(chunks, dtype=np.uint8)
    if chunks.ndim != 2 or (len(chunks) and chunks.shape[1] != config.chunk_bytes):
        raise gdcan.errors.CorruptionError('chunks must be rows of %d bytes' % config.chunk_bytes)
    if len(chunks) != config.chunk_count(record_count):
        raise gdcan.errors.CorruptionError('%d chunks do not hold %d records' % (len(chunks), record_count))

    if config.mode == HALF_ROW:
        padded = chunks.reshape(-1, RECORD_SIZE + 1)
        if padded[:, RECORD_SIZE:].any():
            raise gdcan.errors.CorruptionError('nonzero half-row padding')
        raw = padded[:, :RECORD_SIZE]
    else:
        flat = chunks.ravel()
        if flat[record_count * RECORD_SIZE:].any():
            raise gdcan.errors.CorruptionError('nonzero multi-row padding')
        raw = flat[:record_count * RECORD_SIZE]
    return records_from_bytes(np.ascontiguousarray(raw).tobytes())

def read_gdr(file_name):
    with open(file_name, 'rb') as f:
        return records_from_bytes(f.read())

def write_gdr(records, file_name):
    with open(file_name, 'wb') as f:
        f.write(records_to_bytes(records))
    return file_name
