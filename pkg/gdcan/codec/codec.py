from dataclasses import dataclass, field
import io
import struct
import numpy as np

import gdcan.dictionary
import gdcan.errors
import gdcan.fingerprint
import gdcan.math
import gdcan.qc
import gdcan.records
import gdcan.transform

"""
Library for the online compressor / decompressor and its container format.

Container: a 28 byte StreamHeader followed by tokens, ended by 0xFF 0x02.

  0xxxxxxx                  primary id 0..127               (1 byte)
  10xxxxxx x               primary id 128..16511           (2 bytes, id - 128)
  110xxxxx x x             primary id 16512..2113663       (3 bytes, id - 16512)
  1110xxxx x               hybrid RAM id 0..4095           (2 bytes)
  1111xxxx x x             hybrid RAM id 4096..987135      (3 bytes, id - 4096, first byte != 0xFF)
  0xFF 0x00                reset
  0xFF 0x01 basis          new basis
  0xFF 0x02                end of stream

Every reference and every new basis is followed by the deviation:
ceil(m / 8) little-endian bytes, none in dedup-only streams.
"""

MAGIC = b'GDCB'
VERSION = 1

# magic, version, mode, chunking, m, l, fingerprint algo, dict_id, record count, flags
HEADER = struct.Struct('<4sBBBBHB8sQB')

RAM_ONLY = 'ram_only'
FLASH_ONLY = 'flash_only'
HYBRID = 'hybrid'
MODE_CODES = {RAM_ONLY: 1, FLASH_ONLY: 2, HYBRID: 3}

FLAG_DELTA_TIMESTAMPS = 0x01
FLAG_DEDUP_ONLY = 0x02

RESET = b'\xff\x00'
NEW_BASIS = b'\xff\x01'
END_OF_STREAM = b'\xff\x02'

REF_PRIMARY = 'ref_primary'
REF_RAM = 'ref_ram'
NEW = 'new_basis'
RESET_TOKEN = 'reset'
END = 'end_of_stream'

DEFAULT_RAM_BUDGET = 100 * 1024
DEFAULT_FLASH_BUDGET = 10 * 1024

PRIMARY = gdcan.dictionary.PRIMARY
HYBRID_RAM = gdcan.dictionary.HYBRID_RAM

_PRIMARY_2B = 2**7
_PRIMARY_3B = _PRIMARY_2B + 2**14
_PRIMARY_END = _PRIMARY_3B + 2**21
_HYBRID_3B = 2**12
_HYBRID_END = _HYBRID_3B + 2**20 - 2**16


def encode_id(value, space=PRIMARY):
    """
    Shortest prefix encoding of an ID in the primary or hybrid RAM space.
    """
    if value < 0:
        raise gdcan.errors.ParameterError('ids are non-negative')
    if space == PRIMARY:
        if value < _PRIMARY_2B:
            return bytes((value,))
        if value < _PRIMARY_3B:
            return (0x8000 | (value - _PRIMARY_2B)).to_bytes(2, 'big')
        if value < _PRIMARY_END:
            return (0xC00000 | (value - _PRIMARY_3B)).to_bytes(3, 'big')
    elif space == HYBRID_RAM:
        if value < _HYBRID_3B:
            return (0xE000 | value).to_bytes(2, 'big')
        if value < _HYBRID_END:
            return (0xF00000 | (value - _HYBRID_3B)).to_bytes(3, 'big')
    else:
        raise gdcan.errors.ParameterError('unknown id space %r' % space)
    raise gdcan.errors.SpaceExhaustedError('id %d does not fit the %s id space' % (value, space))

def decode_id(data, space=PRIMARY, offset=0):
    """
    Returns (id, bytes consumed) of the ID starting at data[offset].
    """
    if offset >= len(data):
        raise gdcan.errors.FormatError('truncated id')
    first = data[offset]
    if space == PRIMARY:
        if first < 0x80:
            return first, 1
        if first < 0xC0:
            size, prefix, base = 2, 0x8000, _PRIMARY_2B
        elif first < 0xE0:
            size, prefix, base = 3, 0xC00000, _PRIMARY_3B
        else:
            raise gdcan.errors.CorruptionError('byte 0x%02x does not start a primary id' % first)
    elif space == HYBRID_RAM:
        if 0xE0 <= first < 0xF0:
            size, prefix, base = 2, 0xE000, 0
        elif 0xF0 <= first < 0xFF:
            size, prefix, base = 3, 0xF00000, _HYBRID_3B
        else:
            raise gdcan.errors.CorruptionError('byte 0x%02x does not start a hybrid RAM id' % first)
    else:
        raise gdcan.errors.ParameterError('unknown id space %r' % space)
    if offset + size > len(data):
        raise gdcan.errors.FormatError('truncated id')
    return int.from_bytes(data[offset:offset + size], 'big') - prefix + base, size


@dataclass
class CodecConfig:
    mode: str = RAM_ONLY
    chunking: gdcan.records.ChunkingConfig = field(default_factory=gdcan.records.chunking_config)
    algo: str = gdcan.fingerprint.CRC32
    ram_budget: int = DEFAULT_RAM_BUDGET
    accounting: str = gdcan.dictionary.PAPER
    delta_timestamps: bool = True
    dedup_only: bool = False
    verify: bool = False

    def __post_init__(self):
        if self.mode not in MODE_CODES:
            raise gdcan.errors.ConfigError('mode must be one of %s, got %r' % (', '.join(MODE_CODES), self.mode))
        gdcan.fingerprint.fingerprint_length(self.algo)
        if self.code.m > 16:
            raise gdcan.errors.ConfigError('codes with more than 16 parity bits are not supported')

    @property
    def code(self):
        return self.chunking.code

    @property
    def basis_bytes(self):
        return basis_length(self.code, self.dedup_only)

    @property
    def deviation_bytes(self):
        return deviation_length(self.code, self.dedup_only)

    @property
    def ram_id_space(self):
        return HYBRID_RAM if self.mode == HYBRID else PRIMARY


def basis_length(code, dedup_only=False):
    return code.chunk_bytes if dedup_only else code.basis_bytes

def deviation_length(code, dedup_only=False):
    return 0 if dedup_only else gdcan.math.byte_length(code.m)

def make_dynamic_dictionary(config):
    """
    Dynamic dictionary sized for config.ram_budget.
    """
    fingerprint_len = gdcan.fingerprint.fingerprint_length(config.algo)
    capacity = gdcan.dictionary.capacity_for(config.ram_budget,
                                             fingerprint_len,
                                             accounting_mode=config.accounting,
                                             id_space=config.ram_id_space,
                                             basis_len=config.basis_bytes if config.verify else 0)
    return gdcan.dictionary.DynamicDictionary(capacity,
                                              id_limit=gdcan.dictionary.id_space_size(config.ram_id_space),
                                              verify=config.verify)


@dataclass
class StreamHeader:
    mode: str
    chunking: gdcan.records.ChunkingConfig
    algo: str
    dict_id: bytes
    record_count: int
    delta_timestamps: bool
    dedup_only: bool
    version: int = VERSION

    @property
    def code(self):
        return self.chunking.code

    def pack(self):
        flags = (FLAG_DELTA_TIMESTAMPS if self.delta_timestamps else 0) | (FLAG_DEDUP_ONLY if self.dedup_only else 0)
        return HEADER.pack(MAGIC,
                           self.version,
                           MODE_CODES[self.mode],
                           self.chunking.header_byte,
                           self.code.m,
                           self.code.l,
                           gdcan.fingerprint.algo_code(self.algo),
                           self.dict_id,
                           self.record_count,
                           flags)


def read_header(data):
    if len(data) < HEADER.size:
        raise gdcan.errors.FormatError('container shorter than its %d byte header' % HEADER.size)
    magic, version, mode_code, chunking_byte, m, l, algo_code, dict_id, record_count, flags = HEADER.unpack_from(data)
    if magic != MAGIC:
        raise gdcan.errors.FormatError('not a gdcan container (magic %r)' % magic)
    if version != VERSION:
        raise gdcan.errors.FormatError('unsupported container version %d' % version)
    modes = {value: name for name, value in MODE_CODES.items()}
    if mode_code not in modes:
        raise gdcan.errors.FormatError('unknown compression mode %d' % mode_code)
    try:
        chunking = gdcan.records.chunking_from_header_byte(chunking_byte)
    except gdcan.errors.ParameterError as e:
        raise gdcan.errors.FormatError('bad chunking byte %d: %s' % (chunking_byte, e)) from None
    if (chunking.code.m, chunking.code.l) != (m, l):
        raise gdcan.errors.FormatError('code (m=%d, l=%d) does not match %s chunking' % (m, l, chunking.label))
    mode = modes[mode_code]
    if (mode == RAM_ONLY) != (dict_id == bytes(8)):
        raise gdcan.errors.FormatError('dictionary id present iff a preset dictionary is used')
    return StreamHeader(mode=mode,
                        chunking=chunking,
                        algo=gdcan.fingerprint.algo_from_code(algo_code),
                        dict_id=dict_id,
                        record_count=record_count,
                        delta_timestamps=bool(flags & FLAG_DELTA_TIMESTAMPS),
                        dedup_only=bool(flags & FLAG_DEDUP_ONLY),
                        version=version)

def check_preset(preset, code, algo, dedup_only):
    if (preset.code.m, preset.code.l) != (code.m, code.l):
        raise gdcan.errors.DictionaryMismatchError('preset dictionary was trained for %s, stream uses %s'
                                                   % (preset.code.name, code.name))
    if preset.algo != algo:
        raise gdcan.errors.DictionaryMismatchError('preset dictionary uses %s fingerprints, stream uses %s'
                                                   % (preset.algo, algo))
    if preset.dedup_only != dedup_only:
        raise gdcan.errors.DictionaryMismatchError('preset dictionary and stream disagree on dedup-only')

def compress(chunks,
             config,
             preset=None,
             dyn=None,
             record_count=None,
             out=None,
             block_size=4096):
    """
    Single forward pass over chunks (a 2D uint8 array or any iterable of
    chunk byte strings), writing the container to out as it goes.

    ram_only:   dynamic dictionary hit -> primary ref, miss -> new basis
                (the decompressor assigns the same ID).
    flash_only: preset hit -> primary ref (rank), miss -> new basis.
    hybrid:     preset hit -> primary ref, dynamic hit -> RAM ref,
                miss -> new basis added to the dynamic dictionary.
    Running out of IDs writes a reset and empties the dynamic dictionary.
    A dyn passed in is cleared first, so it can be reused across streams.

    Returns the container bytes when out is None, else out.
    """
    code = config.code
    if config.mode == RAM_ONLY:
        if preset is not None:
            raise gdcan.errors.ConfigError('ram_only compression takes no preset dictionary')
    else:
        if preset is None:
            raise gdcan.errors.ConfigError('%s compression needs a preset dictionary' % config.mode)
        check_preset(preset, code, config.algo, config.dedup_only)
    if config.mode == FLASH_ONLY:
        dyn = None
    elif dyn is None:
        dyn = make_dynamic_dictionary(config)
    else:
        # the decompressor starts every stream with an empty dictionary
        dyn.clear()

    if record_count is None:
        if not hasattr(chunks, '__len__'):
            raise gdcan.errors.ParameterError('record_count is required for streamed chunks')
        record_count = len(chunks) // 2 if config.chunking.mode == gdcan.records.HALF_ROW \
            else len(chunks) * config.chunking.rows

    header = StreamHeader(mode=config.mode,
                          chunking=config.chunking,
                          algo=config.algo,
                          dict_id=preset.dict_id if preset is not None else bytes(8),
                          record_count=record_count,
                          delta_timestamps=config.delta_timestamps,
                          dedup_only=config.dedup_only)

    return_bytes = out is None
    if return_bytes:
        out = io.BytesIO()
    out.write(header.pack())

    fingerprint = gdcan.fingerprint.fingerprint_function(config.algo)
    deviation_len = config.deviation_bytes
    ram_space = config.ram_id_space
    preset_index = preset.index if preset is not None else None
    if dyn is not None:
        id_limit = min(dyn.id_limit, gdcan.dictionary.id_space_size(ram_space))

    for block in gdcan.transform.iter_blocks(chunks, code, block_size=block_size):
        bases, deviations = gdcan.transform.split_chunks(block, code, dedup_only=config.dedup_only)
        width = bases.shape[1]
        buffer = bases.tobytes()
        tokens = []
        for i, deviation in enumerate(deviations.tolist()):
            basis = buffer[i * width:(i + 1) * width]
            fp = fingerprint(basis)
            deviation = deviation.to_bytes(deviation_len, 'little')

            if preset_index is not None:
                rank = preset_index.get(fp)
                if rank is not None:
                    tokens.append(encode_id(rank, PRIMARY) + deviation)
                    continue
            if dyn is not None:
                entry_id = dyn.lookup_touch(fp, basis)
                if entry_id is not None:
                    tokens.append(encode_id(entry_id, ram_space) + deviation)
                    continue
                if dyn.next_id >= id_limit:
                    tokens.append(RESET)
                    dyn.clear()
                dyn.insert(fp, basis)
            tokens.append(NEW_BASIS + basis + deviation)
        out.write(b''.join(tokens))

    out.write(END_OF_STREAM)
    if return_bytes:
        return out.getvalue()
    return out

def iter_tokens(data, header=None):
    """
    Yields (kind, id, basis, deviation) for every token after the header.
    id is None for new bases and control tokens, basis is None for refs.
    """
    data = bytes(data)
    if header is None:
        header = read_header(data)
    basis_len = basis_length(header.code, header.dedup_only)
    deviation_len = deviation_length(header.code, header.dedup_only)
    deviation_limit = 2**header.code.m
    size = len(data)
    pos = HEADER.size

    def read_deviation(pos):
        if pos + deviation_len > size:
            raise gdcan.errors.FormatError('truncated container')
        value = int.from_bytes(data[pos:pos + deviation_len], 'little')
        if value >= deviation_limit:
            raise gdcan.errors.CorruptionError('deviation %d does not fit %d bits' % (value, header.code.m))
        return value

    while True:
        if pos >= size:
            raise gdcan.errors.FormatError('truncated container: no end of stream')
        first = data[pos]
        if first == 0xFF:
            if pos + 1 >= size:
                raise gdcan.errors.FormatError('truncated control token')
            control = data[pos + 1]
            pos += 2
            if control == 0x02:
                yield END, None, None, None
                break
            if control == 0x00:
                yield RESET_TOKEN, None, None, None
            elif control == 0x01:
                if pos + basis_len > size:
                    raise gdcan.errors.FormatError('truncated basis')
                basis = data[pos:pos + basis_len]
                deviation = read_deviation(pos + basis_len)
                pos += basis_len + deviation_len
                yield NEW, None, basis, deviation
            else:
                raise gdcan.errors.CorruptionError('unknown control token 0xff 0x%02x' % control)
            continue

        if first < 0xE0:
            kind = REF_PRIMARY
            value, used = decode_id(data, PRIMARY, pos)
        elif header.mode == HYBRID:
            kind = REF_RAM
            value, used = decode_id(data, HYBRID_RAM, pos)
        else:
            raise gdcan.errors.CorruptionError('unknown token 0x%02x in %s stream' % (first, header.mode))
        deviation = read_deviation(pos + used)
        pos += used + deviation_len
        yield kind, value, None, deviation

    if pos != size:
        raise gdcan.errors.FormatError('%d trailing bytes after end of stream' % (size - pos))

def decode(container, preset=None):
    """
    Returns (StreamHeader, chunks) with chunks as a 2D uint8 array.
    """
    data = bytes(container)
    header = read_header(data)
    preset_bases = None
    if header.mode != RAM_ONLY:
        if preset is None or not preset.has_bases:
            raise gdcan.errors.ConfigError('%s containers need the decompressor side preset dictionary' % header.mode)
        if preset.dict_id != header.dict_id:
            raise gdcan.errors.DictionaryMismatchError('container was written with dictionary %s, got %s'
                                                       % (header.dict_id.hex(), preset.dict_id.hex()))
        check_preset(preset, header.code, header.algo, header.dedup_only)
        preset_bases = preset.ranked_bases

    local = []
    bases = []
    deviations = []
    for kind, value, basis, deviation in iter_tokens(data, header):
        if kind == NEW:
            if header.mode != FLASH_ONLY:
                local.append(basis)
        elif kind == REF_PRIMARY:
            source = local if header.mode == RAM_ONLY else preset_bases
            if value >= len(source):
                raise gdcan.errors.CorruptionError('id %d out of range (%d known bases)' % (value, len(source)))
            basis = source[value]
        elif kind == REF_RAM:
            if value >= len(local):
                raise gdcan.errors.CorruptionError('RAM id %d out of range (%d known bases)' % (value, len(local)))
            basis = local[value]
        elif kind == RESET_TOKEN:
            local = []
            continue
        else:
            continue
        bases.append(basis)
        deviations.append(deviation)

    basis_len = basis_length(header.code, header.dedup_only)
    packed = np.frombuffer(b''.join(bases), dtype=np.uint8).reshape(-1, basis_len)
    chunks = gdcan.transform.join_chunks(packed,
                                         np.array(deviations, dtype=np.int64),
                                         header.code,
                                         dedup_only=header.dedup_only)
    return header, chunks.reshape(-1, header.code.chunk_bytes)

def decompress(container, preset=None):
    return decode(container, preset=preset)[1]

def compress_records(records,
                     config,
                     preset=None,
                     dyn=None,
                     out=None):
    """
    Differential timestamps (when enabled), chunking and compress.
    """
    if config.delta_timestamps:
        records = gdcan.records.delta_encode_timestamps(records)
    chunks = gdcan.records.records_to_chunks(records, config.chunking)
    return compress(chunks, config, preset=preset, dyn=dyn, record_count=len(records), out=out)

def decompress_records(container, preset=None):
    header, chunks = decode(container, preset=preset)
    records = gdcan.records.chunks_to_records(chunks, header.chunking, header.record_count)
    if header.delta_timestamps:
        records = gdcan.records.delta_decode_timestamps(records)
    return records

def compressed_size_report(container):
    """
    Size breakdown of a container, computed from its tokens alone.
    """
    data = bytes(container)
    header = read_header(data)
    counts = {REF_PRIMARY: 0, REF_RAM: 0, NEW: 0, RESET_TOKEN: 0, END: 0}
    deviation_len = deviation_length(header.code, header.dedup_only)
    id_bytes = 0
    for kind, value, _, _ in iter_tokens(data, header):
        counts[kind] += 1
        if kind == REF_PRIMARY:
            id_bytes += len(encode_id(value, PRIMARY))
        elif kind == REF_RAM:
            id_bytes += len(encode_id(value, HYBRID_RAM))

    raw_bytes = header.record_count * gdcan.records.RECORD_SIZE
    bases_bytes = counts[NEW] * basis_length(header.code, header.dedup_only)
    report = {'mode': header.mode,
              'chunking': header.chunking.label,
              'code': header.code.name,
              'records': header.record_count,
              'raw_bytes': raw_bytes,
              'total_bytes': len(data),
              'header_bytes': HEADER.size,
              'id_bytes': id_bytes,
              'deviation_bytes': (counts[REF_PRIMARY] + counts[REF_RAM] + counts[NEW]) * deviation_len,
              'bases_bytes': bases_bytes,
              'control_bytes': 2 * (counts[NEW] + counts[RESET_TOKEN] + counts[END])}
    report.update({'tokens_' + kind: count for kind, count in counts.items()})
    report['gain'] = gdcan.qc.compression_gain(raw_bytes, len(data))
    return report
