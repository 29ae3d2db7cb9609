from dataclasses import dataclass, field
import struct
import sys

import gdcan.dictionary
import gdcan.errors
import gdcan.fingerprint
import gdcan.hamming
import gdcan.transform

"""
Library to train, serialize and query the flash-resident preset dictionary.

The compressor side holds ranked fingerprints only; the bases live on the
receiving side. A fingerprint's ID is its rank, so IDs take no flash.
"""

COMPRESSOR_MAGIC = b'GDPD'
DECOMPRESSOR_MAGIC = b'GDPB'
VERSION = 1

# magic, version, fingerprint algo, flags, m, l, entry count
HEADER = struct.Struct('<4sBBBBHI')

FLAG_DEDUP_ONLY = 0x02


@dataclass(frozen=True)
class FrequencyEntry:
    fingerprint: bytes
    basis: bytes
    count: int
    collided: bool = False


@dataclass
class PresetDictionary:
    code: gdcan.hamming.CodeParams
    algo: str
    ranked_fingerprints: tuple
    ranked_bases: tuple = None
    dedup_only: bool = False
    # average occurrences per training file, known only right after training
    ranked_repetitions: tuple = field(default=None, compare=False, repr=False)
    dict_id: bytes = field(init=False)
    index: dict = field(init=False, repr=False)

    def __post_init__(self):
        self.ranked_fingerprints = tuple(self.ranked_fingerprints)
        self.index = {fp: rank for rank, fp in enumerate(self.ranked_fingerprints)}
        if len(self.index) != len(self.ranked_fingerprints):
            raise gdcan.errors.ParameterError('preset dictionary has duplicate fingerprints')
        if self.ranked_bases is not None:
            self.ranked_bases = tuple(self.ranked_bases)
            if len(self.ranked_bases) != len(self.ranked_fingerprints):
                raise gdcan.errors.ParameterError('preset dictionary needs one basis per fingerprint')
        if self.ranked_repetitions is not None:
            self.ranked_repetitions = tuple(self.ranked_repetitions)
            if len(self.ranked_repetitions) != len(self.ranked_fingerprints):
                raise gdcan.errors.ParameterError('preset dictionary needs one repetition count per fingerprint')
        self.dict_id = gdcan.fingerprint.fnv64(compressor_bytes(self))

    def __len__(self):
        return len(self.ranked_fingerprints)

    @property
    def has_bases(self):
        return self.ranked_bases is not None

    @property
    def basis_bytes(self):
        if self.dedup_only:
            return self.code.chunk_bytes
        return self.code.basis_bytes

    def compressor_side(self):
        """
        Copy without bases, as stored on the device.
        """
        return PresetDictionary(code=self.code,
                                algo=self.algo,
                                ranked_fingerprints=self.ranked_fingerprints,
                                dedup_only=self.dedup_only,
                                ranked_repetitions=self.ranked_repetitions)


def count_frequencies(chunks,
                      code,
                      algo=gdcan.fingerprint.CRC32,
                      dedup_only=False):
    """
    Ranks the bases of one chunk stream by how often they occur, most
    frequent first; equal counts keep first-occurrence order.

    A fingerprint shared by two different bases is marked as collided.
    """
    fingerprint = gdcan.fingerprint.fingerprint_function(algo)
    counts = {}
    bases = {}
    collided = set()
    for block in gdcan.transform.iter_blocks(chunks, code):
        packed, _ = gdcan.transform.split_chunks(block, code, dedup_only=dedup_only)
        width = packed.shape[1]
        buffer = packed.tobytes()
        for offset in range(0, len(buffer), width):
            basis = buffer[offset:offset + width]
            fp = fingerprint(basis)
            if fp in counts:
                counts[fp] += 1
                if bases[fp] != basis:
                    collided.add(fp)
            else:
                counts[fp] = 1
                bases[fp] = basis

    # equal counts stay in first-occurrence order
    ranked = sorted(counts.items(), key=lambda item: -item[1])
    return [FrequencyEntry(fingerprint=fp,
                           basis=bases[fp],
                           count=count,
                           collided=fp in collided) for fp, count in ranked]

def merge_round_robin(per_file_lists):
    """
    Takes the rank-0 fingerprint of every file in file order, then the
    rank-1 fingerprints, and so on, skipping fingerprints already taken.
    Only per-file rank matters, never the absolute counts.
    """
    merged = []
    seen = set()
    per_file_lists = [list(file_list) for file_list in per_file_lists]
    rounds = max((len(file_list) for file_list in per_file_lists), default=0)
    for rank in range(rounds):
        for file_list in per_file_lists:
            if rank < len(file_list):
                fp = file_list[rank]
                if fp not in seen:
                    seen.add(fp)
                    merged.append(fp)
    return merged

def truncate_to_flash(merged,
                      flash_budget,
                      code,
                      algo=gdcan.fingerprint.CRC32,
                      bases=None,
                      dedup_only=False,
                      repetitions=None):
    """
    Keeps as many leading fingerprints as fit in flash_budget bytes.

    bases maps fingerprints to basis bytes; when given, the decompressor
    side of the dictionary is filled in as well. repetitions maps
    fingerprints to their average count per training file.
    """
    fingerprint_len = gdcan.fingerprint.fingerprint_length(algo)
    count = max(int(flash_budget), 0) // fingerprint_len
    count = min(count, len(merged), gdcan.dictionary.id_space_size(gdcan.dictionary.PRIMARY))
    ranked = list(merged[:count])
    ranked_bases = None
    if bases is not None:
        ranked_bases = [bases[fp] for fp in ranked]
    ranked_repetitions = None
    if repetitions is not None:
        ranked_repetitions = [repetitions.get(fp, 0.0) for fp in ranked]
    return PresetDictionary(code=code,
                            algo=algo,
                            ranked_fingerprints=ranked,
                            ranked_bases=ranked_bases,
                            dedup_only=dedup_only,
                            ranked_repetitions=ranked_repetitions)

def lookup(preset, fp):
    return preset.index.get(fp)

def train_preset(chunk_streams,
                 flash_budget,
                 code,
                 algo=gdcan.fingerprint.CRC32,
                 dedup_only=False,
                 verbose=False):
    """
    Builds a preset dictionary from several chunk streams (one per file).
    Fingerprints shared by different bases anywhere in the training data
    are left out, since a preset hit can not be verified on the device.
    """
    per_file_lists = []
    bases = {}
    totals = {}
    collided = set()
    for chunks in chunk_streams:
        entries = count_frequencies(chunks, code, algo=algo, dedup_only=dedup_only)
        for entry in entries:
            totals[entry.fingerprint] = totals.get(entry.fingerprint, 0) + entry.count
            if entry.collided:
                collided.add(entry.fingerprint)
            elif entry.fingerprint in bases and bases[entry.fingerprint] != entry.basis:
                collided.add(entry.fingerprint)
            else:
                bases.setdefault(entry.fingerprint, entry.basis)
        per_file_lists.append([entry.fingerprint for entry in entries])

    if collided:
        print('WARNING: leaving', len(collided), 'colliding fingerprints out of the preset dictionary',
              file=sys.stderr)
        per_file_lists = [[fp for fp in file_list if fp not in collided] for file_list in per_file_lists]

    merged = merge_round_robin(per_file_lists)
    file_count = max(len(per_file_lists), 1)
    repetitions = {fp: count / file_count for fp, count in totals.items()}
    preset = truncate_to_flash(merged,
                               flash_budget,
                               code,
                               algo=algo,
                               bases=bases,
                               dedup_only=dedup_only,
                               repetitions=repetitions)
    if verbose:
        print('Preset dictionary:', len(preset), 'of', len(merged), 'fingerprints fit in', flash_budget, 'bytes')
    return preset

def _header(preset, magic):
    flags = FLAG_DEDUP_ONLY if preset.dedup_only else 0
    return HEADER.pack(magic,
                       VERSION,
                       gdcan.fingerprint.algo_code(preset.algo),
                       flags,
                       preset.code.m,
                       preset.code.l,
                       len(preset.ranked_fingerprints))

def compressor_bytes(preset):
    return _header(preset, COMPRESSOR_MAGIC) + b''.join(preset.ranked_fingerprints)

def decompressor_bytes(preset):
    if not preset.has_bases:
        raise gdcan.errors.ParameterError('preset dictionary has no bases to write')
    body = b''.join(fp + basis for fp, basis in zip(preset.ranked_fingerprints, preset.ranked_bases))
    return _header(preset, DECOMPRESSOR_MAGIC) + body

def load_preset(data):
    """
    Parses either side of a serialized preset dictionary.
    """
    data = bytes(data)
    if len(data) < HEADER.size:
        raise gdcan.errors.FormatError('preset dictionary shorter than its header')
    magic, version, algo_value, flags, m, l, count = HEADER.unpack_from(data)
    if magic not in (COMPRESSOR_MAGIC, DECOMPRESSOR_MAGIC):
        raise gdcan.errors.FormatError('not a preset dictionary (magic %r)' % magic)
    if version != VERSION:
        raise gdcan.errors.FormatError('unsupported preset dictionary version %d' % version)

    algo = gdcan.fingerprint.algo_from_code(algo_value)
    try:
        code = gdcan.hamming.build_code(m, l)
    except gdcan.errors.ParameterError as e:
        raise gdcan.errors.FormatError('bad code in preset dictionary header: %s' % e) from None
    dedup_only = bool(flags & FLAG_DEDUP_ONLY)
    fingerprint_len = gdcan.fingerprint.fingerprint_length(algo)
    basis_len = code.chunk_bytes if dedup_only else code.basis_bytes
    entry_len = fingerprint_len
    if magic == DECOMPRESSOR_MAGIC:
        entry_len += basis_len
    if len(data) != HEADER.size + count * entry_len:
        raise gdcan.errors.FormatError('preset dictionary body is %d bytes, expected %d'
                                       % (len(data) - HEADER.size, count * entry_len))

    fingerprints = []
    bases = [] if magic == DECOMPRESSOR_MAGIC else None
    for offset in range(HEADER.size, len(data), entry_len):
        fingerprints.append(data[offset:offset + fingerprint_len])
        if bases is not None:
            bases.append(data[offset + fingerprint_len:offset + entry_len])
    return PresetDictionary(code=code,
                            algo=algo,
                            ranked_fingerprints=fingerprints,
                            ranked_bases=bases,
                            dedup_only=dedup_only)

def read_preset(file_name):
    with open(file_name, 'rb') as f:
        return load_preset(f.read())

def write_preset(preset, output_prefix):
    """
    Writes <output_prefix>.gdpd (compressor side) and, when the bases are
    known, <output_prefix>.gdpb (decompressor side).
    """
    compressor_file = str(output_prefix) + '.gdpd'
    with open(compressor_file, 'wb') as f:
        f.write(compressor_bytes(preset))
    decompressor_file = None
    if preset.has_bases:
        decompressor_file = str(output_prefix) + '.gdpb'
        with open(decompressor_file, 'wb') as f:
            f.write(decompressor_bytes(preset))
    return compressor_file, decompressor_file
