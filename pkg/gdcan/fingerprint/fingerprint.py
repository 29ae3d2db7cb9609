import zlib

import gdcan.errors

"""
Library for basis fingerprints.

Fingerprint values are plain bytes (big-endian digests) so they can be
used directly as dictionary keys and compared byte-wise.
"""

CRC32 = 'crc32'
FNV64 = 'fnv64'

FNV64_OFFSET = 0xcbf29ce484222325
FNV64_PRIME = 0x100000001b3
_MASK64 = 0xFFFFFFFFFFFFFFFF


def crc32(data):
    # zlib uses the reflected 0xEDB88320 polynomial with 0xFFFFFFFF init and final XOR
    return zlib.crc32(data).to_bytes(4, 'big')

def fnv64(data):
    """
    FNV-1a, 64 bit.
    """
    h = FNV64_OFFSET
    for byte in data:
        h = ((h ^ byte) * FNV64_PRIME) & _MASK64
    return h.to_bytes(8, 'big')


ALGORITHMS = {CRC32: (1, 4, crc32),
              FNV64: (2, 8, fnv64)}


def fingerprint(basis_bytes, algo=CRC32):
    return _lookup(algo)[2](bytes(basis_bytes))

def fingerprint_length(algo):
    return _lookup(algo)[1]

def algo_code(algo):
    """
    Byte identifying the algorithm in container and preset headers.
    """
    return _lookup(algo)[0]

def algo_from_code(code):
    for name, (value, _, _) in ALGORITHMS.items():
        if value == code:
            return name
    raise gdcan.errors.FormatError('unknown fingerprint algorithm code %d' % code)

def fingerprint_function(algo):
    return _lookup(algo)[2]

def _lookup(algo):
    try:
        return ALGORITHMS[algo]
    except KeyError:
        raise gdcan.errors.ParameterError('unknown fingerprint algorithm %r, expected one of %s'
                                          % (algo, ', '.join(ALGORITHMS))) from None
