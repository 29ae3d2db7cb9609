import numpy as np

"""
Library for basic GF(2) bit-vector operations.

Bit vectors are numpy uint8 arrays holding 0/1 values. Packed byte strings
are MSB-first: bit 0 is the most significant bit of the first byte and the
final byte is zero-padded in its low bits.
"""

def weight(value):
    """
    Hamming weight of a non-negative integer.
    """
    return bin(value).count('1')

def bits_to_int(bits):
    """
    Integer whose bit i is component i of the vector.
    """
    bits = np.asarray(bits, dtype=np.int64)
    return int((bits << np.arange(bits.shape[-1], dtype=np.int64)).sum(axis=-1))

def int_to_bits(value, width):
    return ((int(value) >> np.arange(width)) & 1).astype(np.uint8)

def rows_to_ints(bit_rows):
    """
    Vectorised bits_to_int over the last axis of a 2D array.
    """
    bit_rows = np.asarray(bit_rows, dtype=np.int64)
    return (bit_rows << np.arange(bit_rows.shape[-1], dtype=np.int64)).sum(axis=-1)

def ints_to_rows(values, width):
    values = np.asarray(values, dtype=np.int64)
    return ((values[:, None] >> np.arange(width)) & 1).astype(np.uint8)

def matmul(a, b):
    """
    Matrix product over GF(2).
    """
    return (np.asarray(a, dtype=np.int64) @ np.asarray(b, dtype=np.int64) & 1).astype(np.uint8)

def pack_bits(bits):
    """
    Packs a bit vector (or a 2D array of bit rows) MSB-first into bytes.
    """
    bits = np.asarray(bits, dtype=np.uint8)
    if bits.ndim == 1:
        return np.packbits(bits).tobytes()
    return np.packbits(bits, axis=1)

def unpack_bits(data, bit_count):
    """
    Inverse of pack_bits; accepts bytes or a 2D uint8 array of packed rows.
    """
    if isinstance(data, (bytes, bytearray, memoryview)):
        return np.unpackbits(np.frombuffer(data, dtype=np.uint8))[:bit_count]
    return np.unpackbits(np.asarray(data, dtype=np.uint8), axis=1)[:, :bit_count]

def byte_length(bit_count):
    return (bit_count + 7) // 8
