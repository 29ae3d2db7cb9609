from dataclasses import dataclass
import numpy as np

import gdcan.errors
import gdcan.hamming
import gdcan.math

"""
Library mapping chunks to (basis, deviation) pairs and back.

The deviation is always the m-bit syndrome of the chunk:
  syndrome 0                     -> basis is the message slice
  syndrome of a retained position -> basis is the message slice of the
                                     chunk with that position flipped
  syndrome of a removed column   -> basis is the message slice unchanged,
                                     the syndrome is XOR-ed back into the
                                     parity slice on reconstruction
"""

@dataclass(frozen=True)
class BasisDeviation:
    basis: tuple
    deviation: int

    def basis_bits(self):
        return np.array(self.basis, dtype=np.uint8)

    def deviation_bits(self, m):
        return gdcan.math.int_to_bits(self.deviation, m)


def to_basis_deviation(chunk, code):
    chunk = np.asarray(chunk, dtype=np.uint8)
    if chunk.ndim != 1 or chunk.shape[0] != code.chunk_bits:
        raise gdcan.errors.ParameterError('chunk must be %d bits long' % code.chunk_bits)
    basis_rows, deviations = split_rows(chunk[None, :], code)
    return BasisDeviation(basis=tuple(int(b) for b in basis_rows[0]),
                          deviation=int(deviations[0]))

def from_basis_deviation(pair, code):
    basis = pair.basis_bits()
    if basis.shape[0] != code.basis_bits:
        raise gdcan.errors.ParameterError('basis must be %d bits long' % code.basis_bits)
    return join_rows(basis[None, :], [pair.deviation], code)[0]

def split_rows(chunk_rows, code):
    """
    Vectorised to_basis_deviation: returns (basis bit rows, syndrome integers).
    """
    chunk_rows = np.asarray(chunk_rows, dtype=np.uint8)
    syndromes = gdcan.hamming.syndrome_rows(chunk_rows, code)
    basis_rows = chunk_rows[:, :code.basis_bits].copy()

    positions = code.position_of_syndrome[syndromes]
    rows = np.nonzero((positions >= 0) & (positions < code.basis_bits))[0]
    basis_rows[rows, positions[rows]] ^= 1
    return basis_rows, syndromes

def join_rows(basis_rows, deviations, code):
    """
    Vectorised from_basis_deviation.
    """
    deviations = np.asarray(deviations, dtype=np.int64)
    if deviations.size and (deviations.min() < 0 or deviations.max() >= 2**code.m):
        raise gdcan.errors.ParameterError('deviations must fit in %d bits' % code.m)

    parity = gdcan.hamming.encode_parity_rows(basis_rows, code)
    chunk_rows = np.concatenate([np.asarray(basis_rows, dtype=np.uint8), parity], axis=1)

    positions = code.position_of_syndrome[deviations]
    in_message = (positions >= 0) & (positions < code.basis_bits)
    rows = np.nonzero(in_message)[0]
    chunk_rows[rows, positions[rows]] ^= 1

    # parity flips and removed columns both XOR the syndrome into the parity slice
    rest = np.nonzero(~in_message)[0]
    chunk_rows[rest, code.basis_bits:] ^= gdcan.math.ints_to_rows(deviations[rest], code.m)
    return chunk_rows

def split_chunks(chunks, code, dedup_only=False):
    """
    Splits packed chunks (2D uint8, one chunk per row) into packed bases and
    deviation integers. With dedup_only the basis is the chunk itself and
    every deviation is zero.
    """
    chunks = np.asarray(chunks, dtype=np.uint8)
    if dedup_only:
        return chunks, np.zeros(len(chunks), dtype=np.int64)
    chunk_rows = gdcan.math.unpack_bits(chunks, code.chunk_bits)
    basis_rows, deviations = split_rows(chunk_rows, code)
    return gdcan.math.pack_bits(basis_rows), deviations

def join_chunks(bases, deviations, code, dedup_only=False):
    """
    Inverse of split_chunks.
    """
    bases = np.asarray(bases, dtype=np.uint8)
    if dedup_only:
        return bases
    basis_rows = gdcan.math.unpack_bits(bases, code.basis_bits)
    return gdcan.math.pack_bits(join_rows(basis_rows, deviations, code))

def iter_blocks(chunks, code, block_size=4096):
    """
    Yields 2D uint8 blocks of packed chunks from an array or from any
    iterable of chunk byte strings, reading the input exactly once.
    """
    chunk_bytes = code.chunk_bytes
    if isinstance(chunks, np.ndarray):
        if chunks.ndim != 2 or chunks.shape[1] != chunk_bytes:
            raise gdcan.errors.ParameterError('chunks must be rows of %d bytes' % chunk_bytes)
        for start in range(0, len(chunks), block_size):
            yield chunks[start:start + block_size]
        return

    block = []
    for chunk in chunks:
        if len(chunk) != chunk_bytes:
            raise gdcan.errors.ParameterError('chunk of %d bytes, expected %d' % (len(chunk), chunk_bytes))
        block.append(bytes(chunk))
        if len(block) == block_size:
            yield np.frombuffer(b''.join(block), dtype=np.uint8).reshape(-1, chunk_bytes)
            block = []
    if block:
        yield np.frombuffer(b''.join(block), dtype=np.uint8).reshape(-1, chunk_bytes)
