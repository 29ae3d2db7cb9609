from dataclasses import dataclass, field
import functools
import numpy as np

import gdcan.errors
import gdcan.math

"""
Library for systematic Hamming and shortened Hamming codes over GF(2).

Columns of the parity-check matrix are m-bit vectors stored as integers,
component i being bit i of the integer. Message columns are all vectors of
weight >= 2 in increasing numeric order; shortening drops the last l of
them. The codeword layout is [message bits | parity bits] and the parity
positions carry the identity columns 1, 2, 4, ...
"""

MAX_PARITY_BITS = 16

# values of CodeParams.position_of_syndrome that are not retained positions
CODEWORD = -2
REMOVED_COLUMN = -1


@dataclass(frozen=True)
class CodeParams:
    m: int
    l: int
    n: int
    k: int
    chunk_bits: int
    basis_bits: int
    message_columns: tuple = field(repr=False)
    removed_columns: tuple = field(repr=False)
    check_matrix: np.ndarray = field(repr=False, compare=False)
    parity_matrix: np.ndarray = field(repr=False, compare=False)
    position_of_syndrome: np.ndarray = field(repr=False, compare=False)

    @property
    def parity_bits(self):
        return self.m

    @property
    def chunk_bytes(self):
        return gdcan.math.byte_length(self.chunk_bits)

    @property
    def basis_bytes(self):
        return gdcan.math.byte_length(self.basis_bits)

    @property
    def name(self):
        if self.l == 0:
            return 'H(%d,%d)' % (self.chunk_bits, self.basis_bits)
        return "H'(%d,%d)" % (self.chunk_bits, self.basis_bits)

    def column(self, position):
        """
        Parity-check column (as integer) of a retained position.
        """
        if position < self.basis_bits:
            return self.message_columns[position]
        return 1 << (position - self.basis_bits)

    def retained_position(self, syndrome_value):
        """
        Retained position whose column equals the syndrome, or REMOVED_COLUMN.
        """
        if syndrome_value == 0:
            raise gdcan.errors.ParameterError('the zero syndrome has no position')
        return int(self.position_of_syndrome[syndrome_value])


@functools.lru_cache(maxsize=None)
def build_code(m, l=0):
    """
    Builds the (possibly shortened) Hamming code with m parity bits and
    l shortened message positions. l = 0 is the full code.
    """
    if m < 3 or m > MAX_PARITY_BITS:
        raise gdcan.errors.ParameterError('parity bit count must be in [3, %d], got %d' % (MAX_PARITY_BITS, m))
    n = 2**m - 1
    k = n - m
    if l < 0 or l >= k:
        raise gdcan.errors.ParameterError('shortening must be in [0, %d), got %d' % (k, l))
    if l > 0 and not 2**(m - 1) < n - l:
        raise gdcan.errors.ParameterError('shortened length %d must exceed %d for m=%d' % (n - l, 2**(m - 1), m))

    columns = [v for v in range(1, 2**m) if gdcan.math.weight(v) >= 2]
    message_columns = tuple(columns[:k - l])
    removed_columns = tuple(columns[k - l:])
    all_columns = message_columns + tuple(1 << i for i in range(m))

    check_matrix = gdcan.math.ints_to_rows(all_columns, m).T.copy()
    parity_matrix = check_matrix[:, :k - l].copy()

    position_of_syndrome = np.full(2**m, REMOVED_COLUMN, dtype=np.int64)
    position_of_syndrome[0] = CODEWORD
    for position, column in enumerate(all_columns):
        position_of_syndrome[column] = position

    for a in (check_matrix, parity_matrix, position_of_syndrome):
        a.setflags(write=False)

    return CodeParams(m=m, l=l, n=n, k=k,
                      chunk_bits=n - l,
                      basis_bits=k - l,
                      message_columns=message_columns,
                      removed_columns=removed_columns,
                      check_matrix=check_matrix,
                      parity_matrix=parity_matrix,
                      position_of_syndrome=position_of_syndrome)

def choose_code(chunk_bits):
    """
    Smallest valid code whose codeword covers chunk_bits exactly.
    """
    if chunk_bits < 4:
        raise gdcan.errors.ParameterError('chunks of %d bits are too small for a Hamming code' % chunk_bits)
    m = 3
    while 2**m - 1 < chunk_bits:
        m += 1
    if m > MAX_PARITY_BITS:
        raise gdcan.errors.ParameterError('chunks of %d bits need more than %d parity bits' % (chunk_bits, MAX_PARITY_BITS))
    l = 2**m - 1 - chunk_bits
    if l > 0 and not 2**(m - 1) < chunk_bits:
        # exact powers of two fall between two codes
        raise gdcan.errors.ParameterError('no valid shortened Hamming code for %d bit chunks' % chunk_bits)
    return build_code(m, l)

def _check_length(bits, expected, what):
    if bits.shape[-1] != expected:
        raise gdcan.errors.ParameterError('%s must be %d bits long, got %d' % (what, expected, bits.shape[-1]))

def encode_parity(basis, code):
    """
    Parity bits making [basis | parity] a codeword.
    """
    basis = np.asarray(basis, dtype=np.uint8)
    _check_length(basis, code.basis_bits, 'basis')
    return gdcan.math.matmul(code.parity_matrix, basis)

def syndrome(chunk, code):
    chunk = np.asarray(chunk, dtype=np.uint8)
    _check_length(chunk, code.chunk_bits, 'chunk')
    return gdcan.math.matmul(code.check_matrix, chunk)

def encode_parity_rows(basis_rows, code):
    """
    encode_parity over every row of a 2D bit array.
    """
    basis_rows = np.asarray(basis_rows, dtype=np.uint8)
    _check_length(basis_rows, code.basis_bits, 'basis')
    return gdcan.math.matmul(basis_rows, code.parity_matrix.T)

def syndrome_rows(chunk_rows, code):
    """
    Syndrome integers of every row of a 2D bit array.
    """
    chunk_rows = np.asarray(chunk_rows, dtype=np.uint8)
    _check_length(chunk_rows, code.chunk_bits, 'chunk')
    return gdcan.math.rows_to_ints(gdcan.math.matmul(chunk_rows, code.check_matrix.T))
