import numpy as np

import gdcan


def test_weight():
    assert gdcan.math.weight(0) == 0
    assert gdcan.math.weight(0b1011) == 3

def test_bits_and_ints():
    assert gdcan.math.bits_to_int([1, 0, 1]) == 5
    assert list(gdcan.math.int_to_bits(6, 3)) == [0, 1, 1]
    rows = gdcan.math.ints_to_rows([1, 6], 3)
    assert rows.tolist() == [[1, 0, 0], [0, 1, 1]]
    assert gdcan.math.rows_to_ints(rows).tolist() == [1, 6]

def test_pack_bits_is_msb_first():
    assert gdcan.math.pack_bits(np.array([1, 0, 0, 0, 0, 0, 0, 0, 1], dtype=np.uint8)) == b'\x80\x80'
    assert gdcan.math.unpack_bits(b'\x80\x80', 9).tolist() == [1, 0, 0, 0, 0, 0, 0, 0, 1]

def test_pack_rows():
    rng = np.random.default_rng(1)
    bits = rng.integers(0, 2, size=(20, 105), dtype=np.uint8)
    packed = gdcan.math.pack_bits(bits)
    assert packed.shape == (20, 14)
    assert np.array_equal(gdcan.math.unpack_bits(packed, 105), bits)

def test_matmul_is_mod_two():
    a = np.array([[1, 1], [0, 1]], dtype=np.uint8)
    assert gdcan.math.matmul(a, a).tolist() == [[1, 0], [0, 1]]

def test_byte_length():
    assert gdcan.math.byte_length(0) == 0
    assert gdcan.math.byte_length(105) == 14
    assert gdcan.math.byte_length(216) == 27
