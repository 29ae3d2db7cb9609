import numpy as np
import pytest

import gdcan


def test_crc32_check_values():
    assert gdcan.fingerprint.fingerprint(b'') == bytes(4)
    assert gdcan.fingerprint.fingerprint(b'123456789') == bytes.fromhex('cbf43926')

def test_fnv64_check_values():
    assert gdcan.fingerprint.fnv64(b'') == bytes.fromhex('cbf29ce484222325')
    assert gdcan.fingerprint.fnv64(b'a') == bytes.fromhex('af63dc4c8601ec8c')

def test_lengths_and_codes():
    assert gdcan.fingerprint.fingerprint_length('crc32') == 4
    assert gdcan.fingerprint.fingerprint_length('fnv64') == 8
    for algo in gdcan.fingerprint.ALGORITHMS:
        assert gdcan.fingerprint.algo_from_code(gdcan.fingerprint.algo_code(algo)) == algo

def test_unknown_algorithm():
    with pytest.raises(gdcan.errors.ParameterError):
        gdcan.fingerprint.fingerprint(b'x', algo='sha1')
    with pytest.raises(gdcan.errors.FormatError):
        gdcan.fingerprint.algo_from_code(9)

@pytest.mark.parametrize('algo', ['crc32', 'fnv64'])
def test_deterministic(algo):
    basis = bytes(range(14))
    assert gdcan.fingerprint.fingerprint(basis, algo) == gdcan.fingerprint.fingerprint(bytearray(basis), algo)

def test_crc32_collision_rate_on_random_bases():
    rng = np.random.default_rng(5)
    bases = rng.integers(0, 256, size=(100000, 14), dtype=np.uint8)
    bases[:, -1] &= 0xFE
    distinct = {row.tobytes() for row in bases}
    fingerprints = {gdcan.fingerprint.crc32(basis) for basis in distinct}
    assert len(distinct) - len(fingerprints) < 0.01 * len(distinct)
