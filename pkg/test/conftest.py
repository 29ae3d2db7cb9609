import numpy as np
import pytest

import gdcan


def random_records(count, seed=0):
    """
    Valid random CAN records as a structured array.
    """
    rng = np.random.default_rng(seed)
    records = np.zeros(count, dtype=gdcan.records.RECORD_DTYPE)
    records['timestamp'] = np.cumsum(rng.integers(0, 5000, size=count, dtype=np.uint64), dtype=np.uint64)
    ide = rng.integers(0, 2, size=count)
    records['ide'] = ide
    records['identifier'] = np.where(ide == 1,
                                     rng.integers(0, 2**29, size=count),
                                     rng.integers(0, 2**11, size=count))
    data_length = rng.integers(0, 9, size=count)
    records['dlc'] = data_length
    records['data_length'] = data_length
    records['brs'] = rng.integers(0, 2, size=count)
    records['dir'] = rng.integers(0, 2, size=count)
    records['channel'] = rng.integers(0, 4, size=count)
    data = rng.integers(0, 256, size=(count, 8), dtype=np.uint8)
    data[np.arange(8)[None, :] >= data_length[:, None]] = 0
    records['data'] = data
    return records

def repetitive_records(count, seed=0, identifiers=8):
    """
    Records drawn from a few periodic CAN frames, similar to a real logger.
    """
    rng = np.random.default_rng(seed)
    frames = random_records(identifiers, seed=seed + 1)
    records = frames[rng.integers(0, identifiers, size=count)].copy()
    records['timestamp'] = np.cumsum(rng.choice([1000, 1000, 1000, 2000], size=count).astype(np.uint64),
                                     dtype=np.uint64)
    return records


@pytest.fixture(scope='session')
def mixed_records():
    """
    10000 records, mostly periodic frames with some one-off frames mixed in.
    """
    records = repetitive_records(10000, seed=21)
    rng = np.random.default_rng(21)
    rows = rng.choice(10000, size=1500, replace=False)
    noise = random_records(1500, seed=22)
    noise['timestamp'] = records['timestamp'][rows]
    records[rows] = noise
    return records


@pytest.fixture
def record_factory():
    return random_records


@pytest.fixture
def repetitive_record_factory():
    return repetitive_records
