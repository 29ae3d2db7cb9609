import numpy as np
import pytest

import gdcan

CODE = gdcan.hamming.build_code(7, 15)

# well known CRC32 collision, kept when the same suffix is appended
COLLIDING = (b'plumless' + bytes(6), b'buckeroo' + bytes(6))


def make_bases(count, seed=0):
    rng = np.random.default_rng(seed)
    bases = rng.integers(0, 256, size=(count, CODE.basis_bytes), dtype=np.uint8)
    bases[:, -1] &= 0x80
    return bases

def codewords(bases, order):
    """
    Codeword chunks of bases[order], so that every chunk's basis is known.
    """
    picked = bases[list(order)]
    return gdcan.transform.join_chunks(picked, np.zeros(len(picked), dtype=np.int64), CODE)

def fp(bases, i):
    return gdcan.fingerprint.fingerprint(bases[i].tobytes())


def test_single_repeated_chunk():
    bases = make_bases(1)
    entries = gdcan.preset.count_frequencies(codewords(bases, [0] * 5), CODE)
    assert len(entries) == 1
    assert entries[0].count == 5
    assert entries[0].basis == bases[0].tobytes()

def test_most_frequent_first():
    bases = make_bases(2)
    entries = gdcan.preset.count_frequencies(codewords(bases, [0, 0, 0] + [1] * 7), CODE)
    assert [e.count for e in entries] == [7, 3]
    assert entries[0].fingerprint == fp(bases, 1)

def test_ties_keep_first_occurrence():
    bases = make_bases(3)
    entries = gdcan.preset.count_frequencies(codewords(bases, [2, 0, 1, 1, 0, 2]), CODE)
    assert [e.fingerprint for e in entries] == [fp(bases, 2), fp(bases, 0), fp(bases, 1)]

def test_empty_stream():
    empty = np.zeros((0, CODE.chunk_bytes), dtype=np.uint8)
    assert gdcan.preset.count_frequencies(empty, CODE) == []

def test_similar_chunks_count_together():
    bases = make_bases(1)
    chunks = codewords(bases, [0, 0])
    chunks[1, 13] ^= 0x01
    entries = gdcan.preset.count_frequencies(chunks, CODE)
    assert len(entries) == 1 and entries[0].count == 2

def test_merge_round_robin():
    merged = gdcan.preset.merge_round_robin([['A', 'B'], ['C', 'A'], ['D', 'E']])
    assert merged == ['A', 'C', 'D', 'B', 'E']
    assert gdcan.preset.merge_round_robin([['A', 'B', 'C']]) == ['A', 'B', 'C']
    assert gdcan.preset.merge_round_robin([['A', 'B']] * 3) == ['A', 'B']
    assert gdcan.preset.merge_round_robin([]) == []
    assert gdcan.preset.merge_round_robin([['A'], [], ['B', 'C']]) == ['A', 'B', 'C']

def test_trainer_follows_per_file_ranks():
    bases = make_bases(5)
    a, b, c, d, e = range(5)
    files = [codewords(bases, [a, a, a, b]),
             codewords(bases, [c, c, a]),
             codewords(bases, [d, d, e])]
    expected = [fp(bases, i) for i in (a, c, d, b, e)]

    preset = gdcan.preset.train_preset(files, 1024, CODE)
    assert list(preset.ranked_fingerprints) == expected
    assert list(preset.ranked_bases) == [bases[i].tobytes() for i in (a, c, d, b, e)]

    doubled = [files[0], np.repeat(files[1], 2, axis=0), files[2]]
    assert list(gdcan.preset.train_preset(doubled, 1024, CODE).ranked_fingerprints) == expected

def test_trainer_leaves_collisions_out(capsys):
    assert gdcan.fingerprint.crc32(COLLIDING[0]) == gdcan.fingerprint.crc32(COLLIDING[1])
    chunks = np.frombuffer(b''.join([COLLIDING[0], COLLIDING[1], bytes(14)]), dtype=np.uint8).reshape(-1, 14)
    preset = gdcan.preset.train_preset([chunks], 1024, CODE, dedup_only=True)
    assert list(preset.ranked_bases) == [bytes(14)]
    assert 'WARNING' in capsys.readouterr().err

@pytest.mark.parametrize('budget, algo, count', [(40, 'crc32', 10),
                                                 (0, 'crc32', 0),
                                                 (10240, 'crc32', 2560),
                                                 (10240, 'fnv64', 1280),
                                                 (3, 'crc32', 0)])
def test_truncate_to_flash(budget, algo, count):
    length = gdcan.fingerprint.fingerprint_length(algo)
    merged = [i.to_bytes(length, 'big') for i in range(5000)]
    preset = gdcan.preset.truncate_to_flash(merged, budget, CODE, algo=algo)
    assert len(preset) == count
    assert list(preset.ranked_fingerprints) == merged[:count]

def test_lookup_by_rank():
    merged = [i.to_bytes(4, 'big') for i in range(200)]
    preset = gdcan.preset.truncate_to_flash(merged, 800, CODE)
    assert gdcan.preset.lookup(preset, merged[0]) == 0
    assert gdcan.preset.lookup(preset, b'none') is None
    assert gdcan.preset.lookup(preset, merged[128]) == 128
    assert len(gdcan.codec.encode_id(128)) == 2

def test_duplicate_fingerprints_rejected():
    with pytest.raises(gdcan.errors.ParameterError):
        gdcan.preset.PresetDictionary(code=CODE, algo='crc32', ranked_fingerprints=[b'aaaa', b'aaaa'])

def test_serialization_round_trip(tmp_path):
    bases = make_bases(20, seed=4)
    preset = gdcan.preset.train_preset([codewords(bases, range(20))], 40, CODE)
    compressor_file, decompressor_file = gdcan.preset.write_preset(preset, tmp_path / 'fleet')
    assert compressor_file.endswith('.gdpd') and decompressor_file.endswith('.gdpb')

    compressor_side = gdcan.preset.read_preset(compressor_file)
    decompressor_side = gdcan.preset.read_preset(decompressor_file)
    assert not compressor_side.has_bases
    assert compressor_side.ranked_fingerprints == preset.ranked_fingerprints
    assert decompressor_side.ranked_bases == preset.ranked_bases
    assert compressor_side.dict_id == decompressor_side.dict_id == preset.dict_id

    with open(compressor_file, 'rb') as f:
        data = f.read()
    assert data[:4] == b'GDPD'
    assert len(data) == gdcan.preset.HEADER.size + 10 * 4
    assert preset.dict_id == gdcan.fingerprint.fnv64(data)

def test_dict_id_tracks_content():
    merged = [i.to_bytes(4, 'big') for i in range(10)]
    first = gdcan.preset.truncate_to_flash(merged, 40, CODE)
    assert first.dict_id == gdcan.preset.truncate_to_flash(list(merged), 40, CODE).dict_id
    assert first.dict_id != gdcan.preset.truncate_to_flash(merged[::-1], 40, CODE).dict_id
    assert first.dict_id != gdcan.preset.truncate_to_flash(merged, 40, CODE, dedup_only=True).dict_id

def test_empty_budget_writes_empty_files(tmp_path):
    bases = make_bases(3)
    preset = gdcan.preset.train_preset([codewords(bases, [0, 1, 2])], 0, CODE)
    compressor_file, decompressor_file = gdcan.preset.write_preset(preset, tmp_path / 'empty')
    assert len(gdcan.preset.read_preset(compressor_file)) == 0
    assert len(gdcan.preset.read_preset(decompressor_file)) == 0

def test_load_rejects_bad_files():
    with pytest.raises(gdcan.errors.FormatError):
        gdcan.preset.load_preset(b'GDP')
    with pytest.raises(gdcan.errors.FormatError):
        gdcan.preset.load_preset(b'XXXX' + bytes(7))
    preset = gdcan.preset.truncate_to_flash([b'abcd'], 4, CODE)
    data = gdcan.preset.compressor_bytes(preset)
    with pytest.raises(gdcan.errors.FormatError):
        gdcan.preset.load_preset(data[:-1])

def test_repetitions_per_training_file():
    bases = make_bases(5)
    a, b, c, d, e = range(5)
    files = [codewords(bases, [a, a, a, b]),
             codewords(bases, [c, c, a]),
             codewords(bases, [d, d, e])]
    preset = gdcan.preset.train_preset(files, 1024, CODE)
    assert preset.ranked_repetitions == pytest.approx([4 / 3, 2 / 3, 2 / 3, 1 / 3, 1 / 3])
    assert preset.compressor_side().ranked_repetitions == preset.ranked_repetitions

    small = gdcan.preset.train_preset(files, 8, CODE)
    assert small.ranked_repetitions == pytest.approx([4 / 3, 2 / 3])
    loaded = gdcan.preset.load_preset(gdcan.preset.decompressor_bytes(preset))
    assert loaded.ranked_repetitions is None
    assert loaded == preset

@pytest.mark.parametrize('offset, value', [(7, 2), (7, 40), (8, 0xFF), (9, 0xFF)])
def test_load_rejects_bad_code(offset, value):
    data = bytearray(gdcan.preset.compressor_bytes(gdcan.preset.truncate_to_flash([b'abcd'], 4, CODE)))
    data[offset] = value
    with pytest.raises(gdcan.errors.FormatError):
        gdcan.preset.load_preset(bytes(data))
