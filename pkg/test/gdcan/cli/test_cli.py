import os
import pytest

import gdcan


@pytest.fixture
def gdr_file(tmp_path, repetitive_record_factory):
    records = repetitive_record_factory(3000, seed=40)
    return gdcan.io.write_records(records, str(tmp_path / 'drive.gdr')), records

@pytest.fixture
def trained(tmp_path, gdr_file, capsys):
    prefix = str(tmp_path / 'dicts' / 'fleet')
    assert gdcan.cli.main(['train', gdr_file[0], '--flash', '1k', '--dict-out', prefix]) == 0
    capsys.readouterr()
    return prefix


@pytest.mark.parametrize('text, size', [('0', 0), ('1024', 1024), ('20k', 20480), ('1.5K', 1536), ('2M', 2097152)])
def test_parse_size(text, size):
    assert gdcan.cli.parse_size(text) == size

@pytest.mark.parametrize('text', ['', 'lots', '-1k', '0.3'])
def test_parse_size_errors(text):
    with pytest.raises(gdcan.errors.ConfigError):
        gdcan.cli.parse_size(text)

def test_parse_size_list():
    assert gdcan.cli.parse_size_list('1k,20k, 100k') == [1024, 20480, 102400]

def test_train_writes_both_sides(trained, tmp_path, gdr_file, capsys):
    assert os.path.exists(trained + '.gdpd')
    assert os.path.exists(trained + '.gdpb')
    gdcan.cli.main(['train', gdr_file[0], '--flash', '1k', '--dict-out', trained])
    out = capsys.readouterr().out
    preset = gdcan.preset.read_preset(trained + '.gdpb')
    assert 'entries=%d' % len(preset) in out
    assert 'dict_id=%s' % preset.dict_id.hex() in out
    assert 'compressor_dictionary=%s.gdpd' % trained in out

@pytest.mark.parametrize('mode', ['ram_only', 'flash_only', 'hybrid'])
def test_compress_decompress(tmp_path, gdr_file, trained, capsys, mode):
    file_name, records = gdr_file
    container = str(tmp_path / ('%s.gdcb' % mode))
    restored = str(tmp_path / ('%s.gdr' % mode))
    compress_args = ['compress', file_name, '-o', container, '--mode', mode, '--ram', '20k', '--report', 'kv']
    decompress_args = ['decompress', container, '-o', restored]
    if mode != 'ram_only':
        compress_args += ['--dict', trained + '.gdpd']
        decompress_args += ['--dict', trained + '.gdpb']

    assert gdcan.cli.main(compress_args) == 0
    out = capsys.readouterr().out
    assert 'mode=%s' % mode in out
    assert 'records=3000' in out
    assert gdcan.cli.main(decompress_args) == 0
    assert gdcan.records.read_gdr(restored).tobytes() == records.tobytes()

def test_default_output_names(tmp_path, gdr_file):
    file_name, records = gdr_file
    assert gdcan.cli.main(['compress', file_name, '--chunking', 'multi:3', '--report', 'text']) == 0
    assert os.path.exists(str(tmp_path / 'drive.gdcb'))
    os.remove(file_name)
    mf4 = str(tmp_path / 'drive.mf4')
    assert gdcan.cli.main(['decompress', str(tmp_path / 'drive.gdcb'), '--mf4', mf4]) == 0
    assert gdcan.io.read_records(file_name).tobytes() == records.tobytes()
    assert gdcan.io.read_records(mf4).tobytes() == records.tobytes()

def test_empty_input(tmp_path, capsys):
    file_name = str(tmp_path / 'empty.gdr')
    open(file_name, 'wb').close()
    assert gdcan.cli.main(['compress', file_name]) == 0
    out = capsys.readouterr().out
    assert 'gain n/a' in out
    assert 'gain=n/a' in out
    assert 'total_bytes=30' in out

def test_report_command(tmp_path, gdr_file, capsys):
    container = str(tmp_path / 'drive.gdcb')
    gdcan.cli.main(['compress', gdr_file[0], '-o', container, '--report', 'text'])
    capsys.readouterr()
    assert gdcan.cli.main(['report', container, '--report', 'kv']) == 0
    out = capsys.readouterr().out
    assert 'total_bytes=%d' % os.path.getsize(container) in out

def test_flash_only_needs_a_dictionary(gdr_file, capsys):
    assert gdcan.cli.main(['compress', gdr_file[0], '--mode', 'flash_only']) == 2
    assert 'error[config]' in capsys.readouterr().err

def test_wrong_dictionary(tmp_path, gdr_file, trained, capsys, repetitive_record_factory):
    other_file = gdcan.io.write_records(repetitive_record_factory(500, seed=41), str(tmp_path / 'other.gdr'))
    other = str(tmp_path / 'other')
    gdcan.cli.main(['train', other_file, '--dict-out', other])
    container = str(tmp_path / 'drive.gdcb')
    gdcan.cli.main(['compress', gdr_file[0], '-o', container, '--mode', 'hybrid', '--dict', trained + '.gdpd'])
    capsys.readouterr()
    assert gdcan.cli.main(['decompress', container, '--dict', other + '.gdpb']) == 6
    assert 'error[dictionary]' in capsys.readouterr().err

def test_truncated_container(tmp_path, gdr_file, capsys):
    container = str(tmp_path / 'drive.gdcb')
    gdcan.cli.main(['compress', gdr_file[0], '-o', container])
    data = gdcan.io.read_file(container)
    gdcan.io.write_file(data[:-5], container)
    capsys.readouterr()
    assert gdcan.cli.main(['decompress', container]) == 3
    assert 'error[format]' in capsys.readouterr().err

def test_missing_input(tmp_path, capsys):
    assert gdcan.cli.main(['compress', str(tmp_path / 'nope.gdr')]) == gdcan.cli.IO_EXIT_CODE
    assert 'error[io]' in capsys.readouterr().err

def test_not_mdf4(tmp_path, capsys):
    file_name = tmp_path / 'fake.mf4'
    file_name.write_bytes(b'not an mdf file at all')
    assert gdcan.cli.main(['compress', str(file_name)]) == 3
    assert 'error[not-mdf4]' in capsys.readouterr().err

def test_bench_command(tmp_path, gdr_file, capsys):
    csv = str(tmp_path / 'bench' / 'summary.csv')
    plot = str(tmp_path / 'bench' / 'gains.png')
    assert gdcan.cli.main(['bench', gdr_file[0], '--ram', '1k,20k', '--flash', '1k',
                           '--csv', csv, '--plot', plot, '--workers', '1']) == 0
    out = capsys.readouterr().out
    assert 'hybrid' in out
    assert os.path.getsize(plot) > 0
    with open(csv) as f:
        lines = f.read().splitlines()
    assert lines[0] == 'method,transform,ram_budget,flash_budget,avg,min,max,files'
    assert len(lines) == 1 + 2 * (2 + 1 + 2)

def test_bench_dedup_only(tmp_path, gdr_file, capsys):
    csv = str(tmp_path / 'summary.csv')
    assert gdcan.cli.main(['bench', gdr_file[0], '--modes', 'ram_only', '--ram', '1k',
                           '--dedup-only', '--csv', csv, '--workers', '1']) == 0
    with open(csv) as f:
        lines = f.read().splitlines()
    assert len(lines) == 2
    assert lines[1].startswith('ram_only,dd,1024,0,')

def test_train_repetitions(tmp_path, gdr_file, capsys):
    csv = str(tmp_path / 'stats' / 'repetitions.csv')
    plot = str(tmp_path / 'stats' / 'repetitions.png')
    assert gdcan.cli.main(['train', gdr_file[0], '--flash', '64', '--dict-out', str(tmp_path / 'fleet'),
                           '--repetitions', csv, '--repetitions-plot', plot]) == 0
    assert 'repetitions=%s' % csv in capsys.readouterr().out
    assert os.path.getsize(plot) > 0
    with open(csv) as f:
        lines = f.read().splitlines()
    assert lines[0] == 'rank,fingerprint,avg_repetitions'
    assert len(lines) == 1 + 16
    assert lines[1].startswith('0,')

@pytest.mark.parametrize('argv', [
    ['compress', 'x.gdr', '--fp', 'sha1'],
    ['compress', 'x.gdr', '--mode', 'stream_only'],
    ['train', 'x.gdr'],
    ['bench'],
    ['unpack', 'x.gdcb'],
    [],
])
def test_usage_errors(argv, capsys):
    assert gdcan.cli.main(argv) == 2
    assert 'error[config]' in capsys.readouterr().err

@pytest.mark.parametrize('mode', ['flash_only', 'hybrid'])
def test_outputs_are_deterministic(tmp_path, gdr_file, mode):
    outputs = []
    for run in ['first', 'second']:
        prefix = str(tmp_path / run / 'fleet')
        container = str(tmp_path / run / 'drive.gdcb')
        assert gdcan.cli.main(['train', gdr_file[0], '--flash', '1k', '--dict-out', prefix]) == 0
        assert gdcan.cli.main(['compress', gdr_file[0], '-o', container, '--mode', mode,
                               '--dict', prefix + '.gdpd', '--report', 'kv']) == 0
        outputs.append([gdcan.io.read_file(name) for name in [prefix + '.gdpd', prefix + '.gdpb', container]])
    assert outputs[0] == outputs[1]
