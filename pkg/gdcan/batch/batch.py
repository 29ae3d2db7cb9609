import concurrent.futures
import pandas as pd
import psutil
from tqdm import tqdm

import gdcan.codec
import gdcan.errors
import gdcan.fingerprint
import gdcan.io
import gdcan.preset
import gdcan.qc
import gdcan.records
import gdcan.utils

"""
Library for multi-file preset training and compression benchmarks.
"""

MODES = (gdcan.codec.RAM_ONLY, gdcan.codec.FLASH_ONLY, gdcan.codec.HYBRID)

# generalized deduplication and plain deduplication (basis = whole chunk)
GD = 'gd'
DD = 'dd'
TRANSFORMS = (GD, DD)

BENCH_COLUMNS = ['file', 'method', 'transform', 'ram_budget', 'flash_budget', 'raw_bytes', 'compressed_bytes', 'gain']


def load_chunks(file_name,
                chunking=None,
                delta_timestamps=True):
    chunking = chunking or gdcan.records.chunking_config()
    records = gdcan.io.read_records(file_name)
    if delta_timestamps:
        records = gdcan.records.delta_encode_timestamps(records)
    return gdcan.records.records_to_chunks(records, chunking)

def train_from_files(files,
                     flash_budget,
                     chunking=None,
                     algo=gdcan.fingerprint.CRC32,
                     dedup_only=False,
                     delta_timestamps=True,
                     verbose=False):
    """
    Trains a preset dictionary from MDF4 / raw record files, in the order
    given.
    """
    if not files:
        raise gdcan.errors.ConfigError('no training inputs')
    chunking = chunking or gdcan.records.chunking_config()
    if verbose:
        print('Training preset dictionary from', len(files), 'files')
    streams = (load_chunks(f, chunking, delta_timestamps=delta_timestamps)
               for f in tqdm(files, disable=not verbose))
    return gdcan.preset.train_preset(streams,
                                     flash_budget,
                                     chunking.code,
                                     algo=algo,
                                     dedup_only=dedup_only,
                                     verbose=verbose)

def compress_file(file_name,
                  config,
                  preset=None,
                  output_file_name=None,
                  verbose=False):
    """
    Compresses one input file, returns the container bytes.
    """
    records = gdcan.io.read_records(file_name)
    if verbose:
        print('Compressing', len(records), 'records from', file_name, 'in', config.mode, 'mode')
    container = gdcan.codec.compress_records(records, config, preset=preset)
    if output_file_name is not None:
        gdcan.io.write_file(container, output_file_name)
    return container

def preset_flash_size(preset):
    return len(preset) * gdcan.fingerprint.fingerprint_length(preset.algo)

def repetition_stats(preset):
    """
    Average repetitions per training file of every preset fingerprint, by rank.
    """
    if preset.ranked_repetitions is None:
        raise gdcan.errors.ConfigError('preset dictionary carries no training counts, train it first')
    return pd.DataFrame({'rank': range(len(preset)),
                         'fingerprint': [fp.hex() for fp in preset.ranked_fingerprints],
                         'avg_repetitions': list(preset.ranked_repetitions)},
                        columns=['rank', 'fingerprint', 'avg_repetitions'])

def transform_of(dedup_only):
    return DD if dedup_only else GD

def bench_cells(modes,
                ram_budgets,
                flash_budgets):
    """
    (mode, ram_budget, flash_budget) combinations that make sense for each mode.
    """
    cells = []
    for mode in modes:
        if mode == gdcan.codec.RAM_ONLY:
            cells.extend((mode, ram, 0) for ram in ram_budgets)
        elif mode == gdcan.codec.FLASH_ONLY:
            cells.extend((mode, 0, flash) for flash in flash_budgets)
        elif mode == gdcan.codec.HYBRID:
            cells.extend((mode, ram, flash) for ram in ram_budgets for flash in flash_budgets)
        else:
            raise gdcan.errors.ConfigError('unknown mode %r' % mode)
    return cells

def bench_file(file_name,
               cells,
               presets,
               base_config,
               external=(),
               transforms=None):
    """
    Gain rows for one file, one fresh codec per (transform, cell).

    presets is keyed by (transform, flash_budget).
    """
    if transforms is None:
        transforms = (transform_of(base_config.dedup_only),)
    records = gdcan.io.read_records(file_name)
    raw_bytes = len(records) * gdcan.records.RECORD_SIZE
    rows = []
    for transform in transforms:
        for mode, ram_budget, flash_budget in cells:
            config = gdcan.codec.CodecConfig(mode=mode,
                                             chunking=base_config.chunking,
                                             algo=base_config.algo,
                                             ram_budget=ram_budget,
                                             accounting=base_config.accounting,
                                             delta_timestamps=base_config.delta_timestamps,
                                             dedup_only=transform == DD,
                                             verify=base_config.verify)
            preset = None
            if mode != gdcan.codec.RAM_ONLY:
                preset = presets[(transform, flash_budget)].compressor_side()
            container = gdcan.codec.compress_records(records, config, preset=preset)
            rows.append({'file': str(file_name),
                         'method': mode,
                         'transform': transform,
                         'ram_budget': ram_budget,
                         'flash_budget': flash_budget,
                         'raw_bytes': raw_bytes,
                         'compressed_bytes': len(container),
                         'gain': gdcan.qc.compression_gain(raw_bytes, len(container))})

    if external:
        data = records
        if base_config.delta_timestamps:
            data = gdcan.records.delta_encode_timestamps(records)
        data = gdcan.records.records_to_bytes(data)
        for name in external:
            size = gdcan.utils.external_compressed_size(data, name)
            if size is None:
                continue
            rows.append({'file': str(file_name),
                         'method': 'external:' + name,
                         'transform': '',
                         'ram_budget': 0,
                         'flash_budget': 0,
                         'raw_bytes': raw_bytes,
                         'compressed_bytes': size,
                         'gain': gdcan.qc.compression_gain(raw_bytes, size)})
    return rows

def bench(files,
          modes=MODES,
          ram_budgets=(gdcan.codec.DEFAULT_RAM_BUDGET,),
          flash_budgets=(gdcan.codec.DEFAULT_FLASH_BUDGET,),
          base_config=None,
          preset=None,
          external=(),
          max_workers=None,
          verbose=False,
          transforms=None):
    """
    Compresses every file under every (transform, mode, ram, flash) cell.

    transforms picks generalized deduplication (gd), plain deduplication
    (dd) or both side by side; by default it follows base_config.dedup_only.
    One preset dictionary is trained from files per transform and flash
    budget unless preset is given, in which case its own size is the only
    flash budget and its own transform the only transform.
    External compressors that are not installed are left out.

    Returns (per file DataFrame, avg/min/max summary DataFrame).
    """
    files = list(files)
    if not files:
        raise gdcan.errors.ConfigError('no benchmark inputs')
    base_config = base_config or gdcan.codec.CodecConfig()
    external = gdcan.utils.available_compressors(list(external)) if external else []
    if transforms is None:
        transforms = (transform_of(base_config.dedup_only),)
    transforms = list(dict.fromkeys(transforms))
    for transform in transforms:
        if transform not in TRANSFORMS:
            raise gdcan.errors.ConfigError('unknown transform %r, expected one of %s' % (transform, ', '.join(TRANSFORMS)))

    presets = {}
    if any(mode != gdcan.codec.RAM_ONLY for mode in modes):
        if preset is not None:
            transforms = [transform_of(preset.dedup_only)]
            gdcan.codec.check_preset(preset, base_config.code, base_config.algo, preset.dedup_only)
            flash_budgets = (preset_flash_size(preset),)
            presets[(transforms[0], flash_budgets[0])] = preset
        else:
            for transform in transforms:
                for flash_budget in flash_budgets:
                    presets[(transform, flash_budget)] = train_from_files(files,
                                                                          flash_budget,
                                                                          chunking=base_config.chunking,
                                                                          algo=base_config.algo,
                                                                          dedup_only=transform == DD,
                                                                          delta_timestamps=base_config.delta_timestamps,
                                                                          verbose=verbose)
    cells = bench_cells(modes, ram_budgets, flash_budgets)

    if max_workers is None:
        max_workers = psutil.cpu_count(logical=False) or 1
    if verbose:
        print('Benchmarking', len(cells) * len(transforms), 'configurations on', len(files), 'files with', max_workers, 'workers')

    rows = []
    with tqdm(total=len(files), disable=not verbose) as pbar:
        with concurrent.futures.ThreadPoolExecutor(max_workers=max_workers) as pool:
            futures = {pool.submit(bench_file, f, cells, presets, base_config, external, transforms): f for f in files}
            for future in concurrent.futures.as_completed(futures):
                rows.extend(future.result())
                pbar.update(1)

    df = pd.DataFrame(rows, columns=BENCH_COLUMNS)
    df = df.sort_values(['method', 'transform', 'ram_budget', 'flash_budget', 'file'], kind='stable').reset_index(drop=True)
    summary = gdcan.qc.summarize_gains(df, group_columns=('method', 'transform', 'ram_budget', 'flash_budget'))
    return df, summary
