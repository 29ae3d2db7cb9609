import argparse
from dataclasses import dataclass, field
import os
import sys

import gdcan.batch
import gdcan.codec
import gdcan.dictionary
import gdcan.errors
import gdcan.fingerprint
import gdcan.io
import gdcan.plot
import gdcan.preset
import gdcan.qc
import gdcan.records

"""
Command line front end: gdcan {compress,decompress,train,bench,report}.
"""

SIZE_SUFFIXES = {'k': 1024, 'm': 1024**2}

REPORT_TEXT = 'text'
REPORT_KV = 'kv'
REPORT_BOTH = 'both'

IO_EXIT_CODE = 8


def parse_size(text):
    """
    Byte count with an optional k / M suffix: '20k' -> 20480.
    """
    text = str(text).strip()
    factor = 1
    if text and text[-1].lower() in SIZE_SUFFIXES:
        factor = SIZE_SUFFIXES[text[-1].lower()]
        text = text[:-1]
    try:
        value = float(text) * factor
    except ValueError:
        raise gdcan.errors.ConfigError('bad size %r' % text) from None
    if value < 0 or value != int(value):
        raise gdcan.errors.ConfigError('size must be a whole number of bytes, got %r' % text)
    return int(value)

def parse_size_list(text):
    return [parse_size(part) for part in str(text).split(',') if part.strip()]


@dataclass
class RunConfig:
    mode: str = gdcan.codec.RAM_ONLY
    ram_budget: int = gdcan.codec.DEFAULT_RAM_BUDGET
    flash_budget: int = gdcan.codec.DEFAULT_FLASH_BUDGET
    chunking: gdcan.records.ChunkingConfig = field(default_factory=gdcan.records.chunking_config)
    algo: str = gdcan.fingerprint.CRC32
    accounting: str = gdcan.dictionary.PAPER
    dict_path: str = None
    dict_out: str = None
    delta_timestamps: bool = True
    dedup_only: bool = False
    verify: bool = False

    def validate(self):
        if self.mode not in gdcan.codec.MODE_CODES:
            raise gdcan.errors.ConfigError('unknown mode %r' % self.mode)
        if self.mode == gdcan.codec.RAM_ONLY and self.dict_path:
            raise gdcan.errors.ConfigError('ram_only mode takes no dictionary, drop --dict')
        if self.mode != gdcan.codec.RAM_ONLY and not self.dict_path:
            raise gdcan.errors.ConfigError('%s mode needs a preset dictionary, pass --dict' % self.mode)
        if self.accounting not in (gdcan.dictionary.PAPER, gdcan.dictionary.UNIFORM):
            raise gdcan.errors.ConfigError('unknown accounting mode %r' % self.accounting)
        return self

    def codec_config(self):
        return gdcan.codec.CodecConfig(mode=self.mode,
                                       chunking=self.chunking,
                                       algo=self.algo,
                                       ram_budget=self.ram_budget,
                                       accounting=self.accounting,
                                       delta_timestamps=self.delta_timestamps,
                                       dedup_only=self.dedup_only,
                                       verify=self.verify)


def run_config_from_args(args):
    return RunConfig(mode=getattr(args, 'mode', gdcan.codec.RAM_ONLY),
                     ram_budget=parse_size(getattr(args, 'ram', gdcan.codec.DEFAULT_RAM_BUDGET)),
                     flash_budget=parse_size(getattr(args, 'flash', gdcan.codec.DEFAULT_FLASH_BUDGET)),
                     chunking=gdcan.records.chunking_from_string(args.chunking),
                     algo=args.fp,
                     accounting=args.accounting,
                     dict_path=getattr(args, 'dict', None),
                     dict_out=getattr(args, 'dict_out', None),
                     delta_timestamps=not args.no_delta_ts,
                     dedup_only=args.dedup_only,
                     verify=getattr(args, 'verify', False))

def print_report(report, style=REPORT_BOTH):
    if style in (REPORT_TEXT, REPORT_BOTH):
        print('Compressed', report['records'], 'records (%d bytes)' % report['raw_bytes'],
              'into', report['total_bytes'], 'bytes')
        print('mode', report['mode'] + ', chunking', report['chunking'] + ', code', report['code'])
        print('new bases', report['tokens_new_basis'],
              '| references', report['tokens_ref_primary'] + report['tokens_ref_ram'],
              '| resets', report['tokens_reset'])
        print('gain', gdcan.qc.format_gain(report['gain']))
    if style in (REPORT_KV, REPORT_BOTH):
        for line in gdcan.qc.report_lines(report):
            print(line)

def cmd_compress(args):
    config = run_config_from_args(args).validate()
    preset = None
    if config.dict_path:
        preset = gdcan.preset.read_preset(config.dict_path).compressor_side()
    output_file_name = args.output
    if output_file_name is None:
        file_path, file_name, _ = gdcan.io.split_file(args.input)
        output_file_name = os.path.join(file_path, file_name + gdcan.io.CONTAINER_EXTENSION)
    container = gdcan.batch.compress_file(args.input,
                                          config.codec_config(),
                                          preset=preset,
                                          output_file_name=output_file_name,
                                          verbose=args.verbose)
    print_report(gdcan.codec.compressed_size_report(container), args.report)
    return 0

def cmd_decompress(args):
    container = gdcan.io.read_file(args.input)
    preset = gdcan.preset.read_preset(args.dict) if args.dict else None
    records = gdcan.codec.decompress_records(container, preset=preset)
    output_file_name = args.output
    if output_file_name is None:
        file_path, file_name, _ = gdcan.io.split_file(args.input)
        output_file_name = os.path.join(file_path, file_name + '.gdr')
    gdcan.io.write_records(records, output_file_name)
    if args.mf4:
        gdcan.io.write_records(records, args.mf4, mf4=True)
    if args.verbose:
        print('Decompressed', len(records), 'records to', output_file_name)
    return 0

def cmd_train(args):
    config = run_config_from_args(args)
    if not config.dict_out:
        raise gdcan.errors.ConfigError('train needs --dict-out PREFIX')
    files = gdcan.io.list_inputs(args.inputs)
    preset = gdcan.batch.train_from_files(files,
                                          config.flash_budget,
                                          chunking=config.chunking,
                                          algo=config.algo,
                                          dedup_only=config.dedup_only,
                                          delta_timestamps=config.delta_timestamps,
                                          verbose=args.verbose)
    gdcan.io.create_dir(os.path.dirname(config.dict_out))
    compressor_file, decompressor_file = gdcan.preset.write_preset(preset, config.dict_out)
    print('entries=%d' % len(preset))
    print('dict_id=%s' % preset.dict_id.hex())
    print('compressor_dictionary=%s' % compressor_file)
    print('decompressor_dictionary=%s' % decompressor_file)
    if args.repetitions:
        stats = gdcan.batch.repetition_stats(preset)
        gdcan.io.create_dir(os.path.dirname(args.repetitions))
        stats.to_csv(args.repetitions, index=False)
        print('repetitions=%s' % args.repetitions)
    if args.repetitions_plot:
        gdcan.plot.plot_repetitions(gdcan.batch.repetition_stats(preset), output_file_name=args.repetitions_plot)
    return 0

def cmd_bench(args):
    config = run_config_from_args(args)
    modes = [mode.strip() for mode in args.modes.split(',') if mode.strip()]
    preset = gdcan.preset.read_preset(config.dict_path) if config.dict_path else None
    external = [name.strip() for name in args.external.split(',') if name.strip()] if args.external else ()
    if args.transforms:
        transforms = [t.strip() for t in args.transforms.split(',') if t.strip()]
    else:
        transforms = [gdcan.batch.DD] if config.dedup_only else list(gdcan.batch.TRANSFORMS)
    df, summary = gdcan.batch.bench(gdcan.io.list_inputs(args.inputs),
                                    modes=modes,
                                    ram_budgets=parse_size_list(args.ram_list),
                                    flash_budgets=parse_size_list(args.flash_list),
                                    base_config=config.codec_config(),
                                    preset=preset,
                                    external=external,
                                    max_workers=args.workers,
                                    verbose=args.verbose,
                                    transforms=transforms)
    if args.verbose:
        print(df.to_string(index=False))
    print(summary.to_string(index=False, float_format=lambda gain: '%.3f' % gain))
    if args.csv:
        gdcan.io.create_dir(os.path.dirname(args.csv))
        summary.to_csv(args.csv, index=False)
    if args.plot:
        gdcan.plot.plot_bench_gains(summary, output_file_name=args.plot)
    return 0

def cmd_report(args):
    report = gdcan.codec.compressed_size_report(gdcan.io.read_file(args.input))
    print_report(report, args.report)
    return 0

def _add_codec_arguments(parser):
    parser.add_argument('--chunking', default='half', help='half, full or multi:N (default half)')
    parser.add_argument('--fp', default=gdcan.fingerprint.CRC32, choices=list(gdcan.fingerprint.ALGORITHMS))
    parser.add_argument('--accounting', default=gdcan.dictionary.PAPER,
                        choices=[gdcan.dictionary.PAPER, gdcan.dictionary.UNIFORM])
    parser.add_argument('--no-delta-ts', action='store_true', help='store absolute timestamps')
    parser.add_argument('--dedup-only', action='store_true', help='plain deduplication, no deviations')
    parser.add_argument('-v', '--verbose', action='store_true')

class ArgumentParser(argparse.ArgumentParser):
    """
    Reports usage errors as ConfigError instead of exiting.
    """
    def error(self, message):
        raise gdcan.errors.ConfigError('%s: %s' % (self.prog, message))

def build_parser():
    parser = ArgumentParser(prog='gdcan',
                            description='Generalized deduplication compressor for CAN logs in MDF4')
    sub = parser.add_subparsers(dest='command', required=True)

    c = sub.add_parser('compress', help='compress an .mf4 or .gdr file into a .gdcb container')
    c.add_argument('input')
    c.add_argument('-o', '--output')
    c.add_argument('--mode', default=gdcan.codec.RAM_ONLY, choices=list(gdcan.codec.MODE_CODES))
    c.add_argument('--ram', default=str(gdcan.codec.DEFAULT_RAM_BUDGET))
    c.add_argument('--dict', help='preset dictionary (.gdpd or .gdpb)')
    c.add_argument('--verify', action='store_true', help='keep bases in RAM to catch fingerprint collisions')
    c.add_argument('--report', default=REPORT_BOTH, choices=[REPORT_TEXT, REPORT_KV, REPORT_BOTH])
    _add_codec_arguments(c)
    c.set_defaults(func=cmd_compress)

    d = sub.add_parser('decompress', help='decompress a .gdcb container into .gdr records')
    d.add_argument('input')
    d.add_argument('-o', '--output')
    d.add_argument('--mf4', help='also write the records as an MDF4 file')
    d.add_argument('--dict', help='decompressor side preset dictionary (.gdpb)')
    d.add_argument('-v', '--verbose', action='store_true')
    d.set_defaults(func=cmd_decompress)

    t = sub.add_parser('train', help='train a preset dictionary pair')
    t.add_argument('inputs', nargs='+')
    t.add_argument('--flash', default=str(gdcan.codec.DEFAULT_FLASH_BUDGET))
    t.add_argument('--dict-out', required=True, help='output prefix for .gdpd / .gdpb')
    t.add_argument('--repetitions', help='write average repetitions per training file of every entry as CSV')
    t.add_argument('--repetitions-plot', help='write average repetitions against rank (png)')
    _add_codec_arguments(t)
    t.set_defaults(func=cmd_train)

    b = sub.add_parser('bench', help='gain table per mode and budget')
    b.add_argument('inputs', nargs='+')
    b.add_argument('--modes', default=','.join(gdcan.batch.MODES))
    b.add_argument('--transforms', help='gd, dd or gd,dd (default gd,dd, or dd with --dedup-only)')
    b.add_argument('--ram', dest='ram_list', default=str(gdcan.codec.DEFAULT_RAM_BUDGET),
                   help='comma separated RAM budgets')
    b.add_argument('--flash', dest='flash_list', default=str(gdcan.codec.DEFAULT_FLASH_BUDGET),
                   help='comma separated flash budgets')
    b.add_argument('--dict', help='use this preset dictionary instead of training one per flash budget')
    b.add_argument('--external', help='comma separated external compressors: gzip, bzip2, xz')
    b.add_argument('--csv', help='write the summary table as CSV')
    b.add_argument('--plot', help='write a gain plot (png)')
    b.add_argument('--workers', type=int, default=None)
    _add_codec_arguments(b)
    b.set_defaults(func=cmd_bench)

    r = sub.add_parser('report', help='size breakdown of a .gdcb container')
    r.add_argument('input')
    r.add_argument('--report', default=REPORT_BOTH, choices=[REPORT_TEXT, REPORT_KV, REPORT_BOTH])
    r.set_defaults(func=cmd_report)
    return parser

def main(argv=None):
    try:
        args = build_parser().parse_args(argv)
        return args.func(args)
    except gdcan.errors.GdcanError as e:
        print(str(e), file=sys.stderr)
        return e.exit_code
    except OSError as e:
        print('error[io]: %s' % e, file=sys.stderr)
        return IO_EXIT_CODE
