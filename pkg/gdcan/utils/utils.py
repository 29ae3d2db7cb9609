import shutil
import sys

import gdcan.io

"""
Library for external general purpose compressors used as baselines.
"""

EXTERNAL_COMPRESSORS = {'gzip':  ['gzip', '-9', '-c'],
                        'bzip2': ['bzip2', '-9', '-c'],
                        'xz':    ['xz', '-9', '-c']}


def available_compressors(names=None):
    names = list(EXTERNAL_COMPRESSORS) if names is None else names
    found = []
    for name in names:
        if name not in EXTERNAL_COMPRESSORS:
            print('WARNING: unknown external compressor', name, file=sys.stderr)
        elif shutil.which(EXTERNAL_COMPRESSORS[name][0]) is None:
            print('WARNING:', name, 'not found on PATH -- skipped', file=sys.stderr)
        else:
            found.append(name)
    return found

def external_compressed_size(data,
                             name,
                             verbose=False,
                             print_call=False):
    """
    Size of data piped through an external compressor, None on failure.
    """
    call = EXTERNAL_COMPRESSORS[name]
    if print_call:
        print(*call)
    returncode, out = gdcan.io.run_command(call, verbose=verbose, stdin=bytes(data))
    if returncode != 0:
        print('WARNING:', name, 'exited with status', returncode, file=sys.stderr)
        return None
    return len(out)
