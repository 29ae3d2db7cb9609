import glob
import os
import pathlib
from subprocess import Popen, PIPE, STDOUT

import gdcan.errors
import gdcan.io
import gdcan.mdf
import gdcan.records

"""
Library interface with command line and file system.
"""

MDF_EXTENSIONS = ('.mf4', '.mdf')
RAW_EXTENSIONS = ('.gdr',)
CONTAINER_EXTENSION = '.gdcb'


def split_file(file_path_and_name):
    file_path = os.path.split(file_path_and_name)[0]
    file_name = os.path.splitext(os.path.split(file_path_and_name)[-1])[0]
    file_extension = os.path.splitext(os.path.split(file_path_and_name)[-1])[-1]
    return file_path, file_name, file_extension

def create_dir(directory):
    if directory:
        pathlib.Path(directory).mkdir(parents=True, exist_ok=True)
    return directory

def run_command(command, verbose=False, stdin=None):
    """
    Runs command and returns (return code, stdout bytes).
    """
    p = Popen(command,
              stdin=PIPE if stdin is not None else None,
              stdout=PIPE,
              stderr=PIPE if stdin is not None else STDOUT)
    out, err = p.communicate(stdin)
    if verbose and err:
        print(err.decode('ASCII', errors='replace').rstrip('\n'))
    return p.returncode, out

def read_file(file_name):
    with open(file_name, 'rb') as f:
        return f.read()

def write_file(data, file_name):
    create_dir(os.path.dirname(str(file_name)))
    with open(file_name, 'wb') as f:
        f.write(data)
    return file_name

def read_records(file_name):
    """
    Records of an MDF4 file (.mf4 / .mdf) or a raw record dump (.gdr).
    """
    _, _, extension = gdcan.io.split_file(str(file_name))
    extension = extension.lower()
    if extension in RAW_EXTENSIONS:
        return gdcan.records.read_gdr(file_name)
    if extension in MDF_EXTENSIONS:
        tree = gdcan.mdf.open_file(file_name)
        data, _ = gdcan.mdf.extract_records(tree)
        return gdcan.records.records_from_bytes(data)
    raise gdcan.errors.ConfigError('unsupported input %s, expected %s'
                                   % (file_name, ', '.join(MDF_EXTENSIONS + RAW_EXTENSIONS)))

def write_records(records, file_name, mf4=False):
    create_dir(os.path.dirname(str(file_name)))
    if mf4:
        return gdcan.io.write_file(gdcan.mdf.write_fixture(records), file_name)
    return gdcan.records.write_gdr(records, file_name)

def list_inputs(paths):
    """
    Expands directories into the MDF4 and raw record files they hold.
    """
    files = []
    for path in paths:
        path = str(path)
        if os.path.isdir(path):
            for extension in MDF_EXTENSIONS + RAW_EXTENSIONS:
                files.extend(glob.glob(os.path.join(path, '*' + extension)))
        else:
            files.append(path)
    return sorted(set(files))
