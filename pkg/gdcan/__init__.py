import gdcan.errors
import gdcan.math
import gdcan.hamming
import gdcan.transform
import gdcan.fingerprint
import gdcan.dictionary
import gdcan.preset
import gdcan.records
import gdcan.mdf
import gdcan.codec
import gdcan.io
import gdcan.utils
import gdcan.qc
import gdcan.batch
import gdcan.plot
import gdcan.cli
