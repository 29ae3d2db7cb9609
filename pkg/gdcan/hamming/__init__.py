from .hamming import *