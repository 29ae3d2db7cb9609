from .preset import *