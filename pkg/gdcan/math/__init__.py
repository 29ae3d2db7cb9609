from .math import *