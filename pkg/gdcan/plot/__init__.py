from .plot import *