from .records import *