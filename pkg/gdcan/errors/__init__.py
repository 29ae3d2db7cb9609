from .errors import *