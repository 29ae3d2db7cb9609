from .dictionary import *