from .fingerprint import *