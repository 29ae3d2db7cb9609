from .transform import *