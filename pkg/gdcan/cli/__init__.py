from .cli import *