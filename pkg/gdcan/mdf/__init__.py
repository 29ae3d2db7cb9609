from .mdf import *