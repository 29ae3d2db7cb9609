from .codec import *