__version__ = '1.0.0'

from .config import load_config
from .run import HSKRun

from .types import *
