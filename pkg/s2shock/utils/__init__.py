"""
s2shock: utils/__init__.py

This submodule provides json and record parse utility functions.

License: MIT
"""

from .json_utils import *
from .parse_utils import *
