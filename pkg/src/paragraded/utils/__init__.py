"""
Paragraded Utilities
====================

Configuration, logging, shared linear algebra and CSV export.
"""

from .config import Config
from .logger import setup_logger

__all__ = [
    "Config",
    "setup_logger",
]
