"""
Aether: transmit power minimization for IRS-assisted SWIPT-NOMA downlinks.
"""

__version__ = "0.1.0"

from pathlib import Path

from .utils.config.settings import settings

# Define package root
ROOT_DIR = Path(__file__).parent.absolute()
