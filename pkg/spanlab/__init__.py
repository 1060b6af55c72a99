"""
spanlab: sublinear additive spanners and emulators, plus the hierarchy of
hard instances that shows they are (nearly) optimal.

set SPANLAB_LOG_LEVEL (or put it in a .env) to see what the builders are doing.
"""

import os
import sys

from dotenv import load_dotenv
from loguru import logger

load_dotenv()

logger.remove()
logger.add(sys.stderr, level=os.getenv("SPANLAB_LOG_LEVEL", "WARNING"))


def set_log_level(level: str) -> None:
    """swap the stderr sink for one at the given level"""
    logger.remove()
    logger.add(sys.stderr, level=level)
