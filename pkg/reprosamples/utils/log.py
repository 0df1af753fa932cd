# reprosamples/utils/log.py
import sys
from typing import Optional

from loguru import logger

from reprosamples.utils import config as config_module


def configure_logging(level: Optional[str] = None, log_file: Optional[str] = None) -> None:
    """
    Replace the default loguru handler with a rotating file sink and a console sink

    The console sink writes to stderr so JSON printed on stdout stays clean.
    """
    level = (level or config_module.config["logging"]["level"]).upper()
    log_file = log_file or config_module.config["logging"]["file"]
    logger.remove()
    if log_file:
        logger.add(
            log_file,
            rotation="10 MB",
            retention="1 week",
            level=level,
            format="{time:YYYY-MM-DD HH:mm:ss} | {level} | {name}:{line} | {message}",
        )
    logger.add(
        sys.stderr,
        level=level,
        format="{time:HH:mm:ss} | <level>{level: <8}</level> | {message}",
        colorize=True,
    )
