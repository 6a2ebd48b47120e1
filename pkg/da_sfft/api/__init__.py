import logging
import sys
from logging.handlers import RotatingFileHandler
from typing import Optional

logger = logging.getLogger("da_sfft")
logger.setLevel(logging.DEBUG)

_FORMAT = "%(asctime)s %(levelname)s %(name)s %(message)s"


def attach_log_file(log_file: str, file_count: int = 50):
    for handler in logger.handlers:
        if isinstance(handler, RotatingFileHandler) and handler.baseFilename == log_file:
            return

    file_handler = RotatingFileHandler(log_file, maxBytes=100_000, backupCount=file_count)
    file_handler.setLevel(logging.DEBUG)
    file_handler.setFormatter(logging.Formatter(_FORMAT))
    logger.addHandler(file_handler)


# Attaches console and (optionally) rotating file handlers, replacing previous ones
def configure_logging(log_file: Optional[str] = None, level: str = "INFO", file_count: int = 50):
    for handler in list(logger.handlers):
        logger.removeHandler(handler)
        handler.close()

    console = logging.StreamHandler(sys.stderr)
    console.setLevel(level)
    console.setFormatter(logging.Formatter(_FORMAT))
    logger.addHandler(console)

    if log_file:
        attach_log_file(log_file, file_count)
