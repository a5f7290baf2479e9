import logging
import sys

from app.config import settings


def get_logger(name: str = "regdefect"):
    logger = logging.getLogger(name)
    logger.setLevel(settings.LOG_LEVEL)
    # stdout carries reports, so logs go to stderr; attach the handler once per name
    if not logger.handlers:
        formatter = logging.Formatter(
            '[%(asctime)s] [%(levelname)s] %(name)s: %(message)s'
        )
        handler = logging.StreamHandler(sys.stderr)
        handler.setFormatter(formatter)
        logger.addHandler(handler)
        logger.propagate = False

    return logger


logger = get_logger()
