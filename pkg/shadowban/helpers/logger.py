import logging
import os

logger = logging.getLogger('Shadowban')
_handler = logging.StreamHandler()
_handler.setFormatter(logging.Formatter('[Shadowban:%(levelname)s]: %(message)s'))
logger.addHandler(_handler)

if os.environ.get('SHADOWBAN_DEBUG'):
    logger.setLevel(logging.DEBUG)


def enable_progress_logging() -> None:
    """Show run, policy and sweep lifecycle lines; never lowers an already finer level."""
    if logger.getEffectiveLevel() > logging.INFO:
        logger.setLevel(logging.INFO)
