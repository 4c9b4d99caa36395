"""Shadow-banning policies for bounded-confidence opinion dynamics."""
from shadowban.helpers import exceptions as shadowban_exceptions
from shadowban.helpers.logger import logger as shadowban_logger


__all__ = ('shadowban_exceptions', 'shadowban_logger')
