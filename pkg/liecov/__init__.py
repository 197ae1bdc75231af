"""Covariant polynomial maps and point distributions on split semisimple Lie algebras."""

import logging
import os
from dataclasses import dataclass

from dotenv import load_dotenv

from liecov.errors import InvalidInput

# Load environment variables
load_dotenv()

__version__ = '0.1.0'

LOG_FORMAT = '%(asctime)s %(levelname)s %(name)s: %(message)s'


@dataclass(frozen=True)
class Context:
    """Resolved configuration of one toolkit session"""

    config_name: str
    settings: type

    @property
    def threads(self):
        return max(1, self.settings.THREADS)

    @property
    def seed(self):
        return self.settings.SEED


def create_context(config_name=None):
    """Context factory: resolve the configuration and configure logging"""
    from config import config

    if config_name is None:
        config_name = os.getenv('LIECOV_ENV', 'default')
    if config_name not in config:
        raise InvalidInput(
            f"unknown configuration '{config_name}'; use one of {', '.join(sorted(config))}"
        )
    settings = config[config_name]

    root = logging.getLogger()
    if not root.handlers:
        logging.basicConfig(format=LOG_FORMAT)
    logging.getLogger('liecov').setLevel(settings.LOG_LEVEL)

    return Context(config_name, settings)
