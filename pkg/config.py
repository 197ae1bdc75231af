import os
from dotenv import load_dotenv

load_dotenv()


def _optional_int(name):
    value = os.getenv(name)
    return int(value) if value else None


class Config:
    """Base configuration class"""
    THREADS = int(os.getenv('LIECOV_THREADS', '1'))
    SEED = int(os.getenv('LIECOV_SEED', '0'))

    # Pointwise tolerances (relative)
    TOL_INPUT = float(os.getenv('LIECOV_TOL_INPUT', '1e-6'))
    TOL_RESIDUAL = float(os.getenv('LIECOV_TOL_RESIDUAL', '1e-9'))

    # Overrides the catalog default degree bound when set
    DEGREE_BOUND = _optional_int('LIECOV_DEGREE_BOUND')

    OUTPUT_FORMAT = 'json'
    LOG_LEVEL = os.getenv('LIECOV_LOG_LEVEL', 'INFO')

class DevelopmentConfig(Config):
    """Development configuration"""
    DEBUG = True

class ProductionConfig(Config):
    """Production configuration"""
    DEBUG = False
    LOG_LEVEL = os.getenv('LIECOV_LOG_LEVEL', 'WARNING')

class TestingConfig(Config):
    """Testing configuration"""
    TESTING = True
    LOG_LEVEL = 'DEBUG'

    # Tests pin the seed and run single-threaded
    SEED = 0
    THREADS = 1

# Configuration mapping
config = {
    'development': DevelopmentConfig,
    'production': ProductionConfig,
    'testing': TestingConfig,
    'default': DevelopmentConfig
}
