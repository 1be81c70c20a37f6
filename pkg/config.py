"""
Configuration management for the operator convexity toolkit
Contains numerical tolerances, sampling budgets and runtime settings
"""
import os
from dotenv import load_dotenv

# Load environment variables
load_dotenv()


def _env_float(name, default):
    return float(os.getenv(name, default))


def _env_int(name, default):
    return int(os.getenv(name, default))


class Config:
    """Base configuration class"""

    VERSION = '1.0.0'
    DEBUG = os.getenv('OPCONV_DEBUG', 'False').lower() == 'true'

    # Verification budgets
    PSD_TOLERANCE = _env_float('OPCONV_TOLERANCE', '1e-8')
    DEFAULT_TRIALS = _env_int('OPCONV_TRIALS', '500')
    DEFAULT_SEED = _env_int('OPCONV_SEED', '0')
    DEFAULT_DIMS = os.getenv('OPCONV_DIMS', '1..8')
    DEFAULT_C_GRID = os.getenv('OPCONV_C_GRID', '0.1,0.25,0.4,0.5,0.6,0.75,0.9')

    # Sampler settings
    EIGEN_FLOOR = _env_float('OPCONV_EIGEN_FLOOR', '0.05')
    SAMPLE_SCALE = _env_float('OPCONV_SCALE', '1.0')

    # Quadrature for integral representations
    QUADRATURE_NODES = _env_int('OPCONV_QUADRATURE_NODES', '256')

    # Threading Configuration
    MAX_WORKERS = _env_int('OPCONV_MAX_WORKERS', '4')

    # Counterexample refinement
    REFINE_SWEEPS = _env_int('OPCONV_REFINE_SWEEPS', '20')

    # Report settings
    WORST_OFFENDERS = _env_int('OPCONV_WORST_OFFENDERS', '10')
    LOG_DIRECTORY = os.getenv('OPCONV_LOG_DIRECTORY', 'logs')
    LOG_FILE = os.getenv('OPCONV_LOG_FILE', '')

    # Numerical contract (not environment driven)
    CONFLUENCE_THRESHOLD = 1e-7
    # second differences lose eps / spread^2 to cancellation; about eps^(1/4)
    CLUSTER_THRESHOLD = 1e-4
    DOMAIN_FLOOR = 1e-12
    BRANCH_THRESHOLD = 1e-3
    VIOLATION_THRESHOLD = 1e-6
    SUPPORT_FLOOR_SIGMA = 1e-14
    SUPPORT_FLOOR_RHO = 1e-12
    DENSITY_TOLERANCE = 1e-10
    ASYMMETRY_WARNING = 1e-8
    ASYMMETRY_LIMIT = 1e-4

    @classmethod
    def validate(cls):
        """Validate that the numerical settings are usable"""
        problems = []

        if cls.PSD_TOLERANCE < 0:
            problems.append(f'OPCONV_TOLERANCE must be >= 0 (got {cls.PSD_TOLERANCE})')
        if cls.DEFAULT_TRIALS < 1:
            problems.append(f'OPCONV_TRIALS must be >= 1 (got {cls.DEFAULT_TRIALS})')
        if cls.QUADRATURE_NODES < 16:
            problems.append(f'OPCONV_QUADRATURE_NODES must be >= 16 (got {cls.QUADRATURE_NODES})')
        if cls.MAX_WORKERS < 1:
            problems.append(f'OPCONV_MAX_WORKERS must be >= 1 (got {cls.MAX_WORKERS})')
        if cls.EIGEN_FLOOR <= 0:
            problems.append(f'OPCONV_EIGEN_FLOOR must be > 0 (got {cls.EIGEN_FLOOR})')
        if cls.EIGEN_FLOOR > cls.SAMPLE_SCALE:
            problems.append('OPCONV_EIGEN_FLOOR must not exceed OPCONV_SCALE')

        if problems:
            raise ValueError(f"Invalid configuration: {'; '.join(problems)}")

        return True


class DevelopmentConfig(Config):
    """Development configuration"""
    DEBUG = True


class ProductionConfig(Config):
    """Full acceptance budgets"""
    DEBUG = False
    DEFAULT_TRIALS = 500


class TestingConfig(Config):
    """Testing configuration"""
    DEBUG = True
    DEFAULT_TRIALS = 50
    MAX_WORKERS = 2


# Configuration mapping
config_map = {
    'development': DevelopmentConfig,
    'production': ProductionConfig,
    'testing': TestingConfig,
    'default': DevelopmentConfig
}


def get_config(environment='default'):
    """Get configuration class based on environment"""
    return config_map.get(environment, DevelopmentConfig)
