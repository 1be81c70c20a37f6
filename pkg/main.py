#!/usr/bin/env python3
"""
Operator Convexity Toolkit - Main Entry Point

Command-line verification of the Bregman lower bound on the modulus of
convexity, the strengthened arithmetic-harmonic inequality and the entropy
concavity bounds, plus counterexample mining.
"""
import argparse
import logging
import sys
from pathlib import Path

# Add project root to Python path for imports
project_root = Path(__file__).parent
sys.path.insert(0, str(project_root))

from application import ENVIRONMENTS, create_app  # noqa: E402
from config import get_config  # noqa: E402


def setup_logging(config, debug=False, log_file=None):
    """Configure logging; stdout is reserved for reports"""
    log_level = logging.DEBUG if debug or config.DEBUG else logging.INFO

    formatter = logging.Formatter(
        '%(asctime)s - %(name)s - %(levelname)s - %(message)s'
    )

    root_logger = logging.getLogger()
    root_logger.setLevel(log_level)
    for handler in list(root_logger.handlers):
        root_logger.removeHandler(handler)

    # Console handler
    console_handler = logging.StreamHandler(sys.stderr)
    console_handler.setLevel(log_level)
    console_handler.setFormatter(formatter)
    root_logger.addHandler(console_handler)

    # File handler
    if log_file:
        log_path = Path(log_file)
        if not log_path.is_absolute():
            log_path = Path(config.LOG_DIRECTORY) / log_path
        log_path.parent.mkdir(parents=True, exist_ok=True)

        file_handler = logging.FileHandler(log_path)
        file_handler.setLevel(log_level)
        file_handler.setFormatter(formatter)
        root_logger.addHandler(file_handler)


def parse_global_flags(argv):
    """Pick out --env, --debug and --log-file before the full parse"""
    parser = argparse.ArgumentParser(add_help=False)
    parser.add_argument('--env', choices=ENVIRONMENTS, default='development')
    parser.add_argument('--debug', action='store_true')
    parser.add_argument('--log-file', default=None)
    flags, _ = parser.parse_known_args(argv)
    return flags


def main(argv=None):
    """Main application entry point"""
    argv = sys.argv[1:] if argv is None else argv
    flags = parse_global_flags(argv)
    config = get_config(flags.env)

    setup_logging(config, debug=flags.debug, log_file=flags.log_file or config.LOG_FILE)

    try:
        app = create_app(flags.env)
    except ValueError as e:
        logging.getLogger(__name__).error(f"❌ Configuration validation failed: {e}")
        return 2

    return app.run(argv)


if __name__ == '__main__':
    sys.exit(main())
