"""
Application Factory for the operator convexity toolkit

Builds the command-line application: loads the configuration, registers one
subcommand per command module and maps failures to exit codes.
"""
import argparse
import logging
import sys

from config import get_config
from commands import COMMAND_MODULES, EXIT_INPUT_ERROR
from services.function_catalog import CatalogError
from services.hermitian import DomainError, NumericBackendError
from utils.file_utils import MatrixFileError, write_report

logger = logging.getLogger(__name__)

TOOL_NAME = 'opconv'
ENVIRONMENTS = ['development', 'testing', 'production']


class App:
    """Parsed-command dispatcher; run(argv) returns the process exit code"""

    def __init__(self, environment, config, parser):
        self.environment = environment
        self.config = config
        self.parser = parser
        self.error_handlers = []
        self.stdout = sys.stdout

    def errorhandler(self, exception_type):
        def decorator(handler):
            self.error_handlers.append((exception_type, handler))
            return handler
        return decorator

    def handle_exception(self, error):
        for exception_type, handler in self.error_handlers:
            if isinstance(error, exception_type):
                return handler(error)
        raise error

    def run(self, argv=None):
        try:
            args = self.parser.parse_args(argv)
        except SystemExit as e:
            # argparse exits 2 on usage errors and 0 on --help
            return e.code if isinstance(e.code, int) else EXIT_INPUT_ERROR

        try:
            report, exit_code = args.handler(args, self.config)
            write_report({'tool': TOOL_NAME, **report}, args.out, stream=self.stdout)
            return exit_code
        except Exception as e:
            return self.handle_exception(e)


def create_app(environment='development'):
    """
    Application factory for the command-line application

    Args:
        environment (str): Configuration environment ('development', 'production', 'testing')

    Returns:
        App: Configured application instance
    """
    config_class = get_config(environment)
    config_class.validate()

    parser = build_parser(config_class)
    app = App(environment, config_class, parser)

    register_commands(app)
    setup_error_handlers(app)

    logger.debug(f"Application created in {environment} mode")
    return app


def build_parser(config):
    parser = argparse.ArgumentParser(
        prog=TOOL_NAME,
        description='Verify operator convexity inequalities and mine counterexamples'
    )
    parser.add_argument('--env', choices=ENVIRONMENTS, default='development')
    parser.add_argument('--debug', action='store_true', default=config.DEBUG)
    parser.add_argument('--log-file', default=config.LOG_FILE or None)
    parser.add_argument('--version', action='version', version=f"{TOOL_NAME} {config.VERSION}")
    return parser


def register_commands(app):
    """Register every command module as a subcommand"""
    subparsers = app.parser.add_subparsers(dest='command', required=True)
    for module in COMMAND_MODULES:
        module.register(subparsers, app.config)
    logger.debug(f"Registered commands: {', '.join(module.NAME for module in COMMAND_MODULES)}")


def setup_error_handlers(app):
    """Map failures to exit code 2; order matters, the first matching handler wins"""

    @app.errorhandler(MatrixFileError)
    def matrix_file_error(error):
        logger.error(f"❌ Invalid matrix input: {error}")
        return EXIT_INPUT_ERROR

    @app.errorhandler(DomainError)
    def domain_error(error):
        logger.error(f"❌ Domain error: {error}")
        return EXIT_INPUT_ERROR

    @app.errorhandler(CatalogError)
    def catalog_error(error):
        logger.error(f"❌ Unknown function: {error}")
        return EXIT_INPUT_ERROR

    @app.errorhandler(ValueError)
    def bad_parameter(error):
        logger.error(f"❌ Invalid parameter: {error}")
        return EXIT_INPUT_ERROR

    @app.errorhandler(NumericBackendError)
    def backend_error(error):
        logger.error(f"❌ Numerical backend failure: {error}")
        return EXIT_INPUT_ERROR

    @app.errorhandler(OSError)
    def io_error(error):
        logger.error(f"❌ Cannot write report: {error}")
        return EXIT_INPUT_ERROR

    @app.errorhandler(Exception)
    def unexpected_error(error):
        logger.exception(f"❌ Unexpected error: {error}")
        return EXIT_INPUT_ERROR
