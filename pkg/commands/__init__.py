"""
Commands Package

This package contains the subcommand definitions for the operator
convexity toolkit, one module per command.

Commands:
- verify_commands: seeded verification suites
- gap_commands: single-instance gap evaluation from matrix files
- entropy_commands: entropy corollary pipeline for a density pair
- mine_commands: counterexample search
"""
from config import Config
from utils.helpers import parse_dims, parse_float_list

MAX_SEED = 2 ** 64 - 1

EXIT_PASS = 0
EXIT_VIOLATION = 1
EXIT_INPUT_ERROR = 2


def seed_value(text):
    seed = int(text)
    if not 0 <= seed <= MAX_SEED:
        raise ValueError(f"seed must be a 64-bit unsigned integer, got {text}")
    return seed


def add_shared_flags(parser, config):
    """--seed, --trials, --tol and --out, defaulted from the active configuration"""
    parser.add_argument('--seed', type=seed_value, default=config.DEFAULT_SEED)
    parser.add_argument('--trials', type=int, default=config.DEFAULT_TRIALS)
    parser.add_argument('--tol', type=float, default=config.PSD_TOLERANCE)
    parser.add_argument('--out', default=None, help='report path (stdout when omitted)')


def add_dims_flag(parser, config):
    parser.add_argument('--dims', type=parse_dims, default=parse_dims(config.DEFAULT_DIMS), help='range a..b')


def default_c_grid(config=Config):
    return parse_float_list(config.DEFAULT_C_GRID)


from . import entropy_commands, gap_commands, mine_commands, verify_commands  # noqa: E402

COMMAND_MODULES = [verify_commands, gap_commands, entropy_commands, mine_commands]

__all__ = ['COMMAND_MODULES', 'EXIT_PASS', 'EXIT_VIOLATION', 'EXIT_INPUT_ERROR']
