"""
Mine command
Searches for a violation of the Bregman lower bound for one function
"""
import logging

from config import Config
from services.function_catalog import parse_function_name
from services.inequalities import in_midpoint_band
from services.miner import MAX_DIM, counterexample_miner
from utils.helpers import parse_dims, parse_float_list

from . import EXIT_PASS, EXIT_VIOLATION, add_shared_flags, default_c_grid

logger = logging.getLogger(__name__)

NAME = 'mine'


def register(subparsers, config):
    parser = subparsers.add_parser(NAME, help='search for a counterexample')
    add_shared_flags(parser, config)
    parser.add_argument('--function', required=True)
    parser.add_argument('--dims', default=None, help=f'range a..b within 1..{MAX_DIM}')
    parser.add_argument('--c', dest='c_grid', type=parse_float_list, default=None,
                        help='comma separated weights outside the midpoint band')
    parser.set_defaults(handler=handle)
    return parser


def handle(args, config):
    f = parse_function_name(args.function)
    dims = parse_dims(args.dims) if args.dims else [d for d in parse_dims(config.DEFAULT_DIMS) if d <= MAX_DIM]
    c_grid = args.c_grid or [c for c in default_c_grid(config) if not in_midpoint_band(c)]

    result = counterexample_miner.configure(config).mine(f, args.trials, args.seed, dims, c_grid)
    report = {
        'command': NAME,
        'version': Config.VERSION,
        'seed': args.seed,
        'function': f.label,
        'operator_convex': f.operator_convex,
        'trials': args.trials,
        'dims': dims,
        'c_grid': c_grid,
        'instances_evaluated': result.instances_evaluated,
        'violation_found': result.record is not None,
        'counterexample': None
    }

    if result.record is None:
        return report, EXIT_PASS

    record = result.record.to_dict()
    record['recomputed_min_gap_eigenvalue'] = result.record.recompute()
    report['counterexample'] = record
    return report, EXIT_VIOLATION
