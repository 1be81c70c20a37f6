"""
Verify command
Runs one of the seeded verification suites and reports pass/fail counts
"""
import logging

from services.verifier import SUITES, verification_service
from utils.helpers import parse_float_list, parse_name_list

from . import EXIT_PASS, EXIT_VIOLATION, add_dims_flag, add_shared_flags, default_c_grid

logger = logging.getLogger(__name__)

NAME = 'verify'


def register(subparsers, config):
    parser = subparsers.add_parser(NAME, help='run a verification suite over random instances')
    add_shared_flags(parser, config)
    add_dims_flag(parser, config)
    parser.add_argument('--suite', choices=list(SUITES), default='theorem1')
    parser.add_argument('--functions', type=parse_name_list, default=None, help='comma separated catalog names')
    parser.add_argument('--c', dest='c_grid', type=parse_float_list, default=None, help='comma separated weights')
    parser.set_defaults(handler=handle)
    return parser


def handle(args, config):
    """Run the suite; exit 1 when any trial violates its inequality"""
    report = verification_service.configure(config).run(
        suite=args.suite,
        functions=args.functions,
        trials=args.trials,
        seed=args.seed,
        dims=args.dims,
        c_grid=args.c_grid or default_c_grid(config),
        tolerance=args.tol
    )

    if report.all_passed:
        logger.info(f"✅ Suite '{args.suite}' passed")
        return report.to_dict(), EXIT_PASS

    logger.warning(f"❌ Suite '{args.suite}' found violations")
    return report.to_dict(), EXIT_VIOLATION
