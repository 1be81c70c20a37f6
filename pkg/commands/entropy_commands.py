"""
Entropy command
Runs the strengthened entropy concavity pipeline for one density pair
"""
import logging

from config import Config
from services.entropy import (
    chain_gap,
    concavity_gap,
    continuity_check,
    corollary_gap,
    density_from_matrix,
    intermediate_bound_gap,
    midpoint_lower_bound,
    pinsker_gap,
    trace_distance,
    von_neumann_entropy,
)
from services.inequalities import in_midpoint_band
from utils.file_utils import MatrixFileError, read_matrix_file

from . import EXIT_PASS, EXIT_VIOLATION, add_shared_flags

logger = logging.getLogger(__name__)

NAME = 'entropy'

# gap name -> smallest accepted value
GAP_LIMITS = {
    'corollary_gap': -1e-9,
    'pinsker_gap': -1e-12,
    'intermediate_gap': -1e-9,
    'chain_gap': -1e-9,
    'continuity_gap': -1e-12
}


def register(subparsers, config):
    parser = subparsers.add_parser(NAME, help='entropy concavity bounds for a density pair')
    add_shared_flags(parser, config)
    parser.add_argument('--rho', required=True, help='density matrix document')
    parser.add_argument('--sigma', required=True, help='density matrix document')
    parser.add_argument('--c', type=float, default=0.5)
    parser.add_argument('--delta', type=float, default=0.05, help='continuity offset from c = 1/2')
    parser.set_defaults(handler=handle)
    return parser


def _load_density(filepath):
    matrix = read_matrix_file(filepath)
    try:
        return density_from_matrix(matrix)
    except ValueError as e:
        raise MatrixFileError(f"{filepath}: {e}") from e


def handle(args, config):
    rho = _load_density(args.rho)
    sigma = _load_density(args.sigma)

    report = {
        'command': NAME,
        'version': Config.VERSION,
        'seed': args.seed,
        'dim': rho.dim,
        'c': args.c,
        'entropy_rho': von_neumann_entropy(rho),
        'entropy_sigma': von_neumann_entropy(sigma),
        'concavity_gap': concavity_gap(rho, sigma, args.c),
        'trace_distance': trace_distance(rho, sigma),
        'corollary_gap': corollary_gap(rho, sigma, args.c),
        'pinsker_gap': pinsker_gap(rho, sigma)
    }

    if 0.0 < args.c < 1.0 and not in_midpoint_band(args.c):
        report['intermediate_gap'] = intermediate_bound_gap(rho, sigma, args.c)
        report['chain_gap'] = chain_gap(rho, sigma, args.c)

    report['delta'] = args.delta
    report['continuity_gap'] = continuity_check(rho, sigma, args.delta)
    report['midpoint_lower_bound'] = midpoint_lower_bound(rho, sigma, args.delta)

    violated = [name for name, limit in GAP_LIMITS.items() if name in report and report[name] < limit]
    report['violations'] = violated

    if violated:
        logger.warning(f"❌ Entropy bounds violated: {', '.join(violated)}")
        return report, EXIT_VIOLATION

    logger.info("✅ Entropy bounds hold")
    return report, EXIT_PASS
