"""
Gap command
Evaluates the modulus of convexity, its Bregman lower bound and their gap for
one (A, B, c, f) instance read from matrix files
"""
import logging

from config import Config
from services.function_catalog import parse_function_name
from services.hermitian import psd_certificate
from services.inequalities import (
    ConvexityInstance,
    in_midpoint_band,
    modulus_of_convexity,
    theorem1_rhs,
)
from utils.file_utils import matrix_to_document, read_matrix_file

from . import EXIT_PASS, EXIT_VIOLATION, add_shared_flags

logger = logging.getLogger(__name__)

NAME = 'gap'


def register(subparsers, config):
    parser = subparsers.add_parser(NAME, help='evaluate the bound for one instance')
    add_shared_flags(parser, config)
    parser.add_argument('--a', dest='a_file', required=True, help='matrix document for A')
    parser.add_argument('--b', dest='b_file', required=True, help='matrix document for B')
    parser.add_argument('--c', type=float, default=0.5)
    parser.add_argument('--function', default='xlogx')
    parser.set_defaults(handler=handle)
    return parser


def handle(args, config):
    f = parse_function_name(args.function)
    A = read_matrix_file(args.a_file)
    B = read_matrix_file(args.b_file)
    instance = ConvexityInstance(A=A, B=B, c=args.c, f=f)

    modulus = modulus_of_convexity(instance)
    rhs = theorem1_rhs(instance)
    verdict = psd_certificate(modulus - rhs, args.tol)
    logger.info(f"{'✅' if verdict.is_psd else '❌'} gap min eigenvalue {verdict.min_eigenvalue:.6e} for {f.label}")

    report = {
        'command': NAME,
        'version': Config.VERSION,
        'seed': args.seed,
        'function': f.label,
        'operator_convex': f.operator_convex,
        'c': args.c,
        'branch': 'midpoint' if in_midpoint_band(args.c) else 'bregman',
        'dim': A.dim,
        'modulus': matrix_to_document(modulus),
        'rhs': matrix_to_document(rhs),
        **verdict.to_dict()
    }
    return report, EXIT_PASS if verdict.is_psd else EXIT_VIOLATION
