"""
Verification service
Runs the inequality suites over seeded random instances and aggregates
per-function pass/fail counts into a report
"""
import logging
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional

import numpy as np

from config import Config
from services.entropy import (
    chain_gap,
    continuity_check,
    corollary_gap,
    intermediate_bound_gap,
    pinsker_gap,
    quantum_relative_entropy,
)
from services.function_catalog import (
    apply_via_representation,
    bregman_via_representation,
    catalog,
    evaluate_via_representation,
    parse_function_name,
    representation_mass,
)
from services.hermitian import (
    apply_function,
    frechet_derivative,
    inverse,
    psd_certificate,
    second_directional_derivative,
)
from services.inequalities import (
    ConvexityInstance,
    bregman_divergence,
    congruence_reduced_gaps,
    dilation_residuals,
    in_midpoint_band,
    midpoint_from_dilation_check,
    strengthened_ah_gap,
    theorem1_gap,
)
from services.miner import CounterexampleRecord
from services.sampler import (
    SamplerConfig,
    random_density,
    random_hermitian,
    random_positive_definite,
    trial_rng,
)
from utils.helpers import get_current_iso_timestamp, log_performance_metrics, parse_dims, parse_float_list

logger = logging.getLogger(__name__)

OPERATOR_CONVEX_DEFAULTS = ['xlogx', 'neglog', 'resolvent:0.5', 'resolvent:1', 'resolvent:5', 'one_plus_x_log']
REPRESENTATION_POINTS = (0.1, 0.5, 1.0, 2.0, 5.0, 10.0)
AH_SHIFTS = (0.1, 1.0, 10.0)
CONTINUITY_DELTAS = (0.01, 0.05, 0.1)
DERIVATIVE_FLOOR = 0.5


@dataclass
class TrialOutcome:
    index: int
    subject: str
    passed: bool
    value: float
    detail: Dict[str, Any] = field(default_factory=dict)
    witness: Optional[tuple] = None

    def to_dict(self):
        return {'subject': self.subject, 'trial_index': self.index, 'value': self.value, 'passed': self.passed,
                **self.detail}


@dataclass
class VerificationReport:
    suite: str
    seed: int
    trials: int
    tolerance: float
    dims: List[int]
    c_grid: List[float]
    metric: str
    functions: Dict[str, Dict[str, Any]]
    worst_min_eigenvalue: float
    worst_offenders: List[Dict[str, Any]]
    counterexample: Optional[Dict[str, Any]]
    elapsed_seconds: float
    version: str = Config.VERSION

    @property
    def all_passed(self):
        return all(counts['fail'] == 0 for counts in self.functions.values())

    def to_dict(self):
        return {
            'command': 'verify',
            'version': self.version,
            'suite': self.suite,
            'seed': self.seed,
            'trials': self.trials,
            'tolerance': self.tolerance,
            'dims': self.dims,
            'c_grid': self.c_grid,
            'metric': self.metric,
            'functions': self.functions,
            'worst_min_eigenvalue': self.worst_min_eigenvalue,
            'all_passed': self.all_passed,
            'worst_offenders': self.worst_offenders,
            'counterexample': self.counterexample,
            'elapsed_seconds': round(self.elapsed_seconds, 3),
            'timestamp': get_current_iso_timestamp()
        }


@dataclass(frozen=True)
class SuiteContext:
    seed: int
    dims: List[int]
    c_grid: List[float]
    tolerance: float

    def draw(self, index, eigen_floor=None, min_dim=1):
        """Per-trial generator, dimension and weight; independent of evaluation order"""
        rng = trial_rng(self.seed, index)
        dims = [d for d in self.dims if d >= min_dim]
        if not dims:
            raise ValueError(f"dims {self.dims} contain no dimension >= {min_dim}")
        dim = int(rng.choice(dims))
        c = float(rng.choice(self.c_grid))
        cfg = SamplerConfig(seed=self.seed, dim=dim, eigen_floor=eigen_floor or Config.EIGEN_FLOOR,
                            scale=max(Config.SAMPLE_SCALE, eigen_floor or 0.0))
        return rng, cfg, c


def _pair(ctx, index, eigen_floor=None):
    rng, cfg, c = ctx.draw(index, eigen_floor)
    return random_positive_definite(cfg, rng), random_positive_definite(cfg, rng), c, cfg


def _theorem1_trial(ctx, f, index):
    A, B, c, cfg = _pair(ctx, index)
    verdict = psd_certificate(theorem1_gap(ConvexityInstance(A=A, B=B, c=c, f=f)), ctx.tolerance)
    return TrialOutcome(index, f.label, verdict.is_psd, verdict.min_eigenvalue,
                        {'dim': cfg.dim, 'c': c, 'gap_norm': verdict.gap_norm}, witness=(A, B, c))


def _bregman_trial(ctx, f, index):
    A, B, c, cfg = _pair(ctx, index)
    verdict = psd_certificate(bregman_divergence(f, A, B), ctx.tolerance)
    return TrialOutcome(index, f.label, verdict.is_psd, verdict.min_eigenvalue,
                        {'dim': cfg.dim, 'gap_norm': verdict.gap_norm})


def _dilation_trial(ctx, f, index):
    A, B, c, cfg = _pair(ctx, index)
    residuals = dilation_residuals(A, B, c)
    verdict = midpoint_from_dilation_check(A, B, c, f, ctx.tolerance)
    identities_hold = max(residuals.values()) <= 1e-10 * (1.0 + max(A.max_norm(), B.max_norm()))
    return TrialOutcome(index, f.label, identities_hold and verdict.is_psd, verdict.min_eigenvalue,
                        {'dim': cfg.dim, 'c': c, **residuals})


def _ah_trial(ctx, subject, index):
    A, B, c, cfg = _pair(ctx, index)
    verdicts = [psd_certificate(strengthened_ah_gap(A, B), ctx.tolerance)]
    verdicts.extend(psd_certificate(strengthened_ah_gap(A.shift(s), B.shift(s)), ctx.tolerance) for s in AH_SHIFTS)
    _, scalar_gaps = congruence_reduced_gaps(A, B)

    worst = min(v.min_eigenvalue for v in verdicts)
    passed = all(v.is_psd for v in verdicts) and float(np.min(scalar_gaps)) >= -ctx.tolerance
    return TrialOutcome(index, subject, passed, worst,
                        {'dim': cfg.dim, 'min_scalar_gap': float(np.min(scalar_gaps))})


def _entropy_trial(ctx, subject, index):
    rng, cfg, c = ctx.draw(index, min_dim=2)
    rho, sigma = random_density(cfg, rng), random_density(cfg, rng)

    gaps = {'corollary': corollary_gap(rho, sigma, c), 'pinsker': pinsker_gap(rho, sigma)}
    limits = {'corollary': -1e-9, 'pinsker': -1e-12}
    if not in_midpoint_band(c):
        gaps['intermediate'] = intermediate_bound_gap(rho, sigma, c)
        gaps['chain'] = chain_gap(rho, sigma, c)
        limits['intermediate'] = limits['chain'] = -1e-9
    for delta in CONTINUITY_DELTAS:
        gaps[f'continuity_{delta:g}'] = continuity_check(rho, sigma, delta)
        limits[f'continuity_{delta:g}'] = -1e-12

    passed = all(gaps[name] >= limits[name] for name in gaps)
    return TrialOutcome(index, subject, passed, min(gaps.values()), {'dim': cfg.dim, 'c': c, **gaps})


def _petz_trial(ctx, subject, index):
    rng, cfg, _ = ctx.draw(index, min_dim=2)
    rho, sigma = random_density(cfg, rng), random_density(cfg, rng)
    bregman_trace = bregman_divergence(catalog('xlogx'), rho.matrix, sigma.matrix).trace()
    error = abs(bregman_trace - quantum_relative_entropy(rho, sigma))
    return TrialOutcome(index, subject, error <= 1e-9, 1e-9 - error, {'dim': cfg.dim, 'error': error})


def _derivative_trial(ctx, f, index):
    rng, cfg, _ = ctx.draw(index, eigen_floor=DERIVATIVE_FLOOR)
    B = random_positive_definite(cfg, rng)
    H = random_hermitian(SamplerConfig(seed=ctx.seed, dim=cfg.dim), rng)
    norm_b, norm_h = B.spectral_norm(), H.spectral_norm()

    h1 = 1e-5 * (1.0 + norm_b) / (1.0 + norm_h)
    central = (apply_function(f, B + h1 * H) - apply_function(f, B - h1 * H)) * (0.5 / h1)
    ratios = {'frechet': (frechet_derivative(f, B, H) - central).max_norm() / (1e-6 * (1.0 + norm_h))}

    h2 = 1e-4 * (1.0 + norm_b) / (1.0 + norm_h)
    second = second_directional_derivative(f, B, H)
    stencil = (apply_function(f, B + h2 * H) - 2.0 * apply_function(f, B) + apply_function(f, B - h2 * H)) * (1.0 / h2 ** 2)
    ratios['second'] = (second - stencil).max_norm() / (1e-4 * (1.0 + norm_h ** 2))

    if f.name == 'resolvent':
        R = inverse(B.shift(f.params[0])).entries
        identity = 2.0 * R @ H.entries @ R @ H.entries @ R
        ratios['resolvent'] = float(np.max(np.abs(second.entries - identity))) / (1e-9 * (1.0 + np.max(np.abs(identity))))

    passed = all(ratio <= 1.0 for ratio in ratios.values())
    if f.operator_convex:
        passed = passed and psd_certificate(second, ctx.tolerance).is_psd
    return TrialOutcome(index, f.label, passed, 1.0 - max(ratios.values()), {'dim': cfg.dim, **ratios})


def _representation_trial(ctx, f, index):
    rep = f.representation
    if rep is None:
        raise ValueError(f"{f.label} has no integral representation")

    errors = {'scalar': max(abs(evaluate_via_representation(rep, x) - float(f.value(x))) for x in REPRESENTATION_POINTS)}
    A, B, _, cfg = _pair(ctx, index)
    direct = apply_function(f, A)
    errors['matrix'] = (apply_via_representation(rep, A) - direct).max_norm() / (1.0 + direct.max_norm())
    exact = bregman_divergence(f, A, B)
    errors['bregman'] = (bregman_via_representation(rep, A, B) - exact).max_norm() / (1.0 + exact.max_norm())
    mass = representation_mass(rep)

    worst = max(errors.values())
    return TrialOutcome(index, f.label, worst <= 1e-6 and np.isfinite(mass), 1e-6 - worst,
                        {'dim': cfg.dim, 'measure_mass': mass, **errors})


# suite name -> (trial function, metric, per-function?, default subjects)
SUITES = {
    'theorem1': (_theorem1_trial, 'min_eigenvalue', True, OPERATOR_CONVEX_DEFAULTS),
    'bregman': (_bregman_trial, 'min_eigenvalue', True, OPERATOR_CONVEX_DEFAULTS),
    'dilation': (_dilation_trial, 'min_eigenvalue', True, ['resolvent:1', 'xlogx', 'square']),
    'ah': (_ah_trial, 'min_eigenvalue', False, ['strengthened_ah']),
    'entropy': (_entropy_trial, 'min_scalar_gap', False, ['strong_concavity']),
    'petz': (_petz_trial, 'tolerance_margin', False, ['xlogx_trace_identity']),
    'derivatives': (_derivative_trial, 'tolerance_margin', True,
                    OPERATOR_CONVEX_DEFAULTS + ['square', 'g_counter']),
    'representation': (_representation_trial, 'tolerance_margin', True,
                       ['square', 'xlogx', 'resolvent:1', 'one_plus_x_log'])
}


class VerificationService:
    """Runs one verification suite and aggregates its trials"""

    def __init__(self, max_workers=None, worst_offenders=None):
        self.max_workers = max_workers or Config.MAX_WORKERS
        self.worst_offenders = worst_offenders or Config.WORST_OFFENDERS

    def configure(self, config):
        """Adopt the worker and report limits of the active environment"""
        self.max_workers = config.MAX_WORKERS
        self.worst_offenders = config.WORST_OFFENDERS
        return self

    def subjects(self, suite, functions=None):
        if suite not in SUITES:
            raise ValueError(f"Unknown suite '{suite}'. Available: {', '.join(SUITES)}")
        _, _, per_function, defaults = SUITES[suite]
        if not per_function:
            return defaults
        return [parse_function_name(name) for name in (functions or defaults)]

    def run(self, suite, functions=None, trials=None, seed=None, dims=None, c_grid=None, tolerance=None):
        trials = Config.DEFAULT_TRIALS if trials is None else trials
        seed = Config.DEFAULT_SEED if seed is None else seed
        tolerance = Config.PSD_TOLERANCE if tolerance is None else tolerance
        dims = list(dims or parse_dims(Config.DEFAULT_DIMS))
        c_grid = list(c_grid or parse_float_list(Config.DEFAULT_C_GRID))

        if trials < 1:
            raise ValueError(f"trials must be >= 1, got {trials}")
        if tolerance < 0:
            raise ValueError(f"tolerance must be >= 0, got {tolerance}")
        if any(not 0.0 < c < 1.0 for c in c_grid):
            raise ValueError(f"c values must lie in (0, 1), got {c_grid}")
        if any(d < 1 for d in dims):
            raise ValueError(f"dims must be positive, got {dims}")

        subjects = self.subjects(suite, functions)
        trial, metric, _, _ = SUITES[suite]
        ctx = SuiteContext(seed=seed, dims=dims, c_grid=c_grid, tolerance=tolerance)
        start_time = time.time()
        logger.info(f"🔍 Running suite '{suite}' with {trials} trials per subject, seed {seed}")

        jobs = [(subject, index) for subject in subjects for index in range(trials)]
        with ThreadPoolExecutor(max_workers=self.max_workers) as executor:
            outcomes = list(executor.map(lambda job: trial(ctx, job[0], job[1]), jobs))

        log_performance_metrics(f"suite {suite}", start_time, len(outcomes))
        return self._aggregate(suite, ctx, trials, metric, outcomes, time.time() - start_time)

    def _aggregate(self, suite, ctx, trials, metric, outcomes, elapsed):
        functions = {}
        for outcome in outcomes:
            counts = functions.setdefault(outcome.subject, {'pass': 0, 'fail': 0, 'worst_min_eigenvalue': None})
            counts['pass' if outcome.passed else 'fail'] += 1
            if counts['worst_min_eigenvalue'] is None or outcome.value < counts['worst_min_eigenvalue']:
                counts['worst_min_eigenvalue'] = outcome.value

        for subject, counts in functions.items():
            marker = '✅' if counts['fail'] == 0 else '❌'
            logger.info(f"{marker} {subject}: {counts['pass']} passed, {counts['fail']} failed, "
                        f"worst {counts['worst_min_eigenvalue']:.3e}")

        ranked = sorted(outcomes, key=lambda o: (o.value, o.index, o.subject))
        counterexample = None
        failures = [o for o in ranked if not o.passed and o.witness is not None]
        if failures:
            worst = failures[0]
            A, B, c = worst.witness
            counterexample = CounterexampleRecord(
                A=A, B=B, c=c,
                function_name=worst.subject,
                min_gap_eigenvalue=worst.value,
                trial_index=worst.index,
                source='verify_trial'
            ).to_dict()

        return VerificationReport(
            suite=suite,
            seed=ctx.seed,
            trials=trials,
            tolerance=ctx.tolerance,
            dims=ctx.dims,
            c_grid=ctx.c_grid,
            metric=metric,
            functions=functions,
            worst_min_eigenvalue=ranked[0].value,
            worst_offenders=[o.to_dict() for o in ranked[:self.worst_offenders]],
            counterexample=counterexample,
            elapsed_seconds=elapsed
        )


# Global verification service instance
verification_service = VerificationService()
