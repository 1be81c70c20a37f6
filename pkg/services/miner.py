"""
Counterexample miner
Randomized search for instances where the Bregman lower bound on the modulus of
convexity fails, starting with a scalar grid sweep and refining the worst hit
"""
import logging
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Optional

import numpy as np

from config import Config
from services.function_catalog import parse_function_name
from services.hermitian import HermitianMatrix
from services.inequalities import ConvexityInstance, in_midpoint_band, theorem1_gap
from services.sampler import SamplerConfig, random_positive_definite, trial_rng
from utils.file_utils import matrix_to_document
from utils.helpers import chunk_list, log_performance_metrics

logger = logging.getLogger(__name__)

SCALAR_GRID = tuple(float(v) for v in np.geomspace(0.1, 10.0, 13))
MAX_DIM = 8


@dataclass(frozen=True)
class CounterexampleRecord:
    """A concrete (A, B, c, f) instance whose gap has a negative eigenvalue"""

    A: HermitianMatrix
    B: HermitianMatrix
    c: float
    function_name: str
    min_gap_eigenvalue: float
    trial_index: int
    source: str = 'scalar_sweep'

    def recompute(self):
        f = parse_function_name(self.function_name)
        return evaluate_gap(f, self.A, self.B, self.c)[0]

    def to_dict(self):
        return {
            'function': self.function_name,
            'c': self.c,
            'min_gap_eigenvalue': self.min_gap_eigenvalue,
            'trial_index': self.trial_index,
            'source': self.source,
            'A': matrix_to_document(self.A),
            'B': matrix_to_document(self.B)
        }


@dataclass(frozen=True)
class MiningResult:
    function_name: str
    record: Optional[CounterexampleRecord]
    instances_evaluated: int


def evaluate_gap(f, A, B, c):
    """Smallest and largest absolute eigenvalue of the gap, or None for an invalid instance"""
    try:
        gap = theorem1_gap(ConvexityInstance(A=A, B=B, c=c, f=f))
    except ValueError:
        return None
    eigenvalues = gap.spectrum.eigenvalues
    return float(eigenvalues[0]), float(np.max(np.abs(eigenvalues)))


def is_violation(min_eigenvalue, gap_norm):
    return min_eigenvalue < -Config.VIOLATION_THRESHOLD * (1.0 + gap_norm)


def validate_search_grid(trials, dims, c_grid):
    if trials < 1:
        raise ValueError(f"trials must be >= 1, got {trials}")
    if not dims or any(d < 1 or d > MAX_DIM for d in dims):
        raise ValueError(f"dims must be a non-empty subset of [1, {MAX_DIM}], got {list(dims)}")
    if not c_grid:
        raise ValueError("c grid must not be empty")
    for c in c_grid:
        if not 0.0 < c < 1.0 or in_midpoint_band(c):
            raise ValueError(f"c = {c} must lie in (0, 1) outside the midpoint band")


# Hermitian matrices as real vectors: diagonal, then upper-triangle real and imaginary parts
def _pack(H):
    rows, cols = np.triu_indices(H.dim, k=1)
    upper = H.entries[rows, cols]
    return np.concatenate([np.real(np.diag(H.entries)), np.real(upper), np.imag(upper)])


def _unpack(vector, dim):
    rows, cols = np.triu_indices(dim, k=1)
    count = len(rows)
    entries = np.diag(vector[:dim]).astype(complex)
    entries[rows, cols] = vector[dim:dim + count] + 1j * vector[dim + count:]
    entries[cols, rows] = np.conj(entries[rows, cols])
    return HermitianMatrix(entries)


class CounterexampleMiner:
    """Searches for violations of the Bregman lower bound"""

    def __init__(self, max_workers=None, refine_sweeps=None):
        self.max_workers = max_workers or Config.MAX_WORKERS
        self.refine_sweeps = Config.REFINE_SWEEPS if refine_sweeps is None else refine_sweeps

    def configure(self, config):
        self.max_workers = config.MAX_WORKERS
        self.refine_sweeps = config.REFINE_SWEEPS
        return self

    def scalar_sweep(self, f, c_grid):
        """All (a, b, c) with a != b on the scalar grid, in a fixed order"""
        hits = []
        index = 0
        for a in SCALAR_GRID:
            for b in SCALAR_GRID:
                if a == b:
                    continue
                for c in c_grid:
                    outcome = evaluate_gap(f, HermitianMatrix.scalar(a), HermitianMatrix.scalar(b), c)
                    if outcome is not None and is_violation(*outcome):
                        hits.append((outcome[0], index, a, b, c))
                    index += 1
        return hits, index

    def _matrix_trial(self, f, seed, index, offset, dims, c_grid):
        rng = trial_rng(seed, index)
        dim = int(rng.choice(dims))
        c = float(rng.choice(c_grid))
        cfg = SamplerConfig(seed=seed, dim=dim)
        A = random_positive_definite(cfg, rng)
        B = random_positive_definite(cfg, rng)

        outcome = evaluate_gap(f, A, B, c)
        if outcome is None or not is_violation(*outcome):
            return None
        return outcome[0], offset + index, A, B, c

    def matrix_trials(self, f, trials, seed, dims, c_grid, offset):
        def run_chunk(indices):
            return [self._matrix_trial(f, seed, i, offset, dims, c_grid) for i in indices]

        chunks = chunk_list(list(range(trials)), max(1, trials // (4 * self.max_workers)))
        with ThreadPoolExecutor(max_workers=self.max_workers) as executor:
            results = [hit for chunk in executor.map(run_chunk, chunks) for hit in chunk if hit is not None]
        return results

    def refine(self, f, A, B, c):
        """Coordinate descent on (A entries, B entries, c) with step halving"""
        dim = A.dim
        vector = np.concatenate([_pack(A), _pack(B), [c]])
        best = evaluate_gap(f, A, B, c)[0]

        steps = np.full(vector.shape, 0.1 * (1.0 + max(A.max_norm(), B.max_norm())))
        steps[-1] = 0.05
        size = dim * dim

        for _ in range(self.refine_sweeps):
            for k in range(len(vector)):
                for direction in (1.0, -1.0):
                    candidate = vector.copy()
                    candidate[k] += direction * steps[k]
                    value = self._candidate_value(f, candidate, dim, size)
                    if value is not None and value < best:
                        vector, best = candidate, value
                        break
            steps *= 0.5

        return _unpack(vector[:size], dim), _unpack(vector[size:2 * size], dim), float(vector[-1]), best

    def _candidate_value(self, f, vector, dim, size):
        c = float(vector[-1])
        if not 0.0 < c < 1.0 or in_midpoint_band(c):
            return None
        A, B = _unpack(vector[:size], dim), _unpack(vector[size:2 * size], dim)
        if min(A.spectrum.eigenvalues[0], B.spectrum.eigenvalues[0]) < Config.EIGEN_FLOOR:
            return None
        outcome = evaluate_gap(f, A, B, c)
        return None if outcome is None else outcome[0]

    def mine(self, f, trials, seed, dims, c_grid):
        """Run the scalar sweep and the seeded matrix trials, then refine the worst violation"""
        validate_search_grid(trials, dims, c_grid)
        start_time = time.time()
        logger.info(f"🔍 Mining {f.label}: {trials} matrix trials, dims {list(dims)}, c grid {list(c_grid)}")

        scalar_hits, sweep_size = self.scalar_sweep(f, c_grid)
        candidates = [(value, index, HermitianMatrix.scalar(a), HermitianMatrix.scalar(b), c, 'scalar_sweep')
                      for value, index, a, b, c in scalar_hits]
        candidates.extend(
            (value, index, A, B, c, 'matrix_trial')
            for value, index, A, B, c in self.matrix_trials(f, trials, seed, dims, c_grid, sweep_size)
        )

        evaluated = sweep_size + trials
        log_performance_metrics(f"mining {f.label}", start_time, evaluated, violations=len(candidates))

        if not candidates:
            logger.info(f"✅ No violation found for {f.label} in {evaluated} instances")
            return MiningResult(function_name=f.label, record=None, instances_evaluated=evaluated)

        value, index, A, B, c, source = min(candidates, key=lambda hit: (hit[0], hit[1]))
        logger.info(f"❌ Violation for {f.label} at instance {index} ({source}): min eigenvalue {value:.6e}")

        A, B, c, value = self.refine(f, A, B, c)
        logger.info(f"🔧 Refined violation to min eigenvalue {value:.6e} at c = {c:.6g}")

        record = CounterexampleRecord(
            A=A, B=B, c=c,
            function_name=f.label,
            min_gap_eigenvalue=value,
            trial_index=index,
            source=source
        )
        return MiningResult(function_name=f.label, record=record, instances_evaluated=evaluated)


def mine_counterexample(f, trials, seed, dims, c_grid):
    """Most negative refined violation, or None when every instance satisfies the bound"""
    return counterexample_miner.mine(f, trials, seed, dims, c_grid).record


# Global miner instance
counterexample_miner = CounterexampleMiner()
