import math

import numpy as np
import pytest
from scipy.stats import entropy as classical_entropy

from conftest import SEED
from services.entropy import (
    DensityMatrix,
    chain_gap,
    concavity_gap,
    continuity_check,
    corollary_gap,
    density_from_matrix,
    fannes_delta,
    intermediate_bound_gap,
    midpoint_lower_bound,
    pinsker_gap,
    quantum_relative_entropy,
    trace_distance,
    von_neumann_entropy,
)
from services.function_catalog import catalog
from services.hermitian import HermitianMatrix
from services.inequalities import bregman_divergence
from services.sampler import SamplerConfig, random_density, trial_rng

PURE_UP = DensityMatrix.diagonal([1.0, 0.0])
PURE_DOWN = DensityMatrix.diagonal([0.0, 1.0])
MAXIMALLY_MIXED = DensityMatrix.diagonal([0.5, 0.5])
BIASED = DensityMatrix.diagonal([0.75, 0.25])
DELTAS = [0.01, 0.05, 0.1]
C_GRID = [0.1, 0.25, 0.4, 0.5, 0.6, 0.75, 0.9]


def density_pairs(count, dims=(2, 3, 4)):
    pairs = []
    for index in range(count):
        rng = trial_rng(SEED, index)
        cfg = SamplerConfig(seed=SEED, dim=dims[index % len(dims)])
        pairs.append((random_density(cfg, rng), random_density(cfg, rng)))
    return pairs


@pytest.mark.parametrize("rho, expected", [
    (PURE_UP, 0.0),
    (MAXIMALLY_MIXED, math.log(2.0)),
    (DensityMatrix.diagonal([0.25] * 4), math.log(4.0)),
])
def test_von_neumann_entropy(rho, expected):
    assert von_neumann_entropy(rho) == pytest.approx(expected, abs=1e-12)


def test_relative_entropy_examples():
    assert quantum_relative_entropy(BIASED, BIASED) == pytest.approx(0.0, abs=1e-12)
    assert quantum_relative_entropy(PURE_UP, MAXIMALLY_MIXED) == pytest.approx(math.log(2.0), abs=1e-12)
    assert quantum_relative_entropy(MAXIMALLY_MIXED, PURE_UP) == math.inf


def test_relative_entropy_dimension_mismatch():
    with pytest.raises(ValueError):
        quantum_relative_entropy(PURE_UP, DensityMatrix.diagonal([1.0, 0.0, 0.0]))


@pytest.mark.parametrize("rho, sigma, expected", [
    (BIASED, BIASED, 0.0),
    (PURE_UP, PURE_DOWN, 2.0),
    (BIASED, MAXIMALLY_MIXED, 0.5),
])
def test_trace_distance(rho, sigma, expected):
    assert trace_distance(rho, sigma) == pytest.approx(expected, abs=1e-12)


def test_concavity_gap_examples():
    assert concavity_gap(PURE_UP, PURE_DOWN, 0.0) == pytest.approx(0.0, abs=1e-12)
    assert concavity_gap(PURE_UP, PURE_DOWN, 0.5) == pytest.approx(math.log(2.0), abs=1e-12)
    for c in C_GRID:
        assert concavity_gap(BIASED, BIASED, c) == pytest.approx(0.0, abs=1e-12)


def test_corollary_gap_examples():
    assert corollary_gap(BIASED, BIASED, 0.3) == pytest.approx(0.0, abs=1e-12)
    assert corollary_gap(PURE_UP, PURE_DOWN, 0.5) == pytest.approx(math.log(2.0) - 0.5, abs=1e-9)
    assert corollary_gap(PURE_UP, PURE_DOWN, 0.0) == pytest.approx(0.0, abs=1e-12)


def test_intermediate_bound_commuting_example():
    assert intermediate_bound_gap(PURE_UP, PURE_DOWN, 0.25) == pytest.approx(0.150355, abs=1e-6)
    assert intermediate_bound_gap(BIASED, BIASED, 0.25) == pytest.approx(0.0, abs=1e-12)


@pytest.mark.parametrize("function", [intermediate_bound_gap, chain_gap])
def test_midpoint_band_is_excluded(function):
    with pytest.raises(ValueError):
        function(PURE_UP, PURE_DOWN, 0.5)


def test_pinsker_gap_examples():
    assert pinsker_gap(BIASED, BIASED) == pytest.approx(0.0, abs=1e-12)
    assert pinsker_gap(BIASED, MAXIMALLY_MIXED) == pytest.approx(0.005812, abs=1e-6)
    assert pinsker_gap(MAXIMALLY_MIXED, PURE_UP) == math.inf


@pytest.mark.parametrize("delta, epsilon, d, expected", [
    (0.1, 1.0, 2, 0.438202),
    (0.1, 0.0, 2, 0.2 * math.log(2.0)),
    (1e-9, 1.0, 2, 0.0),
])
def test_fannes_delta(delta, epsilon, d, expected):
    assert fannes_delta(delta, epsilon, d) == pytest.approx(expected, abs=1e-6)


@pytest.mark.parametrize("delta, epsilon, d", [(0.0, 1.0, 2), (0.5, 1.0, 2), (0.1, 2.5, 2), (0.1, 1.0, 1), (0.1, 1.0, 2.5)])
def test_fannes_delta_rejects_invalid_parameters(delta, epsilon, d):
    with pytest.raises(ValueError):
        fannes_delta(delta, epsilon, d)


def test_continuity_check_examples():
    assert continuity_check(BIASED, BIASED, 0.1) == pytest.approx(fannes_delta(0.1, 0.0, 2), abs=1e-12)
    # Delta(0.1, 2, 2) = 0.599146 against log 2 - H(0.6) = 0.020135
    assert continuity_check(PURE_UP, PURE_DOWN, 0.1) == pytest.approx(0.599146 - 0.020135, abs=2e-6)


def test_density_invariants():
    with pytest.raises(ValueError):
        density_from_matrix(HermitianMatrix.diagonal([0.5, 0.6]))
    with pytest.raises(ValueError):
        density_from_matrix(HermitianMatrix.diagonal([1.5, -0.5]))
    assert density_from_matrix(HermitianMatrix.diagonal([0.3, 0.7])).dim == 2


def test_commuting_pairs_match_classical_quantities():
    rng = np.random.default_rng(SEED)
    for _ in range(20):
        p, q = rng.dirichlet(np.ones(4)), rng.dirichlet(np.ones(4))
        rho, sigma = DensityMatrix.diagonal(p), DensityMatrix.diagonal(q)

        assert von_neumann_entropy(rho) == pytest.approx(classical_entropy(p), abs=1e-10)
        assert quantum_relative_entropy(rho, sigma) == pytest.approx(classical_entropy(p, q), abs=1e-10)
        assert trace_distance(rho, sigma) == pytest.approx(np.sum(np.abs(p - q)), abs=1e-10)


def test_relative_entropy_is_trace_of_xlogx_bregman():
    f = catalog('xlogx')
    for rho, sigma in density_pairs(30):
        bregman_trace = bregman_divergence(f, rho.matrix, sigma.matrix).trace()
        assert bregman_trace == pytest.approx(quantum_relative_entropy(rho, sigma), abs=1e-9)


def test_entropy_bounds_on_random_pairs():
    for index, (rho, sigma) in enumerate(density_pairs(30)):
        c = C_GRID[index % len(C_GRID)]
        assert corollary_gap(rho, sigma, c) >= -1e-9
        assert pinsker_gap(rho, sigma) >= -1e-12
        if c != 0.5:
            assert intermediate_bound_gap(rho, sigma, c) >= -1e-9
            assert chain_gap(rho, sigma, c) >= -1e-9
        for delta in DELTAS:
            assert continuity_check(rho, sigma, delta) >= -1e-12
            assert midpoint_lower_bound(rho, sigma, delta) <= concavity_gap(rho, sigma, 0.5) + 1e-12


def test_single_state_continuity():
    rho = DensityMatrix.diagonal([1.0])
    assert continuity_check(rho, rho, 0.1) == 0.0
    assert midpoint_lower_bound(rho, rho, 0.1) == 0.0
    with pytest.raises(ValueError):
        continuity_check(rho, rho, 0.5)
