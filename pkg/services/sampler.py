"""
Sampler service
Seeded random Hermitian, positive definite, density and unitary matrices
"""
from dataclasses import dataclass

import numpy as np
from scipy.stats import unitary_group

from config import Config
from services.entropy import DensityMatrix
from services.hermitian import HermitianMatrix

MAX_SEED = 2 ** 64 - 1


@dataclass(frozen=True)
class SamplerConfig:
    seed: int
    dim: int
    eigen_floor: float = Config.EIGEN_FLOOR
    scale: float = Config.SAMPLE_SCALE

    def __post_init__(self):
        if not 0 <= self.seed <= MAX_SEED:
            raise ValueError(f"seed must be a 64-bit unsigned integer, got {self.seed}")
        if self.dim < 1:
            raise ValueError(f"dim must be >= 1, got {self.dim}")
        if not 0 < self.eigen_floor <= self.scale:
            raise ValueError(f"need 0 < eigen_floor <= scale, got {self.eigen_floor} and {self.scale}")


def trial_rng(seed, index):
    """Counter-based generator for one trial: independent of evaluation order"""
    sequence = np.random.SeedSequence(entropy=int(seed), spawn_key=(int(index),))
    return np.random.Generator(np.random.Philox(sequence))


def _default_rng(cfg):
    return np.random.Generator(np.random.Philox(np.random.SeedSequence([int(cfg.seed), int(cfg.dim)])))


def _ginibre(rng, dim):
    return (rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))) / np.sqrt(2.0)


def random_hermitian(cfg, rng=None):
    """Symmetrized standard complex Gaussian, scaled"""
    if rng is None:
        rng = _default_rng(cfg)
    return HermitianMatrix(cfg.scale * _ginibre(rng, cfg.dim))


def random_positive_definite(cfg, rng=None):
    """scale * G G^dagger / dim + eigen_floor * I"""
    if rng is None:
        rng = _default_rng(cfg)
    G = _ginibre(rng, cfg.dim)
    wishart = (G @ G.conj().T) / cfg.dim
    return HermitianMatrix(cfg.scale * wishart + cfg.eigen_floor * np.eye(cfg.dim))


def random_density(cfg, rng=None):
    positive = random_positive_definite(cfg, rng)
    return DensityMatrix(positive * (1.0 / positive.trace()))


def random_unitary(cfg, rng=None):
    """Haar-distributed unitary array"""
    if rng is None:
        rng = _default_rng(cfg)
    if cfg.dim == 1:
        return np.exp(2j * np.pi * rng.random()).reshape(1, 1)
    return unitary_group.rvs(cfg.dim, random_state=rng)
