"""
Entropy service
Von Neumann entropy, relative entropy, trace distance and the strengthened
concavity bounds with their Pinsker and Fannes links (natural log throughout)
"""
import logging
import math
from dataclasses import dataclass

import numpy as np
from scipy.special import entr

from config import Config
from services.hermitian import HermitianMatrix
from services.inequalities import in_midpoint_band

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class DensityMatrix:
    """PSD Hermitian matrix of unit trace"""

    matrix: HermitianMatrix

    def __post_init__(self):
        tolerance = Config.DENSITY_TOLERANCE
        smallest = float(self.matrix.spectrum.eigenvalues[0])
        if smallest < -tolerance:
            raise ValueError(f"Density matrix is not PSD: smallest eigenvalue {smallest:.3e}")
        trace = self.matrix.trace()
        if abs(trace - 1.0) > tolerance:
            raise ValueError(f"Density matrix must have unit trace, got {trace:.12g}")

    @classmethod
    def diagonal(cls, probabilities):
        return cls(HermitianMatrix.diagonal(probabilities))

    @property
    def dim(self):
        return self.matrix.dim

    def probabilities(self):
        """Eigenvalues clipped onto [0, 1]"""
        return np.clip(self.matrix.spectrum.eigenvalues, 0.0, 1.0)


def density_from_matrix(H):
    return DensityMatrix(H)


def _entropy_of(eigenvalues):
    return float(np.sum(entr(np.clip(eigenvalues, 0.0, None))))


def _mix(rho, sigma, c):
    return c * rho.matrix + (1.0 - c) * sigma.matrix


def _check_pair(rho, sigma):
    if rho.dim != sigma.dim:
        raise ValueError(f"Density matrices differ in dimension: {rho.dim} vs {sigma.dim}")


def von_neumann_entropy(rho):
    """S(rho) = -Tr rho log rho, with 0 log 0 = 0"""
    return _entropy_of(rho.matrix.spectrum.eigenvalues)


def _relative_entropy(rho_matrix, sigma_matrix):
    sigma_spectrum = sigma_matrix.spectrum
    weights = np.real(np.diag(sigma_spectrum.to_eigenbasis(rho_matrix)))
    sigma_values = sigma_spectrum.eigenvalues

    unsupported = sigma_values < Config.SUPPORT_FLOOR_SIGMA
    if np.any(unsupported & (weights > Config.SUPPORT_FLOOR_RHO)):
        return math.inf

    cross = float(np.sum(weights[~unsupported] * np.log(sigma_values[~unsupported])))
    return -_entropy_of(rho_matrix.spectrum.eigenvalues) - cross


def quantum_relative_entropy(rho, sigma):
    """D(rho || sigma) = Tr rho (log rho - log sigma); +inf outside the support of sigma"""
    _check_pair(rho, sigma)
    return _relative_entropy(rho.matrix, sigma.matrix)


def trace_distance(rho, sigma):
    """||rho - sigma||_1, the sum of absolute eigenvalues of the difference"""
    _check_pair(rho, sigma)
    return float(np.sum(np.abs((rho.matrix - sigma.matrix).spectrum.eigenvalues)))


def concavity_gap(rho, sigma, c):
    """S(c rho + (1-c) sigma) - c S(rho) - (1-c) S(sigma)"""
    _check_pair(rho, sigma)
    if not 0.0 <= c <= 1.0:
        raise ValueError(f"c must lie in [0, 1], got {c}")
    mixed = _entropy_of(_mix(rho, sigma, c).spectrum.eigenvalues)
    return mixed - c * von_neumann_entropy(rho) - (1.0 - c) * von_neumann_entropy(sigma)


def corollary_gap(rho, sigma, c):
    distance = trace_distance(rho, sigma)
    return concavity_gap(rho, sigma, c) - 0.5 * c * (1.0 - c) * distance ** 2


def _swapped_relative_entropy(rho, sigma, c):
    # D(c sigma + (1-c) rho || c rho + (1-c) sigma)
    return _relative_entropy(_mix(sigma, rho, c), _mix(rho, sigma, c))


def _check_off_midpoint(c):
    if not 0.0 < c < 1.0:
        raise ValueError(f"c must lie in (0, 1), got {c}")
    if in_midpoint_band(c):
        raise ValueError(f"c = {c} is inside the excluded midpoint band |c - 1/2| <= {Config.BRANCH_THRESHOLD:g}")


def intermediate_bound_gap(rho, sigma, c):
    """S(c) minus the relative entropy bound between the swapped mixtures"""
    _check_pair(rho, sigma)
    _check_off_midpoint(c)
    factor = c * (1.0 - c) / (1.0 - 2.0 * c) ** 2
    return concavity_gap(rho, sigma, c) - factor * _swapped_relative_entropy(rho, sigma, c)


def chain_gap(rho, sigma, c):
    """Pinsker link between the relative entropy bound and the trace distance bound"""
    _check_pair(rho, sigma)
    _check_off_midpoint(c)
    factor = c * (1.0 - c) / (1.0 - 2.0 * c) ** 2
    return factor * _swapped_relative_entropy(rho, sigma, c) - 0.5 * c * (1.0 - c) * trace_distance(rho, sigma) ** 2


def pinsker_gap(rho, sigma):
    return quantum_relative_entropy(rho, sigma) - 0.5 * trace_distance(rho, sigma) ** 2


def _check_delta(delta):
    if not 0.0 < delta < 0.5:
        raise ValueError(f"delta must lie in (0, 1/2), got {delta}")


def fannes_delta(delta, epsilon, d):
    """eps delta (log d - log(eps delta)) + 2 delta log d"""
    _check_delta(delta)
    if not 0.0 <= epsilon <= 2.0:
        raise ValueError(f"epsilon must lie in [0, 2], got {epsilon}")
    if int(d) != d or d < 2:
        raise ValueError(f"dimension must be an integer >= 2, got {d}")

    product = epsilon * delta
    if product >= 1.0:
        raise ValueError(f"epsilon * delta must be < 1, got {product}")

    log_d = math.log(d)
    spread = product * (log_d - math.log(product)) if product > 0 else 0.0
    return spread + 2.0 * delta * log_d


def continuity_check(rho, sigma, delta):
    """Delta(delta, ||rho - sigma||_1, d) - |S(1/2) - S(1/2 + delta)|"""
    _check_pair(rho, sigma)
    if rho.dim == 1:
        # one state only: the bound and the entropy difference both vanish
        _check_delta(delta)
        return 0.0
    epsilon = min(trace_distance(rho, sigma), 2.0)
    bound = fannes_delta(delta, epsilon, rho.dim)
    return bound - abs(concavity_gap(rho, sigma, 0.5) - concavity_gap(rho, sigma, 0.5 + delta))


def midpoint_lower_bound(rho, sigma, delta):
    """Lower bound on S(1/2) obtained from the bound at 1/2 + delta and Fannes continuity"""
    _check_pair(rho, sigma)
    if rho.dim == 1:
        _check_delta(delta)
        return 0.0
    epsilon = min(trace_distance(rho, sigma), 2.0)
    return 0.125 * epsilon ** 2 - 0.5 * delta ** 2 * epsilon ** 2 - fannes_delta(delta, epsilon, rho.dim)
