"""
Hermitian matrix service
Dense Hermitian matrices, spectral calculus and divided-difference derivatives
"""
import logging
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from config import Config

logger = logging.getLogger(__name__)


class DomainError(ValueError):
    """An eigenvalue lies outside the domain of a scalar function"""


class NumericBackendError(RuntimeError):
    """The eigensolver failed to converge"""


@dataclass(frozen=True, eq=False)
class HermitianMatrix:
    """Immutable dense complex Hermitian matrix

    The constructor symmetrizes its input by averaging with the conjugate
    transpose, so round-off in file-sourced data never propagates.
    """

    entries: np.ndarray

    # let numpy scalars defer to __rmul__
    __array_ufunc__ = None

    def __post_init__(self):
        array = np.array(self.entries, dtype=complex)
        if array.ndim == 0:
            array = array.reshape(1, 1)
        if array.ndim != 2 or array.shape[0] != array.shape[1] or array.shape[0] < 1:
            raise ValueError(f"Hermitian matrix must be square with dim >= 1, got shape {array.shape}")
        if not np.all(np.isfinite(array)):
            raise ValueError("Hermitian matrix entries must be finite")

        array = 0.5 * (array + array.conj().T)
        array.setflags(write=False)
        object.__setattr__(self, 'entries', array)

    @classmethod
    def identity(cls, dim):
        return cls(np.eye(dim))

    @classmethod
    def zeros(cls, dim):
        return cls(np.zeros((dim, dim)))

    @classmethod
    def diagonal(cls, values):
        return cls(np.diag(np.asarray(values, dtype=float)))

    @classmethod
    def scalar(cls, value):
        return cls(np.array([[value]], dtype=float))

    @property
    def dim(self):
        return self.entries.shape[0]

    @cached_property
    def spectrum(self):
        """Eigendecomposition, computed once per matrix"""
        return spectral_decompose(self)

    def trace(self):
        return float(np.real(np.trace(self.entries)))

    def max_norm(self):
        """Largest absolute entry"""
        return float(np.max(np.abs(self.entries)))

    def spectral_norm(self):
        return float(np.max(np.abs(self.spectrum.eigenvalues)))

    def block(self, rows, cols):
        """Sub-block selected by two slices"""
        return HermitianMatrix(self.entries[rows, cols])

    def congruence(self, other):
        """Return X H X^dagger for an arbitrary square array X"""
        other = np.asarray(other)
        return HermitianMatrix(other @ self.entries @ other.conj().T)

    def shift(self, amount):
        """Return H + amount * I"""
        return HermitianMatrix(self.entries + amount * np.eye(self.dim))

    def _check_dim(self, other):
        if other.dim != self.dim:
            raise ValueError(f"Dimension mismatch: {self.dim} vs {other.dim}")

    def __add__(self, other):
        self._check_dim(other)
        return HermitianMatrix(self.entries + other.entries)

    def __sub__(self, other):
        self._check_dim(other)
        return HermitianMatrix(self.entries - other.entries)

    def __neg__(self):
        return HermitianMatrix(-self.entries)

    def __mul__(self, factor):
        if not np.isrealobj(factor):
            return NotImplemented
        return HermitianMatrix(float(factor) * self.entries)

    __rmul__ = __mul__

    def __repr__(self):
        return f"HermitianMatrix(dim={self.dim})"


@dataclass(frozen=True, eq=False)
class SpectralDecomposition:
    """Ascending eigenvalues with the unitary whose columns are eigenvectors"""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    def reconstruct(self, values=None):
        """Return U diag(values) U^dagger (defaults to the eigenvalues)"""
        if values is None:
            values = self.eigenvalues
        U = self.eigenvectors
        return HermitianMatrix((U * np.asarray(values)) @ U.conj().T)

    def to_eigenbasis(self, H):
        """Return U^dagger H U as a plain array"""
        U = self.eigenvectors
        return U.conj().T @ H.entries @ U

    def from_eigenbasis(self, array):
        U = self.eigenvectors
        return HermitianMatrix(U @ array @ U.conj().T)


@dataclass(frozen=True)
class PsdVerdict:
    """Minimum-eigenvalue certificate for an operator inequality gap"""

    min_eigenvalue: float
    tolerance: float
    is_psd: bool
    gap_norm: float

    def to_dict(self):
        return {
            'min_eigenvalue': self.min_eigenvalue,
            'tolerance': self.tolerance,
            'is_psd': self.is_psd,
            'gap_norm': self.gap_norm
        }


def spectral_decompose(H):
    """Eigendecomposition of a Hermitian matrix, eigenvalues ascending"""
    try:
        eigenvalues, eigenvectors = np.linalg.eigh(H.entries)
    except np.linalg.LinAlgError as e:
        logger.error(f"❌ Eigendecomposition failed for dim {H.dim}: {e}")
        raise NumericBackendError(f"Eigendecomposition did not converge: {e}") from e

    eigenvalues.setflags(write=False)
    eigenvectors.setflags(write=False)
    return SpectralDecomposition(eigenvalues=eigenvalues, eigenvectors=eigenvectors)


def apply_function(f, H):
    """Matrix function f(H) = U diag(f(lambda_i)) U^dagger"""
    decomposition = H.spectrum
    eigenvalues = f.admit(decomposition.eigenvalues)
    return decomposition.reconstruct(f.value(eigenvalues))


def spectral_map(H, fn):
    """Apply a plain vectorized callable to the spectrum, without domain checks"""
    decomposition = H.spectrum
    return decomposition.reconstruct(fn(decomposition.eigenvalues))


def inverse(H):
    """Inverse through the spectral decomposition"""
    eigenvalues = H.spectrum.eigenvalues
    if np.min(np.abs(eigenvalues)) < Config.DOMAIN_FLOOR:
        raise DomainError(
            f"Matrix is singular: eigenvalue {eigenvalues[np.argmin(np.abs(eigenvalues))]:.3e} "
            f"below floor {Config.DOMAIN_FLOOR:g}"
        )
    return spectral_map(H, np.reciprocal)


def inverse_sqrt(H):
    eigenvalues = H.spectrum.eigenvalues
    if eigenvalues[0] < Config.DOMAIN_FLOOR:
        raise DomainError(f"Matrix is not positive definite: eigenvalue {eigenvalues[0]:.3e}")
    return spectral_map(H, lambda values: 1.0 / np.sqrt(values))


def _confluent(x, y, threshold=None):
    if threshold is None:
        threshold = Config.CONFLUENCE_THRESHOLD
    scale = 1.0 + np.maximum(np.abs(x), np.abs(y))
    return np.abs(x - y) <= threshold * scale


def _first_differences(f, x, y):
    x, y = np.broadcast_arrays(np.asarray(x, dtype=float), np.asarray(y, dtype=float))
    confluent = _confluent(x, y)
    with np.errstate(divide='ignore', invalid='ignore'):
        secant = (f.value(x) - f.value(y)) / np.where(confluent, 1.0, x - y)
        tangent = f.deriv1(0.5 * (x + y))
    return np.where(confluent, tangent, secant)


def _second_differences(f, x, y, z):
    # symmetric in its arguments: divide across the widest pair
    lo, mid, hi = np.sort(np.stack(np.broadcast_arrays(x, y, z)).astype(float), axis=0)
    clustered = _confluent(lo, hi, Config.CLUSTER_THRESHOLD)
    with np.errstate(divide='ignore', invalid='ignore'):
        spread = (_first_differences(f, lo, mid) - _first_differences(f, mid, hi)) / np.where(clustered, 1.0, lo - hi)
        # f'' averaged over the triangle's edge midpoints, exact when f'' is quadratic
        curvature = (f.deriv2(0.5 * (lo + mid)) + f.deriv2(0.5 * (mid + hi)) + f.deriv2(0.5 * (lo + hi))) / 6.0
    return np.where(clustered, curvature, spread)


def first_divided_difference(f, x, y):
    """f^[1](x, y), switching to f'((x+y)/2) when x and y are confluent"""
    f.admit(np.array([x, y], dtype=float), interior=True)
    return float(_first_differences(f, x, y))


def second_divided_difference(f, x, y, z):
    """f^[2](x, y, z) with the confluent limit f''/2"""
    f.admit(np.array([x, y, z], dtype=float), interior=True)
    return float(_second_differences(f, x, y, z))


def loewner_matrix(f, eigenvalues):
    """Matrix of first divided differences f^[1](lambda_i, lambda_j)"""
    eigenvalues = f.admit(eigenvalues, interior=True)
    return _first_differences(f, eigenvalues[:, None], eigenvalues[None, :])


def frechet_derivative(f, B, H):
    """Daleckii-Krein formula: U (L o U^dagger H U) U^dagger with L the Loewner matrix"""
    B._check_dim(H)
    decomposition = B.spectrum
    loewner = loewner_matrix(f, decomposition.eigenvalues)
    return decomposition.from_eigenbasis(loewner * decomposition.to_eigenbasis(H))


def second_directional_derivative(f, B, H):
    """d^2/dt^2 f(B + tH) at t = 0, from second divided differences"""
    B._check_dim(H)
    decomposition = B.spectrum
    eigenvalues = f.admit(decomposition.eigenvalues, interior=True)
    tensor = _second_differences(
        f,
        eigenvalues[:, None, None],
        eigenvalues[None, :, None],
        eigenvalues[None, None, :]
    )
    rotated = decomposition.to_eigenbasis(H)
    return decomposition.from_eigenbasis(2.0 * np.einsum('ikj,ik,kj->ij', tensor, rotated, rotated))


def min_eigenvalue(H):
    return float(H.spectrum.eigenvalues[0])


def psd_certificate(G, tol_scale=None):
    """Certify G >= 0 up to tol_scale * (1 + largest absolute eigenvalue)"""
    if tol_scale is None:
        tol_scale = Config.PSD_TOLERANCE
    if tol_scale < 0:
        raise ValueError(f"tol_scale must be >= 0, got {tol_scale}")

    eigenvalues = G.spectrum.eigenvalues
    smallest = float(eigenvalues[0])
    gap_norm = float(np.max(np.abs(eigenvalues)))
    tolerance = tol_scale * (1.0 + gap_norm)

    return PsdVerdict(
        min_eigenvalue=smallest,
        tolerance=tolerance,
        is_psd=smallest >= -tolerance,
        gap_norm=gap_norm
    )
