"""
Inequality engine
Modulus of convexity, matrix Bregman divergence, the Bregman lower bound on the
modulus, the strengthened arithmetic-harmonic inequality and the block dilation
"""
import logging
import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from config import Config
from services.function_catalog import FunctionDescriptor, catalog
from services.hermitian import (
    DomainError,
    HermitianMatrix,
    apply_function,
    frechet_derivative,
    inverse,
    inverse_sqrt,
    min_eigenvalue,
    psd_certificate,
    second_directional_derivative,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ConvexityInstance:
    """Positive definite pair (A, B), a weight 0 < c < 1 and a function f"""

    A: HermitianMatrix
    B: HermitianMatrix
    c: float
    f: FunctionDescriptor

    def __post_init__(self):
        self.A._check_dim(self.B)
        if not 0.0 < self.c < 1.0:
            raise ValueError(f"c must lie in (0, 1), got {self.c}")
        for label, matrix in (('A', self.A), ('B', self.B)):
            smallest = min_eigenvalue(matrix)
            if smallest <= Config.DOMAIN_FLOOR:
                raise DomainError(f"{label} must be positive definite, smallest eigenvalue {smallest:.6g}")

    @property
    def dim(self):
        return self.A.dim


@dataclass(frozen=True)
class MixtureOperator:
    """M(weight) = weight A + (1 - weight) B"""

    value: HermitianMatrix


class Dilation(NamedTuple):
    W: np.ndarray
    T: HermitianMatrix
    T1: HermitianMatrix
    T2: HermitianMatrix


def _check_weight(weight, name='weight'):
    if not 0.0 <= weight <= 1.0:
        raise ValueError(f"{name} must lie in [0, 1], got {weight}")


def _combine(A, B, weight):
    return weight * A + (1.0 - weight) * B


def mixture(inst, weight):
    _check_weight(weight)
    return MixtureOperator(value=_combine(inst.A, inst.B, weight))


def convexity_modulus(f, A, B, c):
    """c f(A) + (1-c) f(B) - f(cA + (1-c)B) for any c in [0, 1]"""
    _check_weight(c, 'c')
    return c * apply_function(f, A) + (1.0 - c) * apply_function(f, B) - apply_function(f, _combine(A, B, c))


def modulus_of_convexity(inst):
    return convexity_modulus(inst.f, inst.A, inst.B, inst.c)


def bregman_divergence(f, A, B):
    """f(A) - f(B) - Df(B)[A - B]"""
    return apply_function(f, A) - apply_function(f, B) - frechet_derivative(f, B, A - B)


def bregman_resolvent_closed_form(s, A, B):
    """(B+s)^-1 (A-B) (A+s)^-1 (A-B) (B+s)^-1, the Bregman divergence of 1/(s+x)"""
    if not s > 0:
        raise ValueError(f"Resolvent shift must be > 0, got {s}")
    A._check_dim(B)

    outer = inverse(B.shift(s)).entries
    middle = inverse(A.shift(s)).entries
    difference = (A - B).entries
    return HermitianMatrix(outer @ difference @ middle @ difference @ outer)


def in_midpoint_band(c):
    return abs(c - 0.5) <= Config.BRANCH_THRESHOLD


def theorem1_rhs(inst):
    """Bregman lower bound on the modulus of convexity

    Away from the midpoint: c(1-c)/(1-2c)^2 D_f(M(1-c), M(c)).
    Inside the midpoint band: (1/8) d^2/dx^2 f(M(1/2) + x(A-B)) at x = 0.
    """
    c = inst.c
    if not in_midpoint_band(c):
        factor = c * (1.0 - c) / (1.0 - 2.0 * c) ** 2
        return factor * bregman_divergence(inst.f, _combine(inst.A, inst.B, 1.0 - c), _combine(inst.A, inst.B, c))

    midpoint = _combine(inst.A, inst.B, 0.5)
    return 0.125 * second_directional_derivative(inst.f, midpoint, inst.A - inst.B)


def theorem1_gap(inst):
    return modulus_of_convexity(inst) - theorem1_rhs(inst)


def midpoint_gap(f, A, B):
    """The c = 1/2 case on its own"""
    return theorem1_gap(ConvexityInstance(A=A, B=B, c=0.5, f=f))


def _require_positive_definite(**matrices):
    for label, matrix in matrices.items():
        smallest = min_eigenvalue(matrix)
        if smallest < Config.DOMAIN_FLOOR:
            raise DomainError(f"{label} must be positive definite, smallest eigenvalue {smallest:.6g}")


def strengthened_ah_gap(A, B):
    """(A^-1 + B^-1)/2 - 2(A+B)^-1 - 2 (A+B)^-1 (A-B) (A+B)^-1 (A-B) (A+B)^-1"""
    A._check_dim(B)
    _require_positive_definite(A=A, B=B)

    harmonic = inverse(A + B)
    S = harmonic.entries
    difference = (A - B).entries
    correction = HermitianMatrix(S @ difference @ S @ difference @ S)

    return 0.5 * (inverse(A) + inverse(B)) - 2.0 * harmonic - 2.0 * correction


def congruence_reduced_gaps(A, B):
    """Eigenvalues of C = A^-1/2 B A^-1/2 and the scalar gaps they reduce to"""
    A._check_dim(B)
    _require_positive_definite(A=A, B=B)

    gammas = B.congruence(inverse_sqrt(A).entries).spectrum.eigenvalues
    gaps = (1.0 - gammas) ** 2 / (2.0 * gammas * (1.0 + gammas)) - 2.0 * (1.0 - gammas) ** 2 / (1.0 + gammas) ** 3
    return gammas, gaps


def build_dilation(A, B, c):
    """W with blocks (sqrt(c) I, -sqrt(1-c) I; sqrt(1-c) I, sqrt(c) I), T = diag(A, B)"""
    A._check_dim(B)
    _check_weight(c, 'c')

    n = A.dim
    identity = np.eye(n)
    p, q = math.sqrt(c), math.sqrt(1.0 - c)
    W = np.block([[p * identity, -q * identity], [q * identity, p * identity]])

    T_entries = np.zeros((2 * n, 2 * n), dtype=complex)
    T_entries[:n, :n] = A.entries
    T_entries[n:, n:] = B.entries
    T = HermitianMatrix(T_entries)

    return Dilation(W=W, T=T, T1=T.congruence(W), T2=T.congruence(W.conj().T))


def dilation_residuals(A, B, c):
    """Max-entry residuals of W unitarity and of the (T1 +/- T2)/2 block formulas"""
    dilation = build_dilation(A, B, c)
    n = A.dim
    W = dilation.W

    mean_expected = np.zeros((2 * n, 2 * n), dtype=complex)
    mean_expected[:n, :n] = (c * A + (1.0 - c) * B).entries
    mean_expected[n:, n:] = (c * B + (1.0 - c) * A).entries

    half_difference = math.sqrt(c * (1.0 - c)) * (A - B).entries
    spread_expected = np.zeros((2 * n, 2 * n), dtype=complex)
    spread_expected[:n, n:] = half_difference
    spread_expected[n:, :n] = half_difference

    mean = 0.5 * (dilation.T1 + dilation.T2).entries
    spread = 0.5 * (dilation.T1 - dilation.T2).entries
    return {
        'unitarity': float(np.max(np.abs(W @ W.conj().T - np.eye(2 * n)))),
        'mean_blocks': float(np.max(np.abs(mean - mean_expected))),
        'difference_blocks': float(np.max(np.abs(spread - spread_expected)))
    }


def dilation_block_rhs(f, A, B, c):
    """Upper-left block of the midpoint bound applied to the dilated pair (T1, T2)"""
    dilation = build_dilation(A, B, c)
    midpoint = 0.5 * (dilation.T1 + dilation.T2)
    bound = 0.125 * second_directional_derivative(f, midpoint, dilation.T1 - dilation.T2)
    upper = slice(0, A.dim)
    return bound.block(upper, upper)


def midpoint_from_dilation_check(A, B, c, f=None, tol_scale=None):
    """PSD verdict on the modulus minus the block extracted from the dilated midpoint bound"""
    if f is None:
        f = catalog('resolvent', [1.0])
    if not 0.0 < c < 1.0:
        raise ValueError(f"c must lie in (0, 1), got {c}")
    _require_positive_definite(A=A, B=B)

    gap = convexity_modulus(f, A, B, c) - dilation_block_rhs(f, A, B, c)
    return psd_certificate(gap, tol_scale)
