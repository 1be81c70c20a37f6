"""
Function catalog service
Scalar function descriptors with derivatives, operator convexity metadata and
forward evaluation of their integral representations by Gauss-Legendre quadrature
"""
import logging
import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Optional, Tuple

import numpy as np
from scipy.special import xlogy

from config import Config
from services.hermitian import DomainError, HermitianMatrix

logger = logging.getLogger(__name__)


class CatalogError(ValueError):
    """Unknown function name or invalid function parameter"""


@dataclass(frozen=True)
class RepresentationData:
    """f(x) = f(0) + a x + b x^2 + integral of (x/(1+l) - 1 + l/(x+l)) dmu(l) on [0, inf)

    The measure is a density on [support_min, inf) plus optional point masses
    given as (location, mass) pairs.
    """

    f_at_zero: float
    a: float = 0.0
    b: float = 0.0
    measure_density: Optional[Callable] = None
    support_min: float = 0.0
    atoms: Tuple[Tuple[float, float], ...] = ()

    def __post_init__(self):
        if self.b < 0:
            raise ValueError(f"Quadratic coefficient b must be >= 0, got {self.b}")
        if self.support_min < 0:
            raise ValueError(f"Density support must start at >= 0, got {self.support_min}")
        for location, mass in self.atoms:
            if location <= 0 or mass < 0:
                raise ValueError(f"Invalid point mass ({location}, {mass})")


@dataclass(frozen=True)
class FunctionDescriptor:
    """A scalar function with its first two derivatives and domain"""

    name: str
    value: Callable
    deriv1: Callable
    deriv2: Callable
    domain_min: float = -math.inf
    domain_inclusive: bool = True
    operator_convex: bool = False
    representation: Optional[RepresentationData] = None
    params: Tuple[float, ...] = field(default=())
    # deriv1 and deriv2 stay finite at domain_min
    smooth_at_boundary: bool = False

    @property
    def label(self):
        if self.params:
            return f"{self.name}:{':'.join(f'{p:g}' for p in self.params)}"
        return self.name

    def admit(self, points, interior=False):
        """Check points against the domain and return them ready for evaluation

        Inclusive domains accept points down to domain_min - floor and clip
        them onto domain_min. Exclusive domains reject anything below
        domain_min + floor, and so does derivative evaluation (interior=True)
        unless the derivatives stay finite at the boundary.
        """
        points = np.asarray(points, dtype=float)
        if not np.isfinite(self.domain_min):
            return points

        floor = Config.DOMAIN_FLOOR
        strict = not self.domain_inclusive or (interior and not self.smooth_at_boundary)
        if strict:
            outside = points < self.domain_min + floor
        else:
            outside = points < self.domain_min - floor

        if np.any(outside):
            offending = float(np.min(points[outside]))
            raise DomainError(
                f"Eigenvalue {offending:.6g} is outside the domain of {self.label} "
                f"(x {'>' if strict else '>='} {self.domain_min:g})"
            )

        return np.maximum(points, self.domain_min)

    def describe(self):
        return {
            'name': self.label,
            'operator_convex': self.operator_convex,
            'domain_min': self.domain_min,
            'has_representation': self.representation is not None
        }


def _xlogx(x):
    x = np.asarray(x, dtype=float)
    return xlogy(x, x)


def _one_plus_x_log(x):
    return _xlogx(1.0 + np.asarray(x, dtype=float))


def _square():
    return FunctionDescriptor(
        name='square',
        value=lambda x: np.square(x),
        deriv1=lambda x: 2.0 * np.asarray(x, dtype=float),
        deriv2=lambda x: np.full_like(np.asarray(x, dtype=float), 2.0),
        operator_convex=True,
        representation=RepresentationData(f_at_zero=0.0, b=1.0)
    )


def _xlogx_descriptor():
    # Lebesgue measure: the integrand x(x-1)/((1+l)(x+l)) integrates to x log x
    return FunctionDescriptor(
        name='xlogx',
        value=_xlogx,
        deriv1=lambda x: np.log(x) + 1.0,
        deriv2=lambda x: 1.0 / np.asarray(x, dtype=float),
        domain_min=0.0,
        domain_inclusive=True,
        operator_convex=True,
        representation=RepresentationData(f_at_zero=0.0, measure_density=np.ones_like)
    )


def _neglog():
    return FunctionDescriptor(
        name='neglog',
        value=lambda x: -np.log(x),
        deriv1=lambda x: -1.0 / np.asarray(x, dtype=float),
        deriv2=lambda x: 1.0 / np.square(x),
        domain_min=0.0,
        domain_inclusive=False,
        operator_convex=True
    )


def _resolvent(shift):
    if not shift > 0:
        raise CatalogError(f"Resolvent shift must be > 0, got {shift}")

    return FunctionDescriptor(
        name='resolvent',
        value=lambda x: 1.0 / (shift + np.asarray(x, dtype=float)),
        deriv1=lambda x: -1.0 / np.square(shift + np.asarray(x, dtype=float)),
        deriv2=lambda x: 2.0 / np.power(shift + np.asarray(x, dtype=float), 3),
        domain_min=0.0,
        domain_inclusive=True,
        operator_convex=True,
        representation=RepresentationData(
            f_at_zero=1.0 / shift,
            a=-1.0 / (shift * (1.0 + shift)),
            atoms=((shift, 1.0 / shift),)
        ),
        params=(shift,),
        smooth_at_boundary=True
    )


def _one_plus_x_log_descriptor():
    return FunctionDescriptor(
        name='one_plus_x_log',
        value=_one_plus_x_log,
        deriv1=lambda x: np.log1p(x) + 1.0,
        deriv2=lambda x: 1.0 / (1.0 + np.asarray(x, dtype=float)),
        domain_min=0.0,
        domain_inclusive=True,
        operator_convex=True,
        representation=RepresentationData(
            f_at_zero=0.0,
            a=2.0 * math.log(2.0),
            measure_density=lambda lam: (lam - 1.0) / lam,
            support_min=1.0
        ),
        smooth_at_boundary=True
    )


def _g_counter():
    return FunctionDescriptor(
        name='g_counter',
        value=lambda x: 0.5 * np.square(x) - _one_plus_x_log(x),
        deriv1=lambda x: np.asarray(x, dtype=float) - np.log1p(x) - 1.0,
        deriv2=lambda x: np.asarray(x, dtype=float) / (1.0 + np.asarray(x, dtype=float)),
        domain_min=0.0,
        domain_inclusive=True,
        operator_convex=False,
        smooth_at_boundary=True
    )


_BUILDERS = {
    'square': _square,
    'xlogx': _xlogx_descriptor,
    'neglog': _neglog,
    'one_plus_x_log': _one_plus_x_log_descriptor,
    'g_counter': _g_counter
}


def catalog(name, params=()):
    """Build the descriptor for a cataloged function"""
    params = tuple(float(p) for p in params)

    if name == 'resolvent':
        if len(params) != 1:
            raise CatalogError(f"resolvent takes exactly one shift parameter, got {len(params)}")
        return _resolvent(params[0])

    if name not in _BUILDERS:
        raise CatalogError(f"Unknown function '{name}'. Available: {', '.join(list_catalog())}")
    if params:
        raise CatalogError(f"Function '{name}' takes no parameters")

    return _BUILDERS[name]()


def parse_function_name(text):
    """Parse the command line vocabulary, e.g. 'xlogx' or 'resolvent:0.5'"""
    name, *raw = text.strip().split(':')
    try:
        params = [float(p) for p in raw]
    except ValueError:
        raise CatalogError(f"Invalid parameter in function name '{text}'")
    return catalog(name, params)


def list_catalog():
    return ['square', 'xlogx', 'neglog', 'resolvent:<s>', 'one_plus_x_log', 'g_counter']


@lru_cache(maxsize=16)
def gauss_legendre_unit(nodes):
    """Gauss-Legendre nodes and weights on [0, 1]"""
    if nodes < 16:
        raise ValueError(f"Quadrature needs at least 16 nodes, got {nodes}")
    points, weights = np.polynomial.legendre.leggauss(nodes)
    t = 0.5 * (points + 1.0)
    w = 0.5 * weights
    t.setflags(write=False)
    w.setflags(write=False)
    return t, w


def _density_on_nodes(rep, nodes):
    # lambda = m + t/(1-t) maps [0, 1) onto [m, inf)
    t, w = gauss_legendre_unit(nodes)
    m = rep.support_min
    lam = m + t / (1.0 - t)
    return t, w, lam, np.asarray(rep.measure_density(lam), dtype=float)


def _representation_values(rep, x, nodes):
    x = np.atleast_1d(np.asarray(x, dtype=float))
    total = rep.f_at_zero + rep.a * x + rep.b * np.square(x)

    if rep.measure_density is not None:
        t, w, lam, density = _density_on_nodes(rep, nodes)
        m = rep.support_min
        # k(x, l) dl = x(x-1) / ((1+l)(x+l)) dl, with the Jacobian folded in
        outer = (1.0 + m) * (1.0 - t) + t
        inner = (x[:, None] + m) * (1.0 - t[None, :]) + t[None, :]
        kernel = (x * (x - 1.0))[:, None] / (outer[None, :] * inner)
        total = total + kernel @ (w * density)

    for location, mass in rep.atoms:
        total = total + mass * (x / (1.0 + location) - x / (x + location))

    return total


def evaluate_via_representation(rep, x, nodes=None):
    """Evaluate f(x) from its integral representation"""
    if nodes is None:
        nodes = Config.QUADRATURE_NODES
    if x < 0:
        raise ValueError(f"Integral representation is defined on [0, inf), got x = {x}")
    return float(_representation_values(rep, x, nodes)[0])


def representation_mass(rep, nodes=None):
    """Integral of 1/(1+l)^2 dmu(l), finite for every admissible measure"""
    if nodes is None:
        nodes = Config.QUADRATURE_NODES

    mass = sum(weight / (1.0 + location) ** 2 for location, weight in rep.atoms)
    if rep.measure_density is not None:
        t, w, lam, density = _density_on_nodes(rep, nodes)
        outer = (1.0 + rep.support_min) * (1.0 - t) + t
        mass += float(np.sum(w * density / np.square(outer)))
    return mass


def apply_via_representation(rep, H, nodes=None):
    """Matrix function built from the representation, spectrum by spectrum"""
    if nodes is None:
        nodes = Config.QUADRATURE_NODES

    decomposition = H.spectrum
    eigenvalues = decomposition.eigenvalues
    if eigenvalues[0] < -Config.DOMAIN_FLOOR:
        raise DomainError(f"Eigenvalue {eigenvalues[0]:.6g} is outside [0, inf)")
    return decomposition.reconstruct(_representation_values(rep, np.maximum(eigenvalues, 0.0), nodes))


def bregman_via_representation(rep, A, B, nodes=None):
    """b (A-B)^2 + integral of l (B+l)^-1 (A-B) (A+l)^-1 (A-B) (B+l)^-1 dmu(l)"""
    if nodes is None:
        nodes = Config.QUADRATURE_NODES
    A._check_dim(B)

    spec_a, spec_b = A.spectrum, B.spectrum
    for label, eigenvalues in (('A', spec_a.eigenvalues), ('B', spec_b.eigenvalues)):
        if eigenvalues[0] < Config.DOMAIN_FLOOR:
            raise DomainError(f"{label} must be positive definite, smallest eigenvalue {eigenvalues[0]:.6g}")

    difference = (A - B).entries
    # (A-B) written from A's eigenbasis into B's eigenbasis
    mixed = spec_b.eigenvectors.conj().T @ difference @ spec_a.eigenvectors

    locations, coefficients = [], []
    for location, mass in rep.atoms:
        locations.append(location)
        coefficients.append(mass * location)
    if rep.measure_density is not None:
        t, w, lam, density = _density_on_nodes(rep, nodes)
        locations.extend(lam)
        coefficients.extend(w * density * lam / np.square(1.0 - t))

    result = rep.b * (difference @ difference)
    if locations:
        lam = np.asarray(locations)
        resolvent_b = 1.0 / (spec_b.eigenvalues[None, :] + lam[:, None])
        resolvent_a = 1.0 / (spec_a.eigenvalues[None, :] + lam[:, None])
        in_b_basis = np.einsum(
            'q,qi,ik,qk,jk,qj->ij',
            np.asarray(coefficients), resolvent_b, mixed, resolvent_a, mixed.conj(), resolvent_b
        )
        U = spec_b.eigenvectors
        result = result + U @ in_b_basis @ U.conj().T

    return HermitianMatrix(result)
