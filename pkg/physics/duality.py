"""Generic dual-system engine: coordinate maps y(x), the Schwarzian {x, y},
the partner potentials W(x) and U(y), and the wavefunction relation
psi = (dx/dy)**(1/2) * phi.
"""
from dataclasses import dataclass
from typing import Callable, Tuple

import numpy as np
from scipy.integrate import trapezoid

from physics.errors import DomainError, SingularMapError

Sampler = Callable[[np.ndarray], np.ndarray]


@dataclass(frozen=True)
class MapDescriptor:
    """Monotone increasing map y(x) with analytic derivatives and inverse."""
    name: str
    forward: Sampler
    d1: Sampler
    d2: Sampler
    d3: Sampler
    inverse: Sampler
    domain_x: Tuple[float, float]
    domain_y: Tuple[float, float]

    def check_x(self, x):
        x = np.asarray(x, dtype=float)
        lo, hi = self.domain_x
        if not np.all(np.isfinite(x)) or np.any(x <= lo) or np.any(x >= hi):
            raise DomainError(f"x outside open domain {self.domain_x} of map '{self.name}'")
        return x

    def check_y(self, y):
        y = np.asarray(y, dtype=float)
        lo, hi = self.domain_y
        if not np.all(np.isfinite(y)) or np.any(y <= lo) or np.any(y >= hi):
            raise DomainError(f"y outside open domain {self.domain_y} of map '{self.name}'")
        return y


@dataclass(frozen=True)
class DualCouplings:
    """(lambda, nu, mu): coupling, shared constant and energy of the x-problem."""
    lam: float
    nu: float
    mu: float

    def __post_init__(self):
        if not all(np.isfinite(v) for v in (self.lam, self.nu, self.mu)):
            raise DomainError(f"couplings must be finite: {self}")


@dataclass(frozen=True)
class SampledFunction:
    """Function values at (possibly non-uniform) increasing coordinates."""
    coords: np.ndarray
    values: np.ndarray

    def norm_squared(self, weight=None) -> float:
        integrand = self.values ** 2 if weight is None else weight * self.values ** 2
        return float(trapezoid(integrand, self.coords))


def _scalar_or_array(x, value):
    return float(value) if np.ndim(x) == 0 else value


# Below this y, x = asinh(e^y) < 1e-86 and csch^3 x overflows
LOG_SINH_Y_MIN = -200.0


def log_sinh(x):
    # log(sinh x) without overflow at large x
    return x + np.log(-np.expm1(-2.0 * x)) - np.log(2.0)


def asinh_exp(y):
    """x = asinh(e^y), written as y + log(1 + sqrt(1 + e^(-2y))) for y > 0."""
    y = np.asarray(y, dtype=float)
    large = y + np.log1p(np.sqrt(1.0 + np.exp(-2.0 * np.abs(y))))
    small = np.arcsinh(np.exp(np.minimum(y, 0.0)))
    return _scalar_or_array(y, np.where(y > 0.0, large, small))


def _csch2(x):
    return 4.0 * np.exp(-2.0 * x) / np.expm1(-2.0 * x) ** 2


def log_sinh_map() -> MapDescriptor:
    """y = log sinh x, dy/dx = coth x, for x in (0, inf).

    y is supported on (LOG_SINH_Y_MIN, inf); further left x is not resolvable
    in double precision.
    """
    return MapDescriptor(
        name="log-sinh",
        forward=log_sinh,
        d1=lambda x: 1.0 / np.tanh(x),
        d2=lambda x: -_csch2(x),
        d3=lambda x: 2.0 * _csch2(x) / np.tanh(x),
        inverse=asinh_exp,
        domain_x=(0.0, np.inf),
        domain_y=(LOG_SINH_Y_MIN, np.inf),
    )


def affine_map(a: float = 1.0, b: float = 0.0) -> MapDescriptor:
    """y = a*x + b on the whole line; a > 0."""
    if not a > 0.0:
        raise SingularMapError(f"affine slope must be positive, got {a}")
    return MapDescriptor(
        name=f"affine({a}, {b})",
        forward=lambda x: a * x + b,
        d1=lambda x: np.full_like(np.asarray(x, dtype=float), a),
        d2=lambda x: np.zeros_like(np.asarray(x, dtype=float)),
        d3=lambda x: np.zeros_like(np.asarray(x, dtype=float)),
        inverse=lambda y: (y - b) / a,
        domain_x=(-np.inf, np.inf),
        domain_y=(-np.inf, np.inf),
    )


def schwarzian(m: MapDescriptor, x):
    """{x, y} = -(1/y'^2) [d/dx(y''/y') - (y''/y')^2 / 2], primes in x."""
    x = m.check_x(x)
    d1 = np.asarray(m.d1(x), dtype=float)
    if np.any(d1 == 0.0):
        raise SingularMapError(f"dy/dx vanishes on map '{m.name}'")
    r2 = m.d2(x) / d1
    r3 = m.d3(x) / d1
    # d/dx(y''/y') = y'''/y' - (y''/y')**2
    value = -(r3 - 1.5 * r2 * r2) / (d1 * d1)
    return _scalar_or_array(x, value)


def schwarzian_closed_form(x):
    """{x, y} for the log-sinh map: -(sech^2 tanh^2 + sech^2 - sech^4 / 2)."""
    x = np.asarray(x, dtype=float)
    if np.any(x <= 0.0):
        raise DomainError("closed-form Schwarzian needs x > 0")
    sech2 = 1.0 / np.cosh(x) ** 2
    tanh2 = np.tanh(x) ** 2
    return _scalar_or_array(x, -(sech2 * tanh2 + sech2 - 0.5 * sech2 * sech2))


def build_W(m: MapDescriptor, lam: float, nu: float, x):
    """W(x) = lambda (dy/dx)^2 + nu dy/dx."""
    x = m.check_x(x)
    d1 = m.d1(x)
    return _scalar_or_array(x, lam * d1 * d1 + nu * d1)


def build_U(m: MapDescriptor, mu: float, nu: float, y):
    """U(y) = -mu (dx/dy)^2 + nu dx/dy - {x, y}/2, evaluated at x = x(y)."""
    y = m.check_y(y)
    x = m.inverse(y)
    d1 = np.asarray(m.d1(x), dtype=float)
    if np.any(d1 == 0.0):
        raise SingularMapError(f"dy/dx vanishes on map '{m.name}'")
    dxdy = 1.0 / d1
    value = -mu * dxdy * dxdy + nu * dxdy - 0.5 * schwarzian(m, x)
    return _scalar_or_array(y, value)


def transform_wavefunction(m: MapDescriptor, phi: SampledFunction) -> SampledFunction:
    """psi(x) = (dx/dy)^(1/2) phi(y(x)), kept on the (non-uniform) image grid.

    The weighted norm  int |psi|^2 (dy/dx)^2 dx = int |phi|^2 dy  is preserved.
    """
    y = m.check_y(phi.coords)
    x = m.inverse(y)
    d1 = np.asarray(m.d1(x), dtype=float)
    if np.any(d1 <= 0.0):
        raise SingularMapError(f"dx/dy must be positive on the grid of map '{m.name}'")
    return SampledFunction(coords=x, values=np.sqrt(1.0 / d1) * phi.values)


def pullback_wavefunction(m: MapDescriptor, psi: SampledFunction) -> SampledFunction:
    """phi(y) = (dy/dx)^(1/2) psi(x(y)): the inverse of transform_wavefunction."""
    x = m.check_x(psi.coords)
    d1 = np.asarray(m.d1(x), dtype=float)
    if np.any(d1 <= 0.0):
        raise SingularMapError(f"dy/dx must be positive on the grid of map '{m.name}'")
    return SampledFunction(coords=m.forward(x), values=np.sqrt(d1) * psi.values)
