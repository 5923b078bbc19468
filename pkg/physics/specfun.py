"""Special-function and root-finding kernels: Jacobi polynomials, real cubic roots,
central finite differences."""
import math
from dataclasses import dataclass
from typing import Callable, List, Optional

import numpy as np
from scipy.special import binom

from physics.errors import DegenerateCubicError, DomainError

EPS = np.finfo(float).eps


def _require_finite(**values):
    for name, value in values.items():
        if not np.all(np.isfinite(value)):
            raise DomainError(f"{name} must be finite, got {value!r}")


def _jacobi_explicit(n, a, b, z):
    """Explicit binomial sum; valid where the recurrence divides by zero."""
    zm = (z - 1.0) / 2.0
    zp = (z + 1.0) / 2.0
    total = np.zeros_like(z)
    for s in range(n + 1):
        total = total + binom(n + a, n - s) * binom(n + b, s) * zm ** s * zp ** (n - s)
    return total


def jacobi_p(n: int, a: float, b: float, z):
    """Jacobi polynomial P_n^(a,b)(z) by upward three-term recurrence in degree.

    z may be a scalar or an array and may lie outside [-1, 1].
    """
    if int(n) != n or n < 0:
        raise DomainError(f"degree must be a non-negative integer, got {n!r}")
    n = int(n)
    _require_finite(a=a, b=b, z=z)
    scalar = np.ndim(z) == 0
    z = np.asarray(z, dtype=float)

    p_prev = np.ones_like(z)
    if n == 0:
        return float(p_prev) if scalar else p_prev
    p_curr = (a - b) / 2.0 + (1.0 + (a + b) / 2.0) * z
    for k in range(2, n + 1):
        ab = 2 * k + a + b
        a1 = 2 * k * (k + a + b) * (ab - 2)
        if a1 == 0.0:
            p_curr = _jacobi_explicit(n, a, b, z)
            break
        a2 = (ab - 1) * (a * a - b * b)
        a3 = (ab - 2) * (ab - 1) * ab
        a4 = 2 * (k + a - 1) * (k + b - 1) * ab
        p_prev, p_curr = p_curr, ((a2 + a3 * z) * p_curr - a4 * p_prev) / a1
    return float(p_curr) if scalar else p_curr


@dataclass(frozen=True)
class CubicCoeffs:
    """c3*s**3 + c2*s**2 + c1*s + c0."""
    c3: float
    c2: float
    c1: float
    c0: float

    def __post_init__(self):
        _require_finite(c3=self.c3, c2=self.c2, c1=self.c1, c0=self.c0)

    def __call__(self, s):
        return ((self.c3 * s + self.c2) * s + self.c1) * s + self.c0

    def derivative(self, s):
        return (3.0 * self.c3 * s + 2.0 * self.c2) * s + self.c1


def _depressed_roots(p: float, q: float) -> List[float]:
    """Real roots of t**3 + p*t + q, classified by the discriminant."""
    disc = (q / 2.0) ** 2 + (p / 3.0) ** 3
    scale = (q / 2.0) ** 2 + abs(p / 3.0) ** 3
    if scale == 0.0:
        return [0.0, 0.0, 0.0]
    if abs(disc) <= 1e-14 * scale:
        # repeated root
        u = np.cbrt(-q / 2.0)
        return [2.0 * u, -u, -u]
    if disc > 0.0:
        # one real root; pick the non-cancelling cube root
        u = np.cbrt(-q / 2.0 - math.copysign(math.sqrt(disc), q))
        return [u - p / (3.0 * u) if u != 0.0 else 0.0]
    r = 2.0 * math.sqrt(-p / 3.0)
    arg = (3.0 * q / (2.0 * p)) * math.sqrt(-3.0 / p)
    phi = math.acos(min(1.0, max(-1.0, arg)))
    return [r * math.cos(phi / 3.0 - 2.0 * math.pi * k / 3.0) for k in range(3)]


def _polish(c: CubicCoeffs, s: float, max_steps: int = 8) -> float:
    """Safeguarded Newton: a step is kept only if it lowers the residual."""
    residual = abs(c(s))
    for _ in range(max_steps):
        if residual <= 1e-12 * max(1.0, abs(s) ** 3 * abs(c.c3)):
            break
        slope = c.derivative(s)
        if slope == 0.0:
            break
        trial = s - c(s) / slope
        trial_residual = abs(c(trial))
        if trial_residual >= residual:
            break
        s, residual = trial, trial_residual
    return s


def solve_cubic_real(c: CubicCoeffs) -> List[float]:
    """All real roots (with multiplicity), sorted ascending."""
    if c.c3 == 0.0:
        raise DegenerateCubicError("leading coefficient c3 is zero")
    b, cc, d = c.c2 / c.c3, c.c1 / c.c3, c.c0 / c.c3
    p = cc - b * b / 3.0
    q = 2.0 * b ** 3 / 27.0 - b * cc / 3.0 + d
    roots = [_polish(c, t - b / 3.0) for t in _depressed_roots(p, q)]
    return sorted(float(s) for s in roots)


def finite_diff(f: Callable[[float], float], x: float, order: int = 1, h: Optional[float] = None) -> float:
    """Central-difference derivative of order 1, 2 or 3 with O(h**2) error."""
    if order not in (1, 2, 3):
        raise DomainError(f"order must be 1, 2 or 3, got {order}")
    if h is None:
        h = EPS ** (1.0 / (order + 2)) * max(1.0, abs(x))
    if h <= 0.0:
        raise DomainError(f"step must be positive, got {h}")
    if order == 1:
        return (f(x + h) - f(x - h)) / (2.0 * h)
    if order == 2:
        return (f(x + h) - 2.0 * f(x) + f(x - h)) / (h * h)
    return (f(x + 2 * h) - 2.0 * f(x + h) + 2.0 * f(x - h) - f(x - 2 * h)) / (2.0 * h ** 3)
