"""The two concrete potentials and their analytic spectral data.

ES side:  W~(x) = -2 beta coth x + alpha(alpha-1) cosech^2 x on x > 0,
          E_n = -(beta/(alpha+n))^2 - (alpha+n)^2.
CES side: V(y) = A t^2 - B t - 3/4 t^4,  t = (1 + e^{-2y})^{-1/2},
          bound level -eps_n with sqrt(eps_n) the admissible root of a cubic.

The two are linked by lambda = alpha(alpha-1), nu = -2 beta,
mu = E_n + alpha(alpha-1), A = 1/2 - mu, B = -nu, eps_n = alpha(alpha-1) + 1/4.
"""
from dataclasses import dataclass
from typing import List, Optional, Tuple

import numpy as np
from scipy.special import expit

from physics.duality import DualCouplings, log_sinh
from physics.errors import (
    AmbiguousRootError,
    DomainError,
    NoAdmissibleRootError,
    SpectrumExhaustedError,
)
from physics.specfun import CubicCoeffs, jacobi_p, solve_cubic_real

# Roots this close to an admissibility boundary are treated as failing it
ADMISSIBILITY_MARGIN = 1e-12


@dataclass(frozen=True)
class ESParams:
    alpha: float
    beta: float

    def __post_init__(self):
        if not (np.isfinite(self.alpha) and np.isfinite(self.beta)):
            raise DomainError(f"ES parameters must be finite: {self}")
        if self.alpha <= 0.0:
            raise DomainError(f"alpha must be positive, got {self.alpha}")

    @property
    def in_window(self) -> bool:
        """The solvability window beta > alpha^2."""
        return self.beta > self.alpha ** 2


@dataclass(frozen=True)
class CESParams:
    A: float
    B: float

    def __post_init__(self):
        if not (np.isfinite(self.A) and np.isfinite(self.B)):
            raise DomainError(f"CES parameters must be finite: {self}")


@dataclass(frozen=True)
class CESLevel:
    """Bound level -eps of the CES potential; c = n + 1/2 + sqrt_eps."""
    n: int
    sqrt_eps: float
    eps: float
    c: float
    alpha: float


@dataclass(frozen=True)
class RootCandidate:
    root: float
    admissible: bool
    reason: str


@dataclass(frozen=True)
class ParameterChain:
    """ES parameters and level n carried through to the dual CES potential."""
    es: ESParams
    n: int
    es_energy: float
    couplings: DualCouplings
    ces: CESParams


def _check_level_index(n):
    if int(n) != n or n < 0:
        raise DomainError(f"level index must be a non-negative integer, got {n!r}")
    return int(n)


# --- ES potential ---

def es_potential(p: ESParams, x):
    """W~(x) = -2 beta coth x + alpha(alpha-1) cosech^2 x."""
    xa = np.asarray(x, dtype=float)
    if np.any(~np.isfinite(xa)) or np.any(xa <= 0.0):
        raise DomainError("ES potential is defined for x > 0 only")
    value = -2.0 * p.beta / np.tanh(xa) + p.alpha * (p.alpha - 1.0) / np.sinh(xa) ** 2
    return float(value) if np.ndim(x) == 0 else value


def es_energy(p: ESParams, n: int) -> float:
    """E_n = -(beta/(alpha+n))^2 - (alpha+n)^2; at (alpha+n)^2 = beta this is the threshold -2 beta."""
    n = _check_level_index(n)
    c = p.alpha + n
    if c * c > p.beta:
        raise SpectrumExhaustedError(
            f"level {n} lies outside the bound window (alpha+n)^2 < beta for alpha={p.alpha}, beta={p.beta}"
        )
    return -(p.beta / c) ** 2 - c * c


def es_bound_count(p: ESParams) -> int:
    """Number of n >= 0 with (alpha+n)^2 < beta."""
    count = 0
    while (p.alpha + count) ** 2 < p.beta:
        count += 1
    return count


def es_wavefunction(p: ESParams, n: int, x):
    """Unnormalized ES eigenfunction
    (u-1)^(a/2) (u+1)^(b/2) P_n^(a,b)(u), u = coth x, c = alpha+n, a = beta/c - c, b = -beta/c - c.
    """
    es_energy(p, n)
    xa = np.asarray(x, dtype=float)
    if np.any(~np.isfinite(xa)) or np.any(xa <= 0.0):
        raise DomainError("ES wavefunction is defined for x > 0 only")
    c = p.alpha + n
    a = p.beta / c - c
    b = -p.beta / c - c
    log_em1 = np.log(np.expm1(2.0 * xa))
    log_um1 = np.log(2.0) - log_em1
    log_up1 = np.log(2.0) + 2.0 * xa - log_em1
    u = 1.0 / np.tanh(xa)
    value = np.exp(0.5 * a * log_um1 + 0.5 * b * log_up1) * jacobi_p(n, a, b, u)
    if not np.all(np.isfinite(value)):
        raise DomainError("ES wavefunction overflowed; reduce the x range")
    return float(value) if np.ndim(x) == 0 else value


def es_regular_potential(p: ESParams, x):
    """Potential seen by chi in psi = sinh^alpha(x) chi(x): -2 beta coth x - alpha^2."""
    return -2.0 * p.beta / np.tanh(x) - p.alpha ** 2


def es_log_weight(p: ESParams, x):
    """log of the Sturm-Liouville weight sinh^(2 alpha) x for chi."""
    return 2.0 * p.alpha * log_sinh(x)


# --- parameter bridges ---

def couplings_from_es(p: ESParams, n: int) -> DualCouplings:
    """lambda = alpha(alpha-1), nu = -2 beta, mu = E_n + alpha(alpha-1)."""
    energy = es_energy(p, n)
    lam = p.alpha * (p.alpha - 1.0)
    return DualCouplings(lam=lam, nu=-2.0 * p.beta, mu=energy + lam)


def ces_from_couplings(mu: float, nu: float) -> CESParams:
    """A = 1/2 - mu, B = -nu."""
    return CESParams(A=0.5 - mu, B=-nu)


def couplings_from_ces(p: CESParams) -> Tuple[float, float]:
    """(mu, nu) = (1/2 - A, -B)."""
    return 0.5 - p.A, -p.B


def chain_from_es(p: ESParams, n: int) -> ParameterChain:
    couplings = couplings_from_es(p, n)
    return ParameterChain(
        es=p,
        n=int(n),
        es_energy=es_energy(p, n),
        couplings=couplings,
        ces=ces_from_couplings(couplings.mu, couplings.nu),
    )


def es_from_ces(level: CESLevel, p: CESParams) -> ESParams:
    """Recovered ES partner: alpha = sqrt(eps) + 1/2, beta = B/2."""
    return ESParams(alpha=level.alpha, beta=p.B / 2.0)


# --- CES potential ---

def ces_potential(p: CESParams, y):
    """V(y) = A/(1+e^{-2y}) - B/(1+e^{-2y})^{1/2} - 3/(4(1+e^{-2y})^2)."""
    ya = np.asarray(y, dtype=float)
    if np.any(~np.isfinite(ya)):
        raise DomainError("CES potential needs finite y")
    t2 = expit(2.0 * ya)
    value = p.A * t2 - p.B * np.sqrt(t2) - 0.75 * t2 * t2
    return float(value) if np.ndim(y) == 0 else value


def ces_energy_cubic(p: CESParams, n: int) -> CubicCoeffs:
    """Cubic in s = sqrt(eps_n) equivalent to
        (3/4 - A - s^2) c^2 + B^2/4 + c^4 = 0,   c = s + m,  m = n + 1/2.

    Since c^4 - s^2 c^2 = c^2 m (2s + m), the relation is
        c^2 (2 m s + k) + B^2/4 = 0,   k = m^2 + 3/4 - A,
    whose expansion gives
        2m s^3 + (k + 4m^2) s^2 + 2m (k + m^2) s + (m^2 k + B^2/4).
    """
    n = _check_level_index(n)
    m = n + 0.5
    k = m * m + 0.75 - p.A
    return CubicCoeffs(
        c3=2.0 * m,
        c2=k + 4.0 * m * m,
        c1=2.0 * m * (k + m * m),
        c0=m * m * k + p.B * p.B / 4.0,
    )


def ces_root_candidates(p: CESParams, n: int) -> List[RootCandidate]:
    """Every real root of the level-n cubic with its admissibility verdict.

    Admissible: s > 0 (decay as y -> -inf, alpha > 1/2) and B/(2c) - c > 0
    (decay as y -> +inf, equivalently (alpha+n)^2 < beta = B/2).
    """
    n = _check_level_index(n)
    candidates = []
    for s in solve_cubic_real(ces_energy_cubic(p, n)):
        c = n + 0.5 + s
        if s <= ADMISSIBILITY_MARGIN:
            candidates.append(RootCandidate(s, False, "sqrt_eps not positive"))
        elif p.B / (2.0 * c) - c <= ADMISSIBILITY_MARGIN:
            candidates.append(RootCandidate(s, False, "no decay as y -> +inf"))
        else:
            candidates.append(RootCandidate(s, True, "admissible"))
    return candidates


def ces_energy(p: CESParams, n: int) -> CESLevel:
    """The level-n bound state selected by the admissibility rule; energy is -eps."""
    candidates = ces_root_candidates(p, n)
    admissible = [cand.root for cand in candidates if cand.admissible]
    if not admissible:
        raise NoAdmissibleRootError(f"no bound level n={n} for A={p.A}, B={p.B}")
    if len(admissible) > 1:
        raise AmbiguousRootError(f"{len(admissible)} admissible roots for n={n}, A={p.A}, B={p.B}")
    s = admissible[0]
    return CESLevel(n=int(n), sqrt_eps=s, eps=s * s, c=n + 0.5 + s, alpha=s + 0.5)


def resolved_exponents(level: CESLevel, p: CESParams) -> Tuple[float, float]:
    """Exponents on (sqrt(z)-1) and (sqrt(z)+1) that give a normalizable eigenfunction."""
    shift = p.B / (4.0 * level.c)
    return -(level.c / 2.0 - shift), -(level.c / 2.0 + shift)


def printed_exponents(level: CESLevel, p: CESParams) -> Tuple[float, float]:
    """The duplicated pair -(c/2 - B/(4c)) on both factors; not normalizable."""
    e = -(level.c / 2.0 - p.B / (4.0 * level.c))
    return e, e


def ces_wavefunction(level: CESLevel, p: CESParams, y, exponents: Optional[Tuple[float, float]] = None):
    """Unnormalized CES eigenfunction

        z^(1/4) (u-1)^(e-) (u+1)^(e+) P_n^(B/2c - c, -B/2c - c)(u),
        z = 1 + e^{-2y},  u = sqrt(z) = coth x,

    with (e-, e+) = resolved_exponents unless given. Evaluated in log form.
    """
    ya = np.asarray(y, dtype=float)
    if np.any(~np.isfinite(ya)):
        raise DomainError("CES wavefunction needs finite y")
    e_minus, e_plus = exponents if exponents is not None else resolved_exponents(level, p)
    c = level.c
    log_u = 0.5 * np.logaddexp(0.0, -2.0 * ya)
    log_up1 = np.logaddexp(0.0, log_u)
    # (u - 1)(u + 1) = e^{-2y}
    log_um1 = -2.0 * ya - log_up1
    log_prefactor = 0.5 * log_u + e_minus * log_um1 + e_plus * log_up1
    with np.errstate(over="ignore", invalid="ignore"):
        value = np.exp(log_prefactor) * jacobi_p(level.n, p.B / (2.0 * c) - c, -p.B / (2.0 * c) - c, np.exp(log_u))
    if not np.all(np.isfinite(value)):
        raise DomainError("CES wavefunction overflowed at extreme y")
    return float(value) if np.ndim(y) == 0 else value


def energy_sum_residual(level: CESLevel, es_e: float, mu: float) -> float:
    """eps_n + E_n - mu - 1/4."""
    return level.eps + es_e - mu - 0.25
