"""Finite-difference oracle for -d^2/dq^2 + V(q) (hbar = 2m = 1).

Uniform grids with Dirichlet endpoints, a symmetric tridiagonal operator,
Sturm-sequence bisection for the lowest eigenvalues and inverse iteration
for the eigenvectors.
"""
from dataclasses import dataclass, field
from typing import Callable, List, Sequence, Tuple

import numpy as np
from numba import njit
from scipy.linalg import solve_banded

from physics.duality import SampledFunction
from physics.errors import DomainError
from utils.shared_context import logger

EPS = np.finfo(float).eps
INVERSE_ITERATIONS = 5
SHIFT_OFFSET = 1e-10


@dataclass(frozen=True)
class Grid:
    """Interior nodes q_min + i*h, i = 1..n_points, h = (q_max - q_min)/(n_points + 1)."""
    q_min: float
    q_max: float
    n_points: int

    def __post_init__(self):
        if not (np.isfinite(self.q_min) and np.isfinite(self.q_max)) or self.q_min >= self.q_max:
            raise DomainError(f"grid needs finite q_min < q_max, got [{self.q_min}, {self.q_max}]")
        if int(self.n_points) != self.n_points or self.n_points < 3:
            raise DomainError(f"grid needs at least 3 interior points, got {self.n_points}")

    @property
    def spacing(self) -> float:
        return (self.q_max - self.q_min) / (self.n_points + 1)

    @property
    def nodes(self) -> np.ndarray:
        return self.q_min + self.spacing * np.arange(1, self.n_points + 1)

    def refined(self) -> "Grid":
        """Same interval with the spacing halved exactly."""
        return Grid(self.q_min, self.q_max, 2 * self.n_points + 1)


@dataclass(frozen=True)
class TridiagonalOperator:
    diagonal: np.ndarray
    off_diagonal: np.ndarray
    grid: Grid
    off_squared: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        if self.diagonal.shape != (self.grid.n_points,) or self.off_diagonal.shape != (self.grid.n_points - 1,):
            raise DomainError("operator arrays do not match the grid dimension")
        object.__setattr__(self, "off_squared", self.off_diagonal ** 2)

    @property
    def dimension(self) -> int:
        return self.grid.n_points

    @property
    def scale(self) -> float:
        """Infinity-norm bound max|d_i| + 2 max|e_i|."""
        return float(np.max(np.abs(self.diagonal)) + 2.0 * np.max(np.abs(self.off_diagonal)))

    def matvec(self, v: np.ndarray) -> np.ndarray:
        out = self.diagonal * v
        out[:-1] += self.off_diagonal * v[1:]
        out[1:] += self.off_diagonal * v[:-1]
        return out

    def gershgorin(self) -> Tuple[float, float]:
        radius = np.zeros_like(self.diagonal)
        radius[:-1] += np.abs(self.off_diagonal)
        radius[1:] += np.abs(self.off_diagonal)
        return float(np.min(self.diagonal - radius)), float(np.max(self.diagonal + radius))


@dataclass(frozen=True)
class EigenPair:
    """Energy and eigenvector normalized so that sum(v^2) * h = 1."""
    energy: float
    vector: np.ndarray
    grid: Grid


def _sample(potential: Callable, g: Grid) -> np.ndarray:
    values = np.asarray(potential(g.nodes), dtype=float)
    if values.shape != (g.n_points,):
        values = np.broadcast_to(values, (g.n_points,)).astype(float)
    if not np.all(np.isfinite(values)):
        raise DomainError("potential is not finite on every interior node")
    return values


def discretize(potential: Callable, g: Grid) -> TridiagonalOperator:
    """Three-point stencil: diagonal 2/h^2 + V(q_i), off-diagonal -1/h^2."""
    h2 = g.spacing ** 2
    diagonal = 2.0 / h2 + _sample(potential, g)
    off = np.full(g.n_points - 1, -1.0 / h2)
    return TridiagonalOperator(diagonal, off, g)


def discretize_factored(potential: Callable, log_weight: Callable, g: Grid) -> TridiagonalOperator:
    """Symmetrized Sturm-Liouville form of -w^{-1} (w chi')' + V chi.

    With u = sqrt(w) chi the operator is symmetric tridiagonal and u samples
    the original wavefunction. The left end is a regular singular point where
    w vanishes (no flux through it); the right end is Dirichlet.
    """
    h = g.spacing
    nodes = g.nodes
    log_w = np.asarray(log_weight(nodes), dtype=float)
    log_w_half = np.asarray(log_weight(nodes + 0.5 * h), dtype=float)
    if not (np.all(np.isfinite(log_w)) and np.all(np.isfinite(log_w_half))):
        raise DomainError("weight is not positive and finite on the grid")
    right = np.exp(log_w_half - log_w)
    left = np.zeros_like(right)
    left[1:] = np.exp(log_w_half[:-1] - log_w[1:])
    diagonal = (left + right) / h ** 2 + _sample(potential, g)
    off = -np.exp(log_w_half[:-1] - 0.5 * (log_w[:-1] + log_w[1:])) / h ** 2
    return TridiagonalOperator(diagonal, off, g)


@njit(cache=True)
def _sturm_count(diagonal, off_squared, sigma, pivmin):
    """Number of eigenvalues strictly below sigma (negative LDL^T pivots)."""
    count = 0
    d = diagonal[0] - sigma
    if abs(d) < pivmin:
        d = -pivmin
    if d < 0.0:
        count += 1
    for i in range(1, diagonal.size):
        d = diagonal[i] - sigma - off_squared[i - 1] / d
        if abs(d) < pivmin:
            d = -pivmin
        if d < 0.0:
            count += 1
    return count


@njit(cache=True)
def _bisect_lowest(diagonal, off_squared, k, lower, upper, abstol, pivmin):
    values = np.empty(k)
    lo_start = lower
    for j in range(k):
        lo = lo_start
        hi = upper
        for _ in range(256):
            if hi - lo <= abstol + 2.0 * 2.220446049250313e-16 * max(abs(lo), abs(hi)):
                break
            mid = 0.5 * (lo + hi)
            if _sturm_count(diagonal, off_squared, mid, pivmin) > j:
                hi = mid
            else:
                lo = mid
        values[j] = 0.5 * (lo + hi)
        lo_start = lo
    return values


def _pivmin(t: TridiagonalOperator) -> float:
    return np.finfo(float).tiny * max(1.0, float(np.max(t.off_squared)))


def sturm_count(t: TridiagonalOperator, sigma: float) -> int:
    """Number of eigenvalues of t strictly below sigma."""
    return int(_sturm_count(t.diagonal, t.off_squared, float(sigma), _pivmin(t)))


def eigenvalues_lowest(t: TridiagonalOperator, k: int) -> np.ndarray:
    """The k smallest eigenvalues by Sturm-sequence bisection."""
    if int(k) != k or not 1 <= k <= t.dimension:
        raise DomainError(f"k must lie in [1, {t.dimension}], got {k}")
    lower, upper = t.gershgorin()
    abstol = EPS * t.scale
    return _bisect_lowest(t.diagonal, t.off_squared, int(k), lower, upper, abstol, _pivmin(t))


def _orient(v: np.ndarray) -> np.ndarray:
    # leftmost significant lobe positive
    idx = int(np.argmax(np.abs(v) > 1e-3 * np.max(np.abs(v))))
    return v if v[idx] > 0.0 else -v


def eigen_lowest(t: TridiagonalOperator, k: int) -> List[EigenPair]:
    """The k lowest eigenpairs; vectors by inverse iteration, reorthogonalized."""
    energies = eigenvalues_lowest(t, k)
    h = t.grid.spacing
    rng = np.random.default_rng(0)
    banded = np.zeros((3, t.dimension))
    banded[0, 1:] = t.off_diagonal
    banded[2, :-1] = t.off_diagonal
    pairs = []
    for energy in energies:
        banded[1] = t.diagonal - (energy + SHIFT_OFFSET * max(1.0, abs(energy)))
        v = rng.standard_normal(t.dimension)
        for _ in range(INVERSE_ITERATIONS):
            v = solve_banded((1, 1), banded, v, check_finite=False)
            for pair in pairs:
                v -= (pair.vector @ v) * h * pair.vector
            v /= np.sqrt((v @ v) * h)
        v = _orient(v)
        residual = np.linalg.norm(t.matvec(v) - energy * v) * np.sqrt(h)
        logger.debug(f"eigenpair E={energy:.12g} residual={residual:.3e} scale={t.scale:.3e}")
        pairs.append(EigenPair(energy=float(energy), vector=v, grid=t.grid))
    return pairs


def rayleigh_quotient(t: TridiagonalOperator, v) -> float:
    """<v, T v> / <v, v>; a SampledFunction is first resampled onto the grid by
    linear interpolation (zero outside its coordinate range)."""
    if isinstance(v, SampledFunction):
        order = np.argsort(v.coords)
        v = np.interp(t.grid.nodes, v.coords[order], v.values[order], left=0.0, right=0.0)
    v = np.asarray(v, dtype=float)
    if v.shape != (t.dimension,):
        raise DomainError(f"vector length {v.shape} does not match dimension {t.dimension}")
    norm = v @ v
    if norm == 0.0:
        raise DomainError("Rayleigh quotient of the zero vector")
    return float(v @ t.matvec(v) / norm)


def richardson(coarse, fine, order: float = 2.0):
    """Eliminates the leading h^order error term from results at h and h/2."""
    coarse = np.asarray(coarse, dtype=float)
    fine = np.asarray(fine, dtype=float)
    return fine + (fine - coarse) / (2.0 ** order - 1.0)


def richardson_table(values: Sequence, orders: Sequence[float]):
    """Romberg-style elimination over results at h, h/2, h/4, ...

    Column j removes the h^orders[j] term; len(values) must be len(orders) + 1.
    """
    if len(values) != len(orders) + 1:
        raise DomainError(f"{len(orders)} orders need {len(orders) + 1} grid levels, got {len(values)}")
    row = [np.asarray(v, dtype=float) for v in values]
    for order in orders:
        row = [richardson(row[i], row[i + 1], order) for i in range(len(row) - 1)]
    return row[0]


def extrapolated_eigenvalues(build: Callable[[Grid], TridiagonalOperator], g: Grid, k: int,
                             orders: Sequence[float] = (2.0,)) -> np.ndarray:
    """Lowest k eigenvalues on g and its successive refinements, Richardson-extrapolated."""
    levels = []
    grid = g
    for _ in range(len(orders) + 1):
        levels.append(eigenvalues_lowest(build(grid), k))
        grid = grid.refined()
    logger.debug(f"Richardson correction on {g.n_points} points: {np.max(np.abs(levels[-1] - levels[0])):.3e}")
    return richardson_table(levels, orders)
