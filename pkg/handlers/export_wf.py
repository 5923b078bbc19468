from dataclasses import astuple

import numpy as np

from physics.eigensolver import Grid, eigen_lowest
from physics.errors import NoAdmissibleRootError
from physics.models import CESParams, ESParams, ces_energy, ces_wavefunction, es_bound_count, es_wavefunction
from physics.verify import ces_default_grid, ces_operator, es_default_grid, es_operator
from utils.config import RunConfig
from utils.output import emit_rows
from utils.shared_context import logger

COLUMNS = ["coordinate", "analytic", "numeric"]


def _normalized(values: np.ndarray, h: float) -> np.ndarray:
    return values / np.sqrt(np.sum(values ** 2) * h)


def _rows(grid: Grid, analytic: np.ndarray, numeric: np.ndarray):
    analytic = _normalized(analytic, grid.spacing)
    # numeric already has its leftmost lobe positive; follow it
    if analytic @ numeric < 0.0:
        analytic = -analytic
    return [
        {"coordinate": float(q), "analytic": float(a), "numeric": float(v)}
        for q, a, v in zip(grid.nodes, analytic, numeric)
    ]


def _es_curve(cfg: RunConfig):
    params = ESParams(cfg.alpha, cfg.beta)
    if cfg.n >= es_bound_count(params):
        raise ValueError(f"level {cfg.n} is not bound for alpha={cfg.alpha}, beta={cfg.beta}")
    default = es_default_grid(params)
    grid = Grid(*cfg.grid_overrides(astuple(default))) if cfg.has_overrides else default
    pair = eigen_lowest(es_operator(params, grid), cfg.n + 1)[cfg.n]
    return _rows(grid, es_wavefunction(params, cfg.n, grid.nodes), pair.vector)


def _ces_curve(cfg: RunConfig):
    params = CESParams(cfg.A, cfg.B)
    level = ces_energy(params, cfg.n)
    default = ces_default_grid()
    grid = Grid(*cfg.grid_overrides(astuple(default))) if cfg.has_overrides else default
    pair = eigen_lowest(ces_operator(params, grid), cfg.n + 1)[cfg.n]
    return _rows(grid, ces_wavefunction(level, params, grid.nodes), pair.vector)


def handle_export_wf(cfg: RunConfig) -> int:
    """Exports level n as (coordinate, analytic, numeric), both L2-normalized and sign-aligned.

    With --alpha/--beta the curve is the ES eigenfunction in x; with --A/--B it
    is the CES eigenfunction in y.
    """
    try:
        if cfg.alpha is not None and cfg.beta is not None:
            rows = _es_curve(cfg)
        elif cfg.A is not None and cfg.B is not None:
            rows = _ces_curve(cfg)
        else:
            logger.error("export-wf needs either --alpha/--beta or --A/--B")
            return 2
    except NoAdmissibleRootError as e:
        logger.error(f"No level to export: {e}")
        return 1
    except ValueError as e:
        logger.error(f"Invalid export parameters: {e}")
        return 2

    emit_rows(rows, cfg.fmt, cfg.out, columns=COLUMNS)
    return 0
