from dataclasses import astuple

from physics.eigensolver import Grid
from physics.models import ESParams
from physics.verify import ces_default_grid, verify_duality_exchange, verify_schwarzian
from utils.config import WORKED_ALPHA, WORKED_BETA, RunConfig
from utils.output import emit_rows, exit_code
from utils.shared_context import logger


def handle_duality_check(cfg: RunConfig) -> int:
    """Runs the duality exchange for one ES level plus the Schwarzian closure.

    Defaults to the worked chain alpha = 3/2, beta = 4, n = 0. Grid flags
    override the y-line grid; the x grid is always the refined ES default.
    """
    alpha = cfg.alpha if cfg.alpha is not None else WORKED_ALPHA
    beta = cfg.beta if cfg.beta is not None else WORKED_BETA

    try:
        params = ESParams(alpha, beta)
        y_grid = Grid(*cfg.grid_overrides(astuple(ces_default_grid()))) if cfg.has_overrides else None
        exchange = verify_duality_exchange(params, cfg.n, y_grid=y_grid)
    except ValueError as e:
        logger.error(f"Invalid duality parameters: {e}")
        return 2

    reports = [exchange, verify_schwarzian()]
    emit_rows([report.to_record() for report in reports], cfg.fmt, cfg.out)
    return exit_code(reports)
