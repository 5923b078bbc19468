from dataclasses import astuple

from physics.eigensolver import Grid
from physics.models import ESParams
from physics.verify import es_default_grid, verify_es_spectrum
from utils.config import RunConfig
from utils.output import emit_rows, exit_code
from utils.shared_context import logger

COLUMNS = ["n", "analytic", "numeric", "deviation"]


def handle_spectrum_es(cfg: RunConfig) -> int:
    """Tabulates every bound ES level, closed form against the finite-difference oracle."""
    if cfg.alpha is None or cfg.beta is None:
        logger.error("spectrum-es needs --alpha and --beta")
        return 2

    try:
        params = ESParams(cfg.alpha, cfg.beta)
        if not params.in_window:
            raise ValueError(f"beta={cfg.beta} must exceed alpha^2={cfg.alpha ** 2}")
        grid = Grid(*cfg.grid_overrides(astuple(es_default_grid(params)))) if cfg.has_overrides else None
        report = verify_es_spectrum(params, grid)
    except ValueError as e:
        logger.error(f"Invalid ES parameters: {e}")
        return 2

    emit_rows(report.rows, cfg.fmt, cfg.out, columns=COLUMNS)
    return exit_code([report])
