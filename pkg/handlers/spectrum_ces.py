from dataclasses import astuple

from physics.eigensolver import Grid
from physics.models import CESParams
from physics.verify import ces_default_grid, verify_ces_spectrum
from utils.config import RunConfig
from utils.output import emit_rows, exit_code
from utils.shared_context import logger

COLUMNS = ["n", "sqrt_eps", "energy", "numeric", "deviation", "cubic_roots", "admissible", "selected_root"]


def handle_spectrum_ces(cfg: RunConfig) -> int:
    """Tabulates the CES levels selected from the cubic roots, against the oracle.

    An empty spectrum is a valid answer: the table has only its header.
    """
    if cfg.A is None or cfg.B is None:
        logger.error("spectrum-ces needs --A and --B")
        return 2

    try:
        params = CESParams(cfg.A, cfg.B)
        grid = Grid(*cfg.grid_overrides(astuple(ces_default_grid()))) if cfg.has_overrides else None
        report = verify_ces_spectrum(params, cfg.n_max, grid)
    except ValueError as e:
        logger.error(f"Invalid CES parameters: {e}")
        return 2

    if not report.rows:
        logger.warning(f"No bound levels for A={cfg.A}, B={cfg.B}")
    emit_rows(report.rows, cfg.fmt, cfg.out, columns=COLUMNS)
    return exit_code([report])
