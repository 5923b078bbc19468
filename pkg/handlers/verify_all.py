from physics.verify import verify_all
from utils.config import RunConfig
from utils.output import emit_rows, exit_code
from utils.shared_context import logger


def handle_verify_all(cfg: RunConfig) -> int:
    """Runs every check at its defaults and writes one record per report."""
    reports = verify_all()
    failed = [report.claim for report in reports if not report.passed]
    if failed:
        logger.warning(f"{len(failed)} of {len(reports)} reports failed: {failed}")
    else:
        logger.info(f"All {len(reports)} reports passed")
    emit_rows([report.to_record() for report in reports], cfg.fmt, cfg.out)
    return exit_code(reports)
