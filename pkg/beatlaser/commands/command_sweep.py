"""Command handler for ``beatlaser sweep``."""

import logging

from beatlaser.config.settings import EXIT_CONFIG, EXIT_OK
from beatlaser.schemas.schema_run import CommandResult, RunConfig
from beatlaser.services.service_sweep import run_sweep
from beatlaser.utils.errors import BeatLaserError, exit_code_for

logger = logging.getLogger(__name__)


def cmd_sweep(config: RunConfig) -> CommandResult:
    """Steady-state table over the configured grid.

    Unstable grid points are flagged in the ``status`` column and do not
    change the exit code.
    """
    if config.sweep is None:
        logger.error("sweep needs a 'sweep' block in the configuration")
        return CommandResult(exit_code=EXIT_CONFIG)
    try:
        table = run_sweep(config.params, config.sweep)
    except BeatLaserError as e:
        logger.error("sweep failed: %s", e)
        return CommandResult(exit_code=exit_code_for(e))
    return CommandResult(exit_code=EXIT_OK, table=table)
