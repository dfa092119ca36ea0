"""Command handler for ``beatlaser steady``."""

import logging

import pandas as pd

from beatlaser.config.column_mappings import STATUS_OK, STEADY_COLUMNS
from beatlaser.config.settings import EXIT_NUMERICAL, EXIT_OK
from beatlaser.schemas.schema_run import CommandResult, RunConfig
from beatlaser.services.service_sweep import steady_row
from beatlaser.utils.errors import BeatLaserError, exit_code_for

logger = logging.getLogger(__name__)


def cmd_steady(config: RunConfig) -> CommandResult:
    """Single steady-state row with the nonclassicality quantifiers.

    Above threshold the row is still emitted, marked "unstable" with NaN
    moments, and the exit code is 2.
    """
    try:
        row = steady_row(config.params)
    except BeatLaserError as e:
        logger.error("steady failed: %s", e)
        return CommandResult(exit_code=exit_code_for(e))

    table = pd.DataFrame([row], columns=STEADY_COLUMNS)
    if row["status"] != STATUS_OK:
        logger.error(
            "No steady state (margin %.6g): %s", row["margin"], row["status"]
        )
        return CommandResult(exit_code=EXIT_NUMERICAL, table=table)
    return CommandResult(exit_code=EXIT_OK, table=table)
