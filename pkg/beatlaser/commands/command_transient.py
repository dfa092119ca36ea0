"""Command handler for ``beatlaser transient``.

Emits the moment time series of the RK4 route and the closed-form route side
by side, optionally with the Fock oracle and its diagnostics.
"""

import logging

import pandas as pd

from beatlaser.config.column_mappings import FOCK_COLUMNS, TRANSIENT_COLUMNS
from beatlaser.config.settings import EXIT_OK
from beatlaser.schemas.schema_fock import FockConfig
from beatlaser.schemas.schema_moments import MomentState
from beatlaser.schemas.schema_run import CommandResult, RunConfig
from beatlaser.services.service_coeffs import derive_coeffs
from beatlaser.services.service_compare import (
    analytic_state,
    fock_fields,
    fock_states,
    moment_fields,
    sampled_trajectory,
)
from beatlaser.utils.errors import BeatLaserError, exit_code_for

logger = logging.getLogger(__name__)


def cmd_transient(config: RunConfig, fock: bool = False) -> CommandResult:
    """Time series from the initial moments (default: vacuum) to t_final.

    Args:
        config: Normalized run configuration
        fock: Add Fock-oracle moment and diagnostic columns

    Returns:
        CommandResult with one row per sample time. Analytic columns are NaN
        in fixed phase mode. Exit code 2 on overflow or truncation failure.
    """
    state0 = config.initial or MomentState()
    integration = config.integration
    try:
        coeffs = derive_coeffs(config.params)
        states = sampled_trajectory(
            coeffs, state0, integration.t_final, integration.dt, integration.sample_dt
        )
        if not coeffs.averaged:
            logger.warning("Fixed phase mode: analytic columns are left empty")
        rows = []
        for state in states:
            elapsed = state.t - state0.t
            row = {"t": state.t}
            row.update(moment_fields(state, "ode"))
            row.update(moment_fields(analytic_state(coeffs, state0, elapsed), "analytic"))
            rows.append(row)

        columns = list(TRANSIENT_COLUMNS)
        if fock:
            fockcfg = config.fock or FockConfig()
            elapsed_times = [state.t - state0.t for state in states]
            for row, rho in zip(
                rows, fock_states(coeffs, fockcfg, state0, elapsed_times), strict=True
            ):
                row.update(fock_fields(rho))
            columns += FOCK_COLUMNS
    except BeatLaserError as e:
        logger.error("transient failed: %s", e)
        return CommandResult(exit_code=exit_code_for(e))

    return CommandResult(exit_code=EXIT_OK, table=pd.DataFrame(rows, columns=columns))
