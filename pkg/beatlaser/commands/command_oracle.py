"""Command handler for ``beatlaser oracle-check``."""

import logging

import pandas as pd

from beatlaser.config.column_mappings import MOMENT_QUANTITIES, ORACLE_COLUMNS
from beatlaser.config.settings import EXIT_NUMERICAL, EXIT_OK
from beatlaser.schemas.schema_fock import FockConfig
from beatlaser.schemas.schema_moments import MomentState
from beatlaser.schemas.schema_run import CommandResult, RunConfig
from beatlaser.services.service_coeffs import derive_coeffs
from beatlaser.services.service_compare import (
    analytic_state,
    fock_fields,
    fock_states,
    moment_fields,
    oracle_tolerance,
    sampled_trajectory,
)
from beatlaser.utils.errors import BeatLaserError, exit_code_for

logger = logging.getLogger(__name__)

DEFAULT_ORACLE_SAMPLES = 10


def cmd_oracle_check(config: RunConfig) -> CommandResult:
    """Compare the Fock oracle with the ODE and analytic routes.

    Rows are emitted every ``integration.sample_dt`` (default a tenth of
    t_final). A row is ok when every |Fock - ODE| deviation stays within
    max(1e-3, 10 x boundary population).

    Returns:
        CommandResult with ORACLE_COLUMNS; exit code 2 if any row fails or
        the truncation overflows.
    """
    state0 = config.initial or MomentState()
    integration = config.integration
    sample_dt = integration.sample_dt or (
        integration.t_final / DEFAULT_ORACLE_SAMPLES if integration.t_final else None
    )
    fockcfg = config.fock or FockConfig()
    try:
        coeffs = derive_coeffs(config.params)
        states = sampled_trajectory(
            coeffs, state0, integration.t_final, integration.dt, sample_dt
        )
        elapsed_times = [state.t - state0.t for state in states]
        rhos = fock_states(coeffs, fockcfg, state0, elapsed_times)
    except BeatLaserError as e:
        logger.error("oracle-check failed: %s", e)
        return CommandResult(exit_code=exit_code_for(e))

    rows = []
    for state, elapsed, rho in zip(states, elapsed_times, rhos, strict=True):
        row = {"t": state.t}
        row.update(moment_fields(state, "ode"))
        row.update(moment_fields(analytic_state(coeffs, state0, elapsed), "analytic"))
        row.update(fock_fields(rho))
        deviation = max(
            abs(row[f"{q}_fock"] - row[f"{q}_ode"]) for q in MOMENT_QUANTITIES
        )
        row["max_abs_dev"] = deviation
        row["tolerance"] = oracle_tolerance(row["boundary_pop"])
        row["ok"] = bool(deviation <= row["tolerance"])
        rows.append(row)

    table = pd.DataFrame(rows, columns=ORACLE_COLUMNS)
    failed = int((~table["ok"]).sum())
    logger.info(
        "Oracle check finished: %d of %d rows within tolerance",
        len(rows) - failed,
        len(rows),
    )
    if failed:
        return CommandResult(exit_code=EXIT_NUMERICAL, table=table)
    return CommandResult(exit_code=EXIT_OK, table=table)
